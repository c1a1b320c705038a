#pragma once

#include <gmpxx.h>

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

namespace shavis {

using Int = mpz_class;
using Rat = mpq_class;

inline Int num(const Rat& q) { return Int(q.get_num()); }
inline Int den(const Rat& q) { return Int(q.get_den()); }

inline bool is_integer(const Rat& q) { return q.get_den() == 1; }

/// p-adic valuation of a nonzero integer.
inline long valuation(Int n, const Int& p) {
    if (n == 0) throw std::invalid_argument("valuation of zero");
    long v = 0;
    Int r;
    while (true) {
        Int q;
        mpz_fdiv_qr(q.get_mpz_t(), r.get_mpz_t(), n.get_mpz_t(), p.get_mpz_t());
        if (r != 0) break;
        n = q;
        ++v;
    }
    return v;
}

/// p-adic valuation of a nonzero rational.
inline long valuation(const Rat& q, const Int& p) {
    if (q == 0) throw std::invalid_argument("valuation of zero");
    long v = valuation(num(q), p);
    if (v == 0) v = -valuation(den(q), p);
    return v;
}

inline Int pow_int(Int base, unsigned long e) {
    Int r;
    mpz_pow_ui(r.get_mpz_t(), base.get_mpz_t(), e);
    return r;
}

/// Nonnegative remainder of a mod m (m > 0).
inline Int mod_pos(const Int& a, const Int& m) {
    Int r;
    mpz_fdiv_r(r.get_mpz_t(), a.get_mpz_t(), m.get_mpz_t());
    return r;
}

/// Inverse of a mod m; throws if not invertible.
inline Int inv_mod(const Int& a, const Int& m) {
    Int r;
    if (!mpz_invert(r.get_mpz_t(), a.get_mpz_t(), m.get_mpz_t()))
        throw std::domain_error("inv_mod: not invertible");
    return r;
}

/// Residue of a rational with denominator prime to m.
inline Int mod_pos(const Rat& q, const Int& m) {
    return mod_pos(Int(num(q) * inv_mod(den(q), m)), m);
}

/// Disambiguate GMP expression templates (convertible to both Int and Rat).
template <class U>
inline Int mod_pos(const __gmp_expr<mpz_t, U>& a, const Int& m) {
    return mod_pos(Int(a), m);
}
template <class U>
inline Int mod_pos(const __gmp_expr<mpq_t, U>& q, const Int& m) {
    return mod_pos(Rat(q), m);
}

inline Int gcd(const Int& a, const Int& b) {
    Int r;
    mpz_gcd(r.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return r;
}

inline Int lcm(const Int& a, const Int& b) {
    Int r;
    mpz_lcm(r.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return r;
}

inline Int isqrt(const Int& n) {
    Int r;
    mpz_sqrt(r.get_mpz_t(), n.get_mpz_t());
    return r;
}

inline bool is_square(const Int& n) {
    return n >= 0 && mpz_perfect_square_p(n.get_mpz_t()) != 0;
}

/// Parse an integer or "num/den" literal.
inline Rat parse_rational(const std::string& s) {
    Rat q;
    if (q.set_str(s, 10) != 0)
        throw std::invalid_argument("bad rational literal: " + s);
    q.canonicalize();
    if (q.get_den() <= 0) throw std::invalid_argument("bad rational literal: " + s);
    return q;
}

/// Decimal string, rationals as "num/den" when not integral.
inline std::string to_string(const Rat& q) {
    return is_integer(q) ? num(q).get_str() : num(q).get_str() + "/" + den(q).get_str();
}

/// Accurate natural log of |n| for huge integers.
inline double log_abs(const Int& n) {
    if (n == 0) throw std::invalid_argument("log of zero");
    long exp2;
    double d = mpz_get_d_2exp(&exp2, n.get_mpz_t());
    return std::log(std::abs(d)) + static_cast<double>(exp2) * 0.6931471805599453094;
}

/// log max(|num|, den): the logarithmic Weil height of a rational.
inline double weil_height(const Rat& q) {
    if (q == 0) return 0.0;
    Int n = abs(num(q)), d = den(q);
    return log_abs(n > d ? n : d);
}

}  // namespace shavis
