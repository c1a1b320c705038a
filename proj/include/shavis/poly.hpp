#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "shavis/primes.hpp"
#include "shavis/rational.hpp"

namespace shavis {

/// Dense univariate polynomial with arbitrary-precision integer coefficients,
/// coefficient index = degree.  Leading coefficient nonzero unless zero poly.
class IntPolynomial {
public:
    IntPolynomial() = default;
    explicit IntPolynomial(std::vector<Int> coeffs) : c_(std::move(coeffs)) { trim(); }
    static IntPolynomial constant(Int v) { return IntPolynomial({std::move(v)}); }
    static IntPolynomial monomial(Int v, long deg) {
        std::vector<Int> c(deg + 1, Int(0));
        c[deg] = std::move(v);
        return IntPolynomial(std::move(c));
    }

    bool is_zero() const { return c_.empty(); }
    long degree() const { return static_cast<long>(c_.size()) - 1; }
    const Int& coeff(long i) const {
        static const Int zero(0);
        return (i >= 0 && i <= degree()) ? c_[i] : zero;
    }
    const Int& leading() const { return c_.back(); }
    const std::vector<Int>& coeffs() const { return c_; }

    Int operator()(const Int& x) const {
        Int acc = 0;
        for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * x + *it;
        return acc;
    }
    Rat operator()(const Rat& x) const {
        Rat acc = 0;
        for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * x + *it;
        return acc;
    }

    friend IntPolynomial operator+(const IntPolynomial& a, const IntPolynomial& b) {
        std::vector<Int> c(std::max(a.c_.size(), b.c_.size()), Int(0));
        for (size_t i = 0; i < a.c_.size(); ++i) c[i] += a.c_[i];
        for (size_t i = 0; i < b.c_.size(); ++i) c[i] += b.c_[i];
        return IntPolynomial(std::move(c));
    }
    friend IntPolynomial operator-(const IntPolynomial& a, const IntPolynomial& b) {
        std::vector<Int> c(std::max(a.c_.size(), b.c_.size()), Int(0));
        for (size_t i = 0; i < a.c_.size(); ++i) c[i] += a.c_[i];
        for (size_t i = 0; i < b.c_.size(); ++i) c[i] -= b.c_[i];
        return IntPolynomial(std::move(c));
    }
    friend IntPolynomial operator*(const IntPolynomial& a, const IntPolynomial& b) {
        if (a.is_zero() || b.is_zero()) return {};
        std::vector<Int> c(a.c_.size() + b.c_.size() - 1, Int(0));
        for (size_t i = 0; i < a.c_.size(); ++i)
            for (size_t j = 0; j < b.c_.size(); ++j) c[i + j] += a.c_[i] * b.c_[j];
        return IntPolynomial(std::move(c));
    }
    friend IntPolynomial operator*(const Int& k, const IntPolynomial& a) {
        if (k == 0) return {};
        std::vector<Int> c = a.c_;
        for (auto& x : c) x *= k;
        return IntPolynomial(std::move(c));
    }
    friend bool operator==(const IntPolynomial& a, const IntPolynomial& b) { return a.c_ == b.c_; }

    IntPolynomial derivative() const {
        if (degree() < 1) return {};
        std::vector<Int> c(degree());
        for (long i = 1; i <= degree(); ++i) c[i - 1] = Int(i) * c_[i];
        return IntPolynomial(std::move(c));
    }

    /// x^deg * f(1/x): roots map to reciprocals.
    IntPolynomial reversed() const {
        std::vector<Int> c(c_.rbegin(), c_.rend());
        return IntPolynomial(std::move(c));
    }

    Int content() const {
        Int g = 0;
        for (auto& x : c_) g = gcd(g, x);
        return g;
    }
    IntPolynomial primitive_part() const {
        if (is_zero()) return {};
        Int g = content();
        std::vector<Int> c = c_;
        for (auto& x : c) x /= g;
        if (c.back() < 0)
            for (auto& x : c) x = -x;
        return IntPolynomial(std::move(c));
    }

    std::string str(const std::string& var = "x") const {
        if (is_zero()) return "0";
        std::string out;
        for (long i = degree(); i >= 0; --i) {
            if (c_[i] == 0) continue;
            if (!out.empty()) out += c_[i] > 0 ? " + " : " - ";
            else if (c_[i] < 0) out += "-";
            Int a = abs(c_[i]);
            if (a != 1 || i == 0) out += a.get_str();
            if (i > 0) {
                if (a != 1) out += "*";
                out += var;
                if (i > 1) out += "^" + std::to_string(i);
            }
        }
        return out;
    }

private:
    void trim() {
        while (!c_.empty() && c_.back() == 0) c_.pop_back();
    }
    std::vector<Int> c_;
};

/// Exact division; throws if remainder nonzero.
inline IntPolynomial exact_div(const IntPolynomial& a, const IntPolynomial& b) {
    if (b.is_zero()) throw std::invalid_argument("division by zero polynomial");
    std::vector<Int> rem(a.coeffs());
    long da = a.degree(), db = b.degree();
    if (da < db) {
        if (a.is_zero()) return {};
        throw std::domain_error("exact_div: not divisible");
    }
    std::vector<Int> q(da - db + 1, Int(0));
    for (long i = da - db; i >= 0; --i) {
        Int lead = rem[i + db];
        if (lead % b.leading() != 0) throw std::domain_error("exact_div: not divisible");
        Int f = lead / b.leading();
        q[i] = f;
        for (long j = 0; j <= db; ++j) rem[i + j] -= f * b.coeff(j);
    }
    for (auto& r : rem)
        if (r != 0) throw std::domain_error("exact_div: not divisible");
    return IntPolynomial(std::move(q));
}

namespace detail {

/// Primitive gcd over Z via pseudo-remainders (degrees here are small).
inline IntPolynomial poly_gcd(IntPolynomial a, IntPolynomial b) {
    a = a.is_zero() ? a : a.primitive_part();
    b = b.is_zero() ? b : b.primitive_part();
    while (!b.is_zero()) {
        long da = a.degree(), db = b.degree();
        if (da < db) { std::swap(a, b); continue; }
        // pseudo-remainder of lead(b)^(da-db+1) * a by b
        IntPolynomial r = pow_int(b.leading(), da - db + 1) * a;
        for (long i = da - db; i >= 0 && !r.is_zero() && r.degree() >= db; ) {
            long d = r.degree() - db;
            Int f = r.leading() / b.leading();
            r = r - f * IntPolynomial::monomial(1, d) * b;
            i = d - 1;
        }
        a = b;
        b = r.is_zero() ? r : r.primitive_part();
    }
    return a.is_zero() ? a : a.primitive_part();
}

}  // namespace detail

/// f with repeated factors stripped: f / gcd(f, f').
inline IntPolynomial squarefree_part(const IntPolynomial& f) {
    if (f.degree() < 1) return f;
    IntPolynomial g = detail::poly_gcd(f, f.derivative());
    if (g.degree() < 1) return f.primitive_part();
    return exact_div(Int(g.leading()) * f, g).primitive_part();
}

/// All integer roots, via p-adic lifting past the Cauchy bound (no coefficient
/// factorization, so astronomically large constant terms are fine).
inline std::vector<Int> integer_roots(const IntPolynomial& f_in) {
    if (f_in.is_zero()) throw std::invalid_argument("integer_roots: zero polynomial");
    IntPolynomial f = squarefree_part(f_in);
    if (f.degree() < 1) return {};
    // Cauchy bound on |root|.
    Int bound = 1;
    for (long i = 0; i < f.degree(); ++i) {
        Int q = abs(f.coeff(i)) / abs(f.leading()) + 1;
        if (q > bound) bound = q;
    }
    bound += 1;
    // Pick an odd prime where f stays squarefree and the degree does not drop.
    for (long p : {3L, 5L, 7L, 11L, 13L, 17L, 19L, 23L, 29L, 31L, 37L, 41L, 43L, 47L}) {
        Int P(p);
        if (f.leading() % p == 0) continue;
        // squarefree mod p <=> gcd(f, f') has no common root mod p; test via resultant-free
        // check: no residue is a common root of f and f' mod p works only for small p, so
        // instead require all roots mod p to be simple.
        std::vector<long> simple_roots;
        bool ok = true;
        IntPolynomial df = f.derivative();
        for (long r = 0; r < p; ++r) {
            if (f(Int(r)) % p == 0) {
                if (df(Int(r)) % p == 0) { ok = false; break; }
                simple_roots.push_back(r);
            }
        }
        if (!ok) continue;
        // Hensel-lift each simple root until p^k > 2*bound, then test the
        // centered representative exactly.
        std::vector<Int> out;
        for (long r0 : simple_roots) {
            Int pk(p), r(r0);
            while (pk <= 2 * bound) {
                Int pk2 = pk * pk;
                Int corr = mod_pos(f(r), pk2) * inv_mod(mod_pos(-df(r), pk2), pk2);
                r = mod_pos(r + corr, pk2);
                pk = pk2;
            }
            Int cand = r;
            if (cand > pk / 2) cand -= pk;
            if (f_in(cand) == 0) out.push_back(cand);
        }
        std::sort(out.begin(), out.end());
        return out;
    }
    throw std::domain_error("integer_roots: no usable lifting prime");
}

/// Rational roots with denominator dividing d (d >= 1).
inline std::vector<Rat> rational_roots_denominator_bounded(const IntPolynomial& f, const Int& d) {
    // roots p/q with q | d are d*root integer roots of f(x/d) * d^deg.
    std::vector<Int> scaled(f.degree() + 1);
    for (long i = 0; i <= f.degree(); ++i)
        scaled[i] = f.coeff(i) * pow_int(d, f.degree() - i);
    std::vector<Rat> out;
    for (const Int& z : integer_roots(IntPolynomial(std::move(scaled)))) {
        Rat r(z, d);
        r.canonicalize();
        if (f(r) == 0) out.push_back(r);
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

/// All rational roots (denominator divides the leading coefficient).
inline std::vector<Rat> rational_roots(const IntPolynomial& f) {
    return rational_roots_denominator_bounded(f, abs(f.leading()));
}

/// Clear denominators of a rational-coefficient polynomial: returns (g, m) with
/// g = m * f integral, m > 0 minimal of the lcm form.
inline std::pair<IntPolynomial, Int> clear_denominators(const std::vector<Rat>& coeffs) {
    Int m = 1;
    for (auto& q : coeffs) m = lcm(m, den(q));
    std::vector<Int> c(coeffs.size());
    for (size_t i = 0; i < coeffs.size(); ++i) c[i] = num(coeffs[i]) * (m / den(coeffs[i]));
    return {IntPolynomial(std::move(c)), m};
}

}  // namespace shavis
