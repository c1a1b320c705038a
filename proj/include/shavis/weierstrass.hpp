#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "shavis/poly.hpp"
#include "shavis/primes.hpp"
#include "shavis/rational.hpp"

namespace shavis {

/// Dense univariate polynomial with rational coefficients; just enough
/// arithmetic for division polynomials and coordinate shifts.
class RatPoly {
public:
    RatPoly() = default;
    explicit RatPoly(std::vector<Rat> c) : c_(std::move(c)) { trim(); }
    static RatPoly constant(Rat v) { return RatPoly({std::move(v)}); }
    static RatPoly x() { return RatPoly({Rat(0), Rat(1)}); }

    bool is_zero() const { return c_.empty(); }
    long degree() const { return static_cast<long>(c_.size()) - 1; }
    const Rat& coeff(long i) const {
        static const Rat zero(0);
        return (i >= 0 && i <= degree()) ? c_[i] : zero;
    }
    const std::vector<Rat>& coeffs() const { return c_; }

    Rat operator()(const Rat& x) const {
        Rat acc = 0;
        for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * x + *it;
        return acc;
    }

    friend RatPoly operator+(const RatPoly& a, const RatPoly& b) {
        std::vector<Rat> c(std::max(a.c_.size(), b.c_.size()), Rat(0));
        for (size_t i = 0; i < a.c_.size(); ++i) c[i] += a.c_[i];
        for (size_t i = 0; i < b.c_.size(); ++i) c[i] += b.c_[i];
        return RatPoly(std::move(c));
    }
    friend RatPoly operator-(const RatPoly& a, const RatPoly& b) {
        std::vector<Rat> c(std::max(a.c_.size(), b.c_.size()), Rat(0));
        for (size_t i = 0; i < a.c_.size(); ++i) c[i] += a.c_[i];
        for (size_t i = 0; i < b.c_.size(); ++i) c[i] -= b.c_[i];
        return RatPoly(std::move(c));
    }
    friend RatPoly operator*(const RatPoly& a, const RatPoly& b) {
        if (a.is_zero() || b.is_zero()) return {};
        std::vector<Rat> c(a.c_.size() + b.c_.size() - 1, Rat(0));
        for (size_t i = 0; i < a.c_.size(); ++i)
            for (size_t j = 0; j < b.c_.size(); ++j) c[i + j] += a.c_[i] * b.c_[j];
        return RatPoly(std::move(c));
    }
    friend RatPoly operator*(const Rat& k, const RatPoly& a) {
        std::vector<Rat> c = a.c_;
        for (auto& x : c) x *= k;
        return RatPoly(std::move(c));
    }

    /// (integral polynomial, clearing scalar m) with integral = m * this.
    std::pair<IntPolynomial, Int> cleared() const { return clear_denominators(c_); }

private:
    void trim() {
        while (!c_.empty() && c_.back() == 0) c_.pop_back();
    }
    std::vector<Rat> c_;
};

struct Invariants {
    Rat b2, b4, b6, b8, c4, c6, disc, j;
};

/// y^2 + a1 x y + a3 y = x^3 + a2 x^2 + a4 x + a6 over Q, nonsingular.
class WeierstrassModel {
public:
    Rat a1, a2, a3, a4, a6;

    WeierstrassModel(Rat a1_, Rat a2_, Rat a3_, Rat a4_, Rat a6_)
        : a1(std::move(a1_)), a2(std::move(a2_)), a3(std::move(a3_)), a4(std::move(a4_)),
          a6(std::move(a6_)) {
        if (invariants().disc == 0) throw std::domain_error("singular model (discriminant 0)");
    }

    /// Short form y^2 = x^3 + a x^2 + b x + c.
    static WeierstrassModel short_form(Rat a, Rat b, Rat c) {
        return WeierstrassModel(0, std::move(a), 0, std::move(b), std::move(c));
    }

    Invariants invariants() const {
        Invariants I;
        I.b2 = a1 * a1 + 4 * a2;
        I.b4 = 2 * a4 + a1 * a3;
        I.b6 = a3 * a3 + 4 * a6;
        I.b8 = a1 * a1 * a6 + 4 * a2 * a6 - a1 * a3 * a4 + a2 * a3 * a3 - a4 * a4;
        I.c4 = I.b2 * I.b2 - 24 * I.b4;
        I.c6 = -I.b2 * I.b2 * I.b2 + 36 * I.b2 * I.b4 - 216 * I.b6;
        I.disc = -I.b2 * I.b2 * I.b8 - 8 * I.b4 * I.b4 * I.b4 - 27 * I.b6 * I.b6 +
                 9 * I.b2 * I.b4 * I.b6;
        if (I.disc != 0) I.j = I.c4 * I.c4 * I.c4 / I.disc;
        return I;
    }

    bool integral() const {
        return is_integer(a1) && is_integer(a2) && is_integer(a3) && is_integer(a4) &&
               is_integer(a6);
    }

    /// 2-division polynomial squared: psi_2^2 = 4x^3 + b2 x^2 + 2 b4 x + b6.
    RatPoly two_division_poly() const {
        Invariants I = invariants();
        return RatPoly({I.b6, 2 * I.b4, I.b2, Rat(4)});
    }

    /// Numerator of x(2P): x^4 - b4 x^2 - 2 b6 x - b8.
    RatPoly duplication_numerator() const {
        Invariants I = invariants();
        return RatPoly({-I.b8, -2 * I.b6, -I.b4, Rat(0), Rat(1)});
    }

    bool operator==(const WeierstrassModel& o) const {
        return a1 == o.a1 && a2 == o.a2 && a3 == o.a3 && a4 == o.a4 && a6 == o.a6;
    }

    std::string str() const {
        return "[" + to_string(a1) + "," + to_string(a2) + "," + to_string(a3) + "," +
               to_string(a4) + "," + to_string(a6) + "]";
    }
};

/// Change of coordinates x = u^2 x' + r, y = u^3 y' + s u^2 x' + t.
struct IsoTransform {
    Rat u = 1, r = 0, s = 0, t = 0;

    WeierstrassModel apply(const WeierstrassModel& E) const {
        if (u == 0) throw std::invalid_argument("transform with u = 0");
        Rat a1n = (E.a1 + 2 * s) / u;
        Rat a2n = (E.a2 - s * E.a1 + 3 * r - s * s) / (u * u);
        Rat a3n = (E.a3 + r * E.a1 + 2 * t) / (u * u * u);
        Rat a4n = (E.a4 - s * E.a3 + 2 * r * E.a2 - (t + r * s) * E.a1 + 3 * r * r - 2 * s * t) /
                  (u * u * u * u);
        Rat a6n = (E.a6 + r * E.a4 + r * r * E.a2 + r * r * r - t * E.a3 - t * t - r * t * E.a1) /
                  (u * u * u * u * u * u);
        return WeierstrassModel(a1n, a2n, a3n, a4n, a6n);
    }

    /// (x, y) on E -> ((x - r)/u^2, (y - s(x - r) - t)/u^3) on apply(E).
    std::pair<Rat, Rat> apply_point(const Rat& x, const Rat& y) const {
        Rat xn = (x - r) / (u * u);
        Rat yn = (y - s * (x - r) - t) / (u * u * u);
        return {xn, yn};
    }

    IsoTransform inverse() const {
        IsoTransform inv;
        inv.u = 1 / u;
        inv.r = -r / (u * u);
        inv.s = -s / u;
        inv.t = (r * s - t) / (u * u * u);
        return inv;
    }

    /// this followed by o.
    IsoTransform then(const IsoTransform& o) const {
        IsoTransform c;
        c.u = u * o.u;
        c.r = u * u * o.r + r;
        c.s = u * o.s + s;
        c.t = u * u * u * o.t + u * u * s * o.r + t;
        return c;
    }
};

/// Twist by square-free D: a2, a4, a6 move; a1, a3 stay.
inline WeierstrassModel quadratic_twist(const WeierstrassModel& E, const Int& D) {
    if (D == 0 || !is_squarefree(D)) throw std::invalid_argument("twist parameter must be square-free and nonzero");
    Rat d(D);
    Rat a2 = E.a2 * d + E.a1 * E.a1 * (d - 1) / 4;
    Rat a4 = E.a4 * d * d + E.a1 * E.a3 * (d * d - 1) / 2;
    Rat a6 = E.a6 * d * d * d + E.a3 * E.a3 * (d * d * d - 1) / 4;
    return WeierstrassModel(E.a1, a2, E.a3, a4, a6);
}

/// 2-isogeny E: y^2 = x^3 + a x^2 + b x  ->  y^2 = x^3 - 2a x^2 + (a^2 - 4b) x.
inline WeierstrassModel two_isogeny_descendant(const WeierstrassModel& E) {
    if (E.a1 != 0 || E.a3 != 0 || E.a6 != 0)
        throw std::invalid_argument("two_isogeny_descendant requires y^2 = x^3 + a x^2 + b x");
    if (E.a4 == 0) throw std::invalid_argument("two_isogeny_descendant: b = 0");
    Rat a = E.a2, b = E.a4;
    if (a * a - 4 * b == 0) throw std::invalid_argument("two_isogeny_descendant: a^2 = 4b");
    return WeierstrassModel::short_form(-2 * a, a * a - 4 * b, Rat(0));
}

/// Point on a curve over Q; infinity when `inf`.
struct CurvePoint {
    bool inf = true;
    Rat x, y;

    CurvePoint() = default;
    CurvePoint(Rat x_, Rat y_) : inf(false), x(std::move(x_)), y(std::move(y_)) {}
    static CurvePoint infinity() { return CurvePoint(); }

    bool operator==(const CurvePoint& o) const {
        if (inf || o.inf) return inf == o.inf;
        return x == o.x && y == o.y;
    }

    std::string str() const {
        return inf ? "O" : "(" + to_string(x) + ", " + to_string(y) + ")";
    }
};

inline bool on_curve(const WeierstrassModel& E, const CurvePoint& P) {
    if (P.inf) return true;
    Rat lhs = P.y * P.y + E.a1 * P.x * P.y + E.a3 * P.y;
    Rat rhs = P.x * P.x * P.x + E.a2 * P.x * P.x + E.a4 * P.x + E.a6;
    return lhs == rhs;
}

inline CurvePoint point_negate(const WeierstrassModel& E, const CurvePoint& P) {
    if (P.inf) return P;
    return CurvePoint(P.x, -P.y - E.a1 * P.x - E.a3);
}

inline CurvePoint point_add(const WeierstrassModel& E, const CurvePoint& P, const CurvePoint& Q) {
    if (P.inf) return Q;
    if (Q.inf) return P;
    Rat lambda, nu;
    if (P.x == Q.x) {
        if (Q.y == -P.y - E.a1 * P.x - E.a3) return CurvePoint::infinity();
        Rat denom = 2 * P.y + E.a1 * P.x + E.a3;
        lambda = (3 * P.x * P.x + 2 * E.a2 * P.x + E.a4 - E.a1 * P.y) / denom;
        nu = (-P.x * P.x * P.x + E.a4 * P.x + 2 * E.a6 - E.a3 * P.y) / denom;
    } else {
        lambda = (Q.y - P.y) / (Q.x - P.x);
        nu = P.y - lambda * P.x;
    }
    Rat x3 = lambda * lambda + E.a1 * lambda - E.a2 - P.x - Q.x;
    Rat y3 = -(lambda + E.a1) * x3 - nu - E.a3;
    return CurvePoint(x3, y3);
}

inline CurvePoint point_double(const WeierstrassModel& E, const CurvePoint& P) {
    return point_add(E, P, P);
}

inline CurvePoint point_multiply(const WeierstrassModel& E, Int n, CurvePoint P) {
    if (n < 0) {
        P = point_negate(E, P);
        n = -n;
    }
    CurvePoint R = CurvePoint::infinity();
    while (n > 0) {
        if (mpz_odd_p(n.get_mpz_t())) R = point_add(E, R, P);
        P = point_double(E, P);
        n >>= 1;
    }
    return R;
}

/// Trace of Frobenius a_p = p + 1 - #E~(F_p) at a good prime.  O(p).
inline long count_points_ap(const WeierstrassModel& E, long p) {
    Invariants I = E.invariants();
    if (valuation(I.disc, Int(p)) != 0) {
        // An input model can be non-minimal at p; only genuinely bad primes
        // (bad on the minimal model) are rejected by the caller.  Here we
        // insist the supplied model itself is good at p.
        throw std::invalid_argument("count_points_ap: p divides the model discriminant");
    }
    if (p == 2) {
        // Brute force on the full equation.
        for (const Rat& a : {E.a1, E.a2, E.a3, E.a4, E.a6})
            if (den(a) % 2 == 0)
                throw std::invalid_argument("count_points_ap: coefficient has even denominator");
        long a1 = mod_pos(E.a1, Int(2)).get_si(), a2 = mod_pos(E.a2, Int(2)).get_si();
        long a3 = mod_pos(E.a3, Int(2)).get_si(), a4 = mod_pos(E.a4, Int(2)).get_si();
        long a6 = mod_pos(E.a6, Int(2)).get_si();
        long count = 1;  // infinity
        for (long x = 0; x < 2; ++x)
            for (long y = 0; y < 2; ++y) {
                long lhs = (y * y + a1 * x * y + a3 * y) % 2;
                long rhs = (x * x * x + a2 * x * x + a4 * x + a6) % 2;
                if (lhs == rhs) ++count;
            }
        return 2 + 1 - count;
    }
    // Odd p: complete the square; #E(F_p) = p + 1 + sum_x chi(g(x)),
    // g = 4x^3 + b2 x^2 + 2 b4 x + b6, so a_p = -sum chi(g(x)).
    Int P(p);
    long b2 = mod_pos(I.b2, P).get_si();
    long b4 = mod_pos(2 * I.b4, P).get_si();
    long b6 = mod_pos(I.b6, P).get_si();
    std::vector<signed char> chi(p, -1);
    chi[0] = 0;
    for (long t = 1; t <= p / 2; ++t) chi[(t * t) % p] = 1;
    long sum = 0;
    for (long x = 0; x < p; ++x) {
        // g(x) mod p with 64-bit-safe stepping (p < 2^20 in all uses).
        long g = ((4 * x + b2) % p) * x % p;
        g = ((g + b4) % p) * x % p;
        g = (g + b6) % p;
        sum += chi[g];
    }
    long ap = -sum;
    if (static_cast<double>(ap) * ap > 4.0 * p)
        throw std::logic_error("count_points_ap: Hasse bound violated");
    return ap;
}

namespace detail {

/// x-division polynomials f_n with psi_n = f_n * psi2^(n mod 2 == 0 ? 1 : 0),
/// where psi2^2 = W = 4x^3 + b2 x^2 + 2 b4 x + b6.
inline std::vector<RatPoly> division_f_polys(const WeierstrassModel& E, long nmax) {
    Invariants I = E.invariants();
    RatPoly W = E.two_division_poly();
    std::vector<RatPoly> f(std::max<long>(nmax + 1, 5));
    f[0] = RatPoly();                    // psi_0 = 0
    f[1] = RatPoly::constant(Rat(1));    // psi_1 = 1
    f[2] = RatPoly::constant(Rat(1));    // psi_2 = psi2
    f[3] = RatPoly({I.b8, 3 * I.b6, 3 * I.b4, I.b2, Rat(3)});
    f[4] = RatPoly({I.b4 * I.b8 - I.b6 * I.b6, I.b2 * I.b8 - I.b4 * I.b6, 10 * I.b8, 10 * I.b6,
                    5 * I.b4, I.b2, Rat(2)});
    for (long n = 5; n <= nmax; ++n) {
        long m = n / 2;
        if (n % 2 == 1) {
            RatPoly t1 = f[m + 2] * f[m] * f[m] * f[m];
            RatPoly t2 = f[m - 1] * f[m + 1] * f[m + 1] * f[m + 1];
            if (m % 2 == 0)
                f[n] = t1 * W * W - t2;
            else
                f[n] = t1 - t2 * W * W;
        } else {
            RatPoly t1 = f[m + 2] * f[m - 1] * f[m - 1];
            RatPoly t2 = f[m - 2] * f[m + 1] * f[m + 1];
            f[n] = f[m] * (t1 - t2);
        }
    }
    return f;
}

}  // namespace detail

/// psi_l for odd prime l, denominators cleared; second member is the scalar m
/// with m * psi_l integral.  Roots are x-coordinates of nonzero l-torsion.
inline std::pair<IntPolynomial, Int> division_polynomial(const WeierstrassModel& E, long ell) {
    if (ell == 2 || !is_prime(Int(ell)))
        throw std::invalid_argument("division_polynomial: l must be an odd prime");
    if (ell > 12) throw std::invalid_argument("division_polynomial: l out of supported range");
    auto f = detail::division_f_polys(E, ell);
    auto [poly, m] = f[ell].cleared();
    if (poly.degree() != (ell * ell - 1) / 2)
        throw std::logic_error("division_polynomial: degree mismatch");
    return {poly, m};
}

/// x-division polynomial f_n (odd part) for any 2 <= n <= 12, cleared.
inline std::pair<IntPolynomial, Int> division_polynomial_x(const WeierstrassModel& E, long n) {
    if (n < 1 || n > 12) throw std::invalid_argument("division_polynomial_x: n out of range");
    auto f = detail::division_f_polys(E, n);
    return f[n].cleared();
}

// ---------------------------------------------------------------------------
// Curves over F_p (small p), for property tests and reduction-type checks.

struct ModPoint {
    bool inf = true;
    long x = 0, y = 0;
    bool operator==(const ModPoint& o) const {
        if (inf || o.inf) return inf == o.inf;
        return x == o.x && y == o.y;
    }
};

/// Reduction of an integral model mod a small prime p (possibly singular).
class CurveModP {
public:
    long p;
    long a1, a2, a3, a4, a6;

    CurveModP(const WeierstrassModel& E, long p_) : p(p_) {
        Int P(p_);
        a1 = mod_pos(E.a1, P).get_si();
        a2 = mod_pos(E.a2, P).get_si();
        a3 = mod_pos(E.a3, P).get_si();
        a4 = mod_pos(E.a4, P).get_si();
        a6 = mod_pos(E.a6, P).get_si();
    }

    long mod(long v) const { return ((v % p) + p) % p; }

    bool on_curve(const ModPoint& P) const {
        if (P.inf) return true;
        long lhs = mod(P.y * P.y + a1 * P.x * P.y + a3 * P.y);
        long rhs = mod(P.x * P.x * P.x + a2 * P.x * P.x + a4 * P.x + a6);
        return lhs == rhs;
    }

    std::vector<ModPoint> points() const {
        std::vector<ModPoint> pts;
        pts.push_back(ModPoint{});
        for (long x = 0; x < p; ++x)
            for (long y = 0; y < p; ++y) {
                ModPoint q{false, x, y};
                if (on_curve(q)) pts.push_back(q);
            }
        return pts;
    }

    long inv(long v) const { return inv_mod(Int(mod(v)), Int(p)).get_si(); }

    ModPoint negate(const ModPoint& P) const {
        if (P.inf) return P;
        return ModPoint{false, P.x, mod(-P.y - a1 * P.x - a3)};
    }

    ModPoint add(const ModPoint& P, const ModPoint& Q) const {
        if (P.inf) return Q;
        if (Q.inf) return P;
        long lambda, nu;
        if (P.x == Q.x) {
            if (Q.y == mod(-P.y - a1 * P.x - a3)) return ModPoint{};
            long denom = mod(2 * P.y + a1 * P.x + a3);
            lambda = mod((3 * P.x * P.x + 2 * a2 * P.x + a4 - a1 * P.y) % p * inv(denom));
            nu = mod(((-P.x * P.x % p) * P.x + a4 * P.x + 2 * a6 - a3 * P.y) % p * inv(denom));
        } else {
            lambda = mod((Q.y - P.y) * inv(Q.x - P.x));
            nu = mod(P.y - lambda * P.x);
        }
        long x3 = mod(lambda * lambda + a1 * lambda - a2 - P.x - Q.x);
        long y3 = mod(-(lambda + a1) * x3 - nu - a3);
        return ModPoint{false, x3, y3};
    }

    ModPoint multiply(long n, ModPoint P) const {
        if (n < 0) {
            P = negate(P);
            n = -n;
        }
        ModPoint R{};
        while (n > 0) {
            if (n & 1) R = add(R, P);
            P = add(P, P);
            n >>= 1;
        }
        return R;
    }
};

}  // namespace shavis
