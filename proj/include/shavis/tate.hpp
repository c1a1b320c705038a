#pragma once

#include <cassert>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "shavis/weierstrass.hpp"

namespace shavis {

enum class KodairaType { I0, In, II, III, IV, I0star, Instar, IVstar, IIIstar, IIstar };

struct KodairaSymbol {
    KodairaType type = KodairaType::I0;
    long n = 0;  ///< only for In / In*

    bool operator==(const KodairaSymbol& o) const { return type == o.type && n == o.n; }

    /// Number of components m of the special fiber (for Ogg's formula).
    long components() const {
        switch (type) {
            case KodairaType::I0: return 1;
            case KodairaType::In: return n;
            case KodairaType::II: return 1;
            case KodairaType::III: return 2;
            case KodairaType::IV: return 3;
            case KodairaType::I0star: return 5;
            case KodairaType::Instar: return n + 5;
            case KodairaType::IVstar: return 7;
            case KodairaType::IIIstar: return 8;
            case KodairaType::IIstar: return 9;
        }
        return 0;
    }

    std::string str() const {
        switch (type) {
            case KodairaType::I0: return "I0";
            case KodairaType::In: return "I" + std::to_string(n);
            case KodairaType::II: return "II";
            case KodairaType::III: return "III";
            case KodairaType::IV: return "IV";
            case KodairaType::I0star: return "I0*";
            case KodairaType::Instar: return "I" + std::to_string(n) + "*";
            case KodairaType::IVstar: return "IV*";
            case KodairaType::IIIstar: return "III*";
            case KodairaType::IIstar: return "II*";
        }
        return "?";
    }

    static KodairaSymbol parse(const std::string& s) {
        KodairaSymbol k;
        if (s == "I0") return {KodairaType::I0, 0};
        if (s == "II") return {KodairaType::II, 0};
        if (s == "III") return {KodairaType::III, 0};
        if (s == "IV") return {KodairaType::IV, 0};
        if (s == "I0*") return {KodairaType::I0star, 0};
        if (s == "IV*") return {KodairaType::IVstar, 0};
        if (s == "III*") return {KodairaType::IIIstar, 0};
        if (s == "II*") return {KodairaType::IIstar, 0};
        if (s.size() >= 2 && s[0] == 'I') {
            bool star = s.back() == '*';
            long n = std::stol(s.substr(1, s.size() - 1 - (star ? 1 : 0)));
            return star ? KodairaSymbol{KodairaType::Instar, n} : KodairaSymbol{KodairaType::In, n};
        }
        throw std::invalid_argument("bad Kodaira symbol: " + s);
    }
};

enum class ReductionClass { good, split_multiplicative, nonsplit_multiplicative, additive };

inline std::string to_string(ReductionClass r) {
    switch (r) {
        case ReductionClass::good: return "good";
        case ReductionClass::split_multiplicative: return "split multiplicative";
        case ReductionClass::nonsplit_multiplicative: return "nonsplit multiplicative";
        case ReductionClass::additive: return "additive";
    }
    return "?";
}

struct LocalData {
    Int p;
    KodairaSymbol kodaira;
    long tamagawa = 1;
    long conductor_exponent = 0;
    WeierstrassModel minimal_model{0, 0, 0, 1, 0};  // placeholder, overwritten
    long v_min_disc = 0;
    ReductionClass reduction_class = ReductionClass::good;
    IsoTransform to_minimal;  ///< transform from the input model to minimal_model
};

namespace detail {

/// Square root mod an odd prime (Tonelli–Shanks); nullopt if non-residue.
inline std::optional<Int> sqrt_mod(const Int& a_in, const Int& p) {
    Int a = mod_pos(a_in, p);
    if (a == 0) return Int(0);
    if (jacobi_symbol(a, p) != 1) return std::nullopt;
    if (p % 4 == 3) {
        Int r;
        Int e = (p + 1) / 4;
        mpz_powm(r.get_mpz_t(), a.get_mpz_t(), e.get_mpz_t(), p.get_mpz_t());
        return r;
    }
    Int q = p - 1;
    long s = 0;
    while (mpz_even_p(q.get_mpz_t())) { q >>= 1; ++s; }
    Int z = 2;
    while (jacobi_symbol(z, p) != -1) ++z;
    Int c, r, t, pw;
    mpz_powm(c.get_mpz_t(), z.get_mpz_t(), q.get_mpz_t(), p.get_mpz_t());
    Int e = (q + 1) / 2;
    mpz_powm(r.get_mpz_t(), a.get_mpz_t(), e.get_mpz_t(), p.get_mpz_t());
    mpz_powm(t.get_mpz_t(), a.get_mpz_t(), q.get_mpz_t(), p.get_mpz_t());
    long m = s;
    while (t != 1) {
        Int tt = t;
        long i = 0;
        while (tt != 1) { tt = tt * tt % p; ++i; }
        Int b = c;
        for (long j = 0; j < m - i - 1; ++j) b = b * b % p;
        r = r * b % p;
        c = b * b % p;
        t = t * c % p;
        m = i;
    }
    return r;
}

/// v_p with v_p(0) = +infinity, encoded as a large sentinel.
constexpr long VINF = 1L << 40;
inline long vp(const Rat& q, const Int& p) { return q == 0 ? VINF : valuation(q, p); }

/// Polynomial gcd over F_p for tiny degrees; polys as ascending coefficients.
inline std::vector<Int> fp_gcd(std::vector<Int> a, std::vector<Int> b, const Int& p) {
    auto trim = [&](std::vector<Int>& v) {
        for (auto& c : v) c = mod_pos(c, p);
        while (!v.empty() && v.back() == 0) v.pop_back();
    };
    trim(a);
    trim(b);
    while (!b.empty()) {
        // a mod b
        Int lead_inv = inv_mod(b.back(), p);
        while (a.size() >= b.size()) {
            Int f = mod_pos(a.back() * lead_inv, p);
            size_t off = a.size() - b.size();
            for (size_t i = 0; i < b.size(); ++i)
                a[off + i] = mod_pos(a[off + i] - f * b[i], p);
            while (!a.empty() && a.back() == 0) a.pop_back();
            if (a.empty()) break;
        }
        std::swap(a, b);
    }
    if (!a.empty()) {
        Int li = inv_mod(a.back(), p);
        for (auto& c : a) c = mod_pos(c * li, p);
    }
    return a;
}

/// Singular point of the reduced curve mod p, returned as lifted integers.
/// Caller guarantees bad reduction at p on a p-integral model.
inline std::pair<Int, Int> singular_point(const WeierstrassModel& E, const Int& p) {
    if (p < 1000) {
        long pl = p.get_si();
        CurveModP C(E, pl);
        for (long x = 0; x < pl; ++x)
            for (long y = 0; y < pl; ++y) {
                long eq = C.mod(y * y + C.a1 * x * y + C.a3 * y -
                                (x * x * x + C.a2 * x * x + C.a4 * x + C.a6));
                if (eq != 0) continue;
                long fx = C.mod(3 * x * x + 2 * C.a2 * x + C.a4 - C.a1 * y);
                long fy = C.mod(2 * y + C.a1 * x + C.a3);
                if (fx == 0 && fy == 0) return {Int(x), Int(y)};
            }
        throw std::logic_error("singular_point: no singular point found (good reduction?)");
    }
    // Large odd p: complete the square; singular x is a common root of
    // g = 4x^3 + b2 x^2 + 2 b4 x + b6 and g', i.e. x = (-b2 ± sqrt(c4)) / 12.
    Invariants I = E.invariants();
    Int b2 = mod_pos(I.b2, p), c4 = mod_pos(I.c4, p);
    Int inv12 = inv_mod(Int(12), p);
    std::vector<Int> cands;
    if (c4 == 0) {
        cands.push_back(mod_pos(-b2 * inv12, p));
    } else {
        auto s = sqrt_mod(c4, p);
        if (!s) throw std::logic_error("singular_point: node tangent sqrt missing");
        cands.push_back(mod_pos((-b2 + *s) * inv12, p));
        cands.push_back(mod_pos((-b2 - *s) * inv12, p));
    }
    for (const Int& x0 : cands) {
        Rat g = Rat(4) * Rat(x0) * Rat(x0) * Rat(x0) + I.b2 * Rat(x0) * Rat(x0) +
                2 * I.b4 * Rat(x0) + I.b6;
        if (mod_pos(g, p) == 0) {
            Int y0 = mod_pos(Rat(-1) * (E.a1 * Rat(x0) + E.a3) / 2, p);
            return {x0, y0};
        }
    }
    throw std::logic_error("singular_point: candidates not singular");
}

/// Does A y^2 + B y + C (or A x^2 + B x + C) have a root in F_p?
inline bool quadratic_has_root(const Int& A, const Int& B, const Int& C, const Int& p) {
    if (p == 2) {
        for (long y = 0; y < 2; ++y)
            if (mod_pos(A * y * y + B * y + C, p) == 0) return true;
        return false;
    }
    if (mod_pos(A, p) == 0) return true;  // degenerates to linear
    Int disc = mod_pos(B * B - 4 * A * C, p);
    if (disc == 0) return true;
    return jacobi_symbol(disc, p) == 1;
}

}  // namespace detail

/// Tate's algorithm at p, in full generality (p = 2 and 3 included).
inline LocalData tate_algorithm(const WeierstrassModel& E_in, const Int& p) {
    using detail::vp;
    if (!is_prime(p)) throw std::invalid_argument("tate_algorithm: p must be prime");

    WeierstrassModel E = E_in;
    IsoTransform total;  // input -> current model

    auto apply = [&](const IsoTransform& T) {
        E = T.apply(E);
        total = total.then(T);
    };

    // Make the model p-integral (scale by u = p^-m so a_i picks up p^{i m}).
    {
        const std::pair<const Rat*, long> weighted[] = {
            {&E.a1, 1}, {&E.a2, 2}, {&E.a3, 3}, {&E.a4, 4}, {&E.a6, 6}};
        long m = 0;
        for (auto& [a, w] : weighted) {
            if (*a == 0) continue;
            long v = valuation(*a, p);
            while (v + w * m < 0) ++m;
        }
        if (m > 0) {
            IsoTransform T;
            T.u = Rat(1) / Rat(pow_int(p, m));
            apply(T);
        }
    }

    LocalData L;
    L.p = p;

    while (true) {
        Invariants I = E.invariants();
        long n = vp(I.disc, p);

        if (n == 0) {
            L.kodaira = {KodairaType::I0, 0};
            L.tamagawa = 1;
            L.reduction_class = ReductionClass::good;
            break;
        }

        // Move the singular point to the origin.
        {
            auto [x0, y0] = detail::singular_point(E, p);
            IsoTransform T;
            T.r = Rat(x0);
            T.t = Rat(y0);
            apply(T);
            I = E.invariants();
        }
        assert(vp(E.a3, p) >= 1 && vp(E.a4, p) >= 1 && vp(E.a6, p) >= 1);

        if (vp(I.b2, p) == 0) {
            // Type In (multiplicative). Tangent quadratic T^2 + a1 T - a2.
            bool split;
            if (p == 2)
                split = mod_pos(E.a2, p) == 0;
            else
                split = jacobi_symbol(mod_pos(I.b2, p), p) == 1;
            L.kodaira = {KodairaType::In, n};
            L.tamagawa = split ? n : (n % 2 == 0 ? 2 : 1);
            L.reduction_class = split ? ReductionClass::split_multiplicative
                                      : ReductionClass::nonsplit_multiplicative;
            break;
        }

        L.reduction_class = ReductionClass::additive;
        Int p2 = p * p, p3 = p2 * p, p4 = p3 * p;

        if (vp(E.a6, p) < 2) {  // Type II
            L.kodaira = {KodairaType::II, 0};
            L.tamagawa = 1;
            break;
        }
        if (vp(I.b8, p) < 3) {  // Type III
            L.kodaira = {KodairaType::III, 0};
            L.tamagawa = 2;
            break;
        }
        if (vp(I.b6, p) < 3) {  // Type IV
            Int a31 = mod_pos(E.a3 / Rat(p), p);
            Int a62 = mod_pos(E.a6 / Rat(p2), p);
            L.kodaira = {KodairaType::IV, 0};
            L.tamagawa = detail::quadratic_has_root(Int(1), a31, -a62, p) ? 3 : 1;
            break;
        }

        // Normalize: v(a1) >= 1, v(a2) >= 1, v(a3) >= 2, v(a4) >= 2, v(a6) >= 3.
        {
            IsoTransform S;
            if (p == 2) {
                S.s = Rat(mod_pos(E.a2, p));
            } else {
                Int inv2 = inv_mod(Int(2), p);
                S.s = Rat(mod_pos(Int(-mod_pos(E.a1, p)) * inv2, p));
            }
            apply(S);
            IsoTransform T;
            if (p == 2) {
                // v(a3) >= 2 holds already; fix a6 mod 8 with t = 2*tau,
                // tau^2 = a6/4 mod 2.
                Int tau = mod_pos(E.a6 / Rat(4), Int(2));
                T.t = Rat(2 * tau);
            } else {
                Int inv2 = inv_mod(Int(2), p2);
                T.t = Rat(mod_pos(Int(-mod_pos(E.a3, p2)) * inv2, p2));
            }
            apply(T);
        }
        assert(vp(E.a1, p) >= 1 && vp(E.a2, p) >= 1 && vp(E.a3, p) >= 2 && vp(E.a4, p) >= 2 &&
               vp(E.a6, p) >= 3);

        // Step 6: cubic P(T) = T^3 + a2,1 T^2 + a4,2 T + a6,3 over F_p.
        Int c2 = mod_pos(E.a2 / Rat(p), p);
        Int c1 = mod_pos(E.a4 / Rat(p2), p);
        Int c0 = mod_pos(E.a6 / Rat(p3), p);
        std::vector<Int> P = {c0, c1, c2, Int(1)};
        std::vector<Int> dP = {c1, 2 * c2, Int(3)};
        std::vector<Int> g = detail::fp_gcd(P, dP, p);

        if (g.size() <= 1) {
            // Distinct roots: I0*.
            long roots = 0;
            long pl = p.get_si();
            for (long t = 0; t < pl; ++t)
                if (mod_pos(((Int(t) + c2) * t + c1) * t + c0, p) == 0) ++roots;
            L.kodaira = {KodairaType::I0star, 0};
            L.tamagawa = 1 + roots;
            break;
        }

        if (g.size() == 2) {
            // Double (not triple) root beta: In* subprocedure.
            Int beta = mod_pos(-g[0], p);
            {
                IsoTransform T;
                T.r = Rat(p * beta);
                apply(T);
            }
            assert(vp(E.a2, p) == 1 && vp(E.a4, p) >= 3 && vp(E.a6, p) >= 4);
            long nstar = 1;
            Int mx = p2, my = p2;
            Int a2t = 0, a4t = 0, a6t = 0, a3t = 0;
            bool done = false;
            bool last_split = false;
            while (!done) {
                // Quadratic in Y: Y^2 + a3t Y - a6t, a3t = a3/my, a6t = a6/(mx my).
                a3t = mod_pos(E.a3 / Rat(my), p);
                a6t = mod_pos(E.a6 / Rat(mx * my), p);
                Int discY = mod_pos(a3t * a3t + 4 * a6t, p);
                if (discY != 0) {
                    last_split = detail::quadratic_has_root(Int(1), a3t, -a6t, p);
                    done = true;
                    break;
                }
                // Translate y by my * y1 killing the double root.
                Int y1 = (p == 2) ? mod_pos(a6t, p)
                                  : mod_pos(-a3t * inv_mod(Int(2), p), p);
                {
                    IsoTransform T;
                    T.t = Rat(my * y1);
                    apply(T);
                }
                my = my * p;
                ++nstar;
                // Quadratic in X: a2t X^2 + a4t X + a6t.
                a2t = mod_pos(E.a2 / Rat(p), p);
                a4t = mod_pos(E.a4 / Rat(p * mx), p);
                a6t = mod_pos(E.a6 / Rat(mx * my), p);
                Int discX = mod_pos(a4t * a4t - 4 * a2t * a6t, p);
                if (discX != 0) {
                    last_split = detail::quadratic_has_root(a2t, a4t, a6t, p);
                    done = true;
                    break;
                }
                Int x1 = (p == 2) ? mod_pos(a6t * inv_mod(a2t, p), p)
                                  : mod_pos(-a4t * inv_mod(2 * a2t, p), p);
                {
                    IsoTransform T;
                    T.r = Rat(mx * x1);
                    apply(T);
                }
                mx = mx * p;
                ++nstar;
            }
            L.kodaira = {KodairaType::Instar, nstar};
            L.tamagawa = last_split ? 4 : 2;
            break;
        }

        // Triple root beta: steps 8-10.
        {
            // Triple root beta of P.  In char 2 it is the T^2 coefficient, in
            // char 3 the cube root of -c0 (cubing is the identity on F_3);
            // otherwise g = (T - beta)^2 gives beta = -g[1]/2.
            Int beta;
            if (p == 2)
                beta = mod_pos(c2, p);
            else if (p == 3)
                beta = mod_pos(-c0, p);
            else
                beta = mod_pos(-g[1] * inv_mod(Int(2), p), p);
            IsoTransform T;
            T.r = Rat(p * beta);
            apply(T);
        }
        assert(vp(E.a2, p) >= 2 && vp(E.a4, p) >= 3 && vp(E.a6, p) >= 4);

        // Step 8: Y^2 + a3,2 Y - a6,4.
        {
            Int a32 = mod_pos(E.a3 / Rat(p2), p);
            Int a64 = mod_pos(E.a6 / Rat(p4), p);
            Int disc = mod_pos(a32 * a32 + 4 * a64, p);
            if (disc != 0) {
                L.kodaira = {KodairaType::IVstar, 0};
                L.tamagawa = detail::quadratic_has_root(Int(1), a32, -a64, p) ? 3 : 1;
                break;
            }
            Int y1 = (p == 2) ? mod_pos(a64, p) : mod_pos(-a32 * inv_mod(Int(2), p), p);
            IsoTransform T;
            T.t = Rat(p2 * y1);
            apply(T);
        }
        assert(vp(E.a3, p) >= 3 && vp(E.a6, p) >= 5);

        if (vp(E.a4, p) < 4) {  // Type III*
            L.kodaira = {KodairaType::IIIstar, 0};
            L.tamagawa = 2;
            break;
        }
        if (vp(E.a6, p) < 6) {  // Type II*
            L.kodaira = {KodairaType::IIstar, 0};
            L.tamagawa = 1;
            break;
        }

        // Step 11: not minimal; scale down and restart.
        {
            IsoTransform T;
            T.u = Rat(p);
            apply(T);
        }
    }

    L.minimal_model = E;
    L.to_minimal = total;
    L.v_min_disc = (L.reduction_class == ReductionClass::good && vp(E.invariants().disc, p) == 0)
                       ? 0
                       : valuation(E.invariants().disc, p);
    L.conductor_exponent =
        (L.v_min_disc == 0) ? 0 : L.v_min_disc - L.kodaira.components() + 1;
    if (L.conductor_exponent < 0) throw std::logic_error("tate: negative conductor exponent");
    return L;
}

/// True iff the Kodaira type guarantees 3 does not divide the Tamagawa number.
inline bool tamagawa_3_free(const LocalData& L) {
    const KodairaSymbol& k = L.kodaira;
    bool free3 = !(k.type == KodairaType::IV || k.type == KodairaType::IVstar ||
                   (k.type == KodairaType::In && k.n % 3 == 0 && k.n > 0));
    if (free3 && L.tamagawa % 3 == 0)
        throw std::logic_error("tamagawa_3_free: classifier contradicts computed Tamagawa number");
    return free3;
}

/// Bad primes of an integral model (primes dividing the discriminant).
inline std::vector<Int> discriminant_primes(const WeierstrassModel& E) {
    if (!E.integral()) throw std::invalid_argument("discriminant_primes: model not integral");
    std::vector<Int> ps;
    for (auto& [q, e] : factor(num(E.invariants().disc))) ps.push_back(q);
    return ps;
}

/// Globally minimal integral model plus minimal discriminant; also returns the
/// transform from the input to the minimal model.
struct GlobalMinimalResult {
    WeierstrassModel model{0, 0, 0, 1, 0};
    Int min_disc;
    IsoTransform to_minimal;
    std::map<Int, LocalData> local;  ///< local data at the bad primes of the input
};

inline GlobalMinimalResult global_minimal_model(const WeierstrassModel& E_in) {
    // First make the model integral.
    WeierstrassModel E = E_in;
    IsoTransform total;
    {
        Int L = 1;
        L = lcm(L, den(E.a1));
        L = lcm(L, den(E.a2));
        L = lcm(L, den(E.a3));
        L = lcm(L, den(E.a4));
        L = lcm(L, den(E.a6));
        if (L != 1) {
            IsoTransform T;
            T.u = Rat(1, L);
            E = T.apply(E);
            total = total.then(T);
        }
    }
    Invariants I = E.invariants();
    Int u = 1;
    std::map<Int, LocalData> local;
    for (const Int& q : discriminant_primes(E)) {
        LocalData Lq = tate_algorithm(E, q);
        long drop = valuation(num(I.disc), q) - Lq.v_min_disc;
        if (drop % 12 != 0) throw std::logic_error("global_minimal_model: u valuation not integral");
        u *= pow_int(q, drop / 12);
        local.emplace(q, std::move(Lq));
    }
    Int c4 = num(I.c4) / pow_int(u, 4);
    Int c6 = num(I.c6) / pow_int(u, 6);

    // Kraus–Connell reconstruction of the reduced minimal model from (c4, c6).
    Int b2;
    bool found = false;
    for (long cand : {-4L, -3L, 0L, 1L, 4L, 5L}) {
        if (mod_pos(Int(cand) + c6, Int(12)) == 0) {
            b2 = cand;
            found = true;
            break;
        }
    }
    if (!found) throw std::logic_error("global_minimal_model: no admissible b2 residue");
    Int b4 = (b2 * b2 - c4) / 24;
    Int b6 = (-b2 * b2 * b2 + 36 * b2 * b4 - c6) / 216;
    Int a1 = mod_pos(b2, Int(2));
    Int a2 = (b2 - a1) / 4;
    Int a3 = mod_pos(b6, Int(2));
    Int a6 = (b6 - a3) / 4;
    Int a4 = (b4 - a1 * a3) / 2;
    GlobalMinimalResult R;
    R.model = WeierstrassModel(Rat(a1), Rat(a2), Rat(a3), Rat(a4), Rat(a6));
    R.min_disc = num(R.model.invariants().disc);
    R.local = std::move(local);

    // Transform input -> minimal: scale by u then translate to the reduced form.
    // Solve for (r, s, t) relating E (integral) to R.model with scale u.
    {
        IsoTransform T;
        T.u = Rat(u);
        T.s = (Rat(u) * R.model.a1 - E.a1) / 2;
        T.r = (Rat(u * u) * R.model.a2 - E.a2 + T.s * E.a1 + T.s * T.s) / 3;
        T.t = (Rat(u * u * u) * R.model.a3 - E.a3 - T.r * E.a1) / 2;
        WeierstrassModel check = T.apply(E);
        if (!(check == R.model))
            throw std::logic_error("global_minimal_model: transform reconstruction failed");
        R.to_minimal = total.then(T);
    }
    return R;
}

/// Conductor N = prod p^{f_p} over the bad primes of a (not necessarily
/// minimal) model.
inline Int conductor(const WeierstrassModel& E) {
    GlobalMinimalResult R = global_minimal_model(E);
    Int N = 1;
    for (auto& [q, L] : R.local) N *= pow_int(q, L.conductor_exponent);
    return N;
}

}  // namespace shavis
