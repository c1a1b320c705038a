#pragma once

#include <array>
#include <optional>
#include <stdexcept>

#include "shavis/congruence.hpp"
#include "shavis/poly.hpp"
#include "shavis/weierstrass.hpp"

namespace shavis {

namespace detail {

/// Coefficient table of the classical modular polynomial Phi_3(X, Y),
/// symmetric; entry (i, j) is the coefficient of X^i Y^j.
inline const std::array<std::array<Int, 5>, 5>& phi3_table() {
    static const std::array<std::array<Int, 5>, 5> T = [] {
        std::array<std::array<Int, 5>, 5> t{};
        auto set = [&](int i, int j, const char* v) {
            t[i][j] = Int(v);
            t[j][i] = Int(v);
        };
        set(4, 0, "1");
        set(3, 3, "-1");
        set(3, 2, "2232");
        set(3, 1, "-1069956");
        set(3, 0, "36864000");
        set(2, 2, "2587918086");
        set(2, 1, "8900222976000");
        set(2, 0, "452984832000000");
        set(1, 1, "-770845966336000000");
        set(1, 0, "1855425871872000000000");
        set(0, 0, "0");
        return t;
    }();
    return T;
}

/// One-time sanity checks of the embedded table: symmetry, plus agreement with
/// the independently recorded specialization at j = 257^3.
inline void phi3_validate() {
    static const bool ok = [] {
        const auto& T = phi3_table();
        for (int i = 0; i <= 4; ++i)
            for (int j = 0; j <= 4; ++j)
                if (T[i][j] != T[j][i]) throw std::logic_error("Phi_3 table not symmetric");
        // Specialize X = 257^3 by direct evaluation and compare with the
        // known quartic coefficients.
        Int j0 = Int(257) * 257 * 257;
        std::array<Int, 5> spec{};
        for (int yi = 0; yi <= 4; ++yi) {
            Int c = 0, xp = 1;
            for (int xi = 0; xi <= 4; ++xi) {
                c += T[xi][yi] * xp;
                xp *= j0;
            }
            spec[yi] = c;
        }
        const std::array<Int, 5> expect = {Int("425341531850824919624860339201"),
                                           Int("-2681761290825031939915708292"),
                                           Int("11662548773650842301768638"),
                                           Int("-4890361932705138741197"), Int(1)};
        if (!std::equal(spec.begin(), spec.end(), expect.begin()))
            throw std::logic_error("Phi_3 table fails the j = 257^3 specialization check");
        return true;
    }();
    (void)ok;
}

/// Phi_3(j, Y) with rational j, as ascending Y-coefficients.
inline std::vector<Rat> phi3_specialize_rat(const Rat& j) {
    phi3_validate();
    const auto& T = phi3_table();
    std::vector<Rat> c(5, Rat(0));
    Rat xp = 1;
    for (int xi = 0; xi <= 4; ++xi) {
        for (int yi = 0; yi <= 4; ++yi) c[yi] += Rat(T[xi][yi]) * xp;
        xp *= j;
    }
    return c;
}

}  // namespace detail

/// Phi_l(j, Y) for integral j: monic integral quartic in Y (l = 3 only).
inline IntPolynomial modular_poly_specialize(long ell, const Rat& j) {
    if (ell != 3) throw std::invalid_argument("modular polynomial table not available for l != 3");
    if (!is_integer(j))
        throw std::invalid_argument("modular_poly_specialize: integral j required; "
                                    "use the gate for general rational j");
    auto c = detail::phi3_specialize_rat(j);
    std::vector<Int> ic(c.size());
    for (size_t i = 0; i < c.size(); ++i) ic[i] = num(c[i]);
    return IntPolynomial(std::move(ic));
}

/// Decision on the existence of a rational l-isogeny, with a re-checkable
/// witness: either an exact rational root of Phi_l(j, Y), or a prime q at
/// which the reduction has no root in F_q, or an exhaustive exclusion.
struct IsogenyGateVerdict {
    long ell = 3;
    Rat j;
    bool has_rational_isogeny = false;
    std::optional<Rat> rational_root;   ///< set when has_rational_isogeny
    std::optional<long> witness_prime;  ///< set for a mod-q no-root witness
    bool exhaustive_exclusion = false;  ///< no witness prime, exact test decided
};

/// Criterion: E admits a rational l-isogeny iff Phi_l(j(E), Y) has a rational
/// root.  Witness primes q <= witness_limit are tried first; the exact
/// rational-root test always decides.
inline IsogenyGateVerdict rational_isogeny_gate(const WeierstrassModel& E, long ell = 3,
                                                long witness_limit = 100) {
    if (ell != 3) throw std::invalid_argument("modular polynomial table not available for l != 3");
    IsogenyGateVerdict V;
    V.ell = ell;
    V.j = E.invariants().j;
    auto [f, mult] = clear_denominators(detail::phi3_specialize_rat(V.j));
    if (f.degree() != 4) throw std::logic_error("rational_isogeny_gate: specialization degenerate");

    // Witness search: a prime q where f keeps degree 4 and has no F_q root.
    for (long q : primes_up_to(witness_limit)) {
        Int Q(q);
        if (mod_pos(f.leading(), Q) == 0) continue;
        bool has_root = false;
        for (long y = 0; y < q && !has_root; ++y)
            if (mod_pos(f(Int(y)), Q) == 0) has_root = true;
        if (!has_root) {
            V.has_rational_isogeny = false;
            V.witness_prime = q;
            return V;
        }
    }

    // Exact decision.
    auto roots = rational_roots(f);
    if (!roots.empty()) {
        V.has_rational_isogeny = true;
        V.rational_root = roots.front();
    } else {
        V.has_rational_isogeny = false;
        V.exhaustive_exclusion = true;
    }
    return V;
}

/// The assembled mod-l Galois-module certificate: coefficientwise congruence
/// up to the Sturm bound plus the no-isogeny gate.
struct CongruenceCertificate {
    Int ell;
    WeierstrassModel E{0, 0, 0, 1, 0}, F{0, 0, 0, 1, 0};
    CongruenceVerdict congruence;
    IsogenyGateVerdict gate;
    bool conclusion = false;  ///< E[l] and F[l] isomorphic as Galois modules
};

inline CongruenceCertificate certify_mod_l_congruence(const WeierstrassModel& E,
                                                      const WeierstrassModel& F, const Int& ell) {
    CongruenceCertificate C;
    C.ell = ell;
    C.E = E;
    C.F = F;
    C.congruence = congruence_verdict(E, F, ell);
    if (C.congruence.congruent) {
        C.gate = rational_isogeny_gate(E, ell.get_si());
        C.conclusion = !C.gate.has_rational_isogeny;
    } else {
        // Congruence failure already refutes the certificate; the gate is not
        // consulted (and need not be available for this l).
        C.gate.ell = ell.get_si();
        C.gate.j = E.invariants().j;
        C.conclusion = false;
    }
    return C;
}

}  // namespace shavis
