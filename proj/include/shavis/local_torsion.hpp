#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "shavis/padic.hpp"
#include "shavis/tate.hpp"
#include "shavis/weierstrass.hpp"

namespace shavis {

/// Outcome of a local l-torsion decision at the prime l.
struct LocalTorsionReport {
    Int ell;
    std::string method;  ///< "division-polynomial", "formal-group-criterion", "combined"
    std::optional<bool> torsion_trivial;     ///< E(Q_l)[l] = 0
    std::optional<bool> e0_torsion_trivial;  ///< E_0(Q_l)[l] = 0 (criterion only)
    std::string details;
};

/// Decide E(Q_l)[l] = 0 by searching for Q_l-rational roots of psi_l that
/// admit a Q_l-rational y-coordinate.  Unconditional; the source of truth.
inline LocalTorsionReport torsion_by_division_poly(const WeierstrassModel& E, long ell,
                                                   long precision = 12) {
    if (ell != 3 && ell != 5 && ell != 7)
        throw std::invalid_argument("torsion_by_division_poly: l must be 3, 5, or 7");
    Int L(ell);
    LocalTorsionReport R;
    R.ell = L;
    R.method = "division-polynomial";

    auto [psi, mult] = division_polynomial(E, ell);
    RatPoly W = E.two_division_poly();

    std::vector<PadicApprox> roots = hensel_roots(psi, L, precision);
    for (const auto& r : roots) {
        Rat x0 = r.representative();
        Rat w = W(x0);
        if (w == 0)
            throw std::logic_error("torsion_by_division_poly: psi_l and psi_2 share a root");
        long v = valuation(w, L);
        // The representative only approximates the true root; a W-value that
        // nearly vanishes cannot be classified at this precision.
        if (r.valuation >= 0 && v > precision / 2)
            throw IndeterminatePrecision("square class of W at an l-adic root");
        PadicApprox wc = PadicApprox::from_rational(w, L, std::max(precision - v, 2L));
        if (wc.is_square()) {
            R.torsion_trivial = false;
            R.details = "l-torsion x-coordinate " + r.str() + " with square W(x) = " +
                        to_string(w) + " in Q_" + std::to_string(ell);
            return R;
        }
    }
    R.torsion_trivial = true;
    R.details = roots.empty()
                    ? "psi_l has no root in Q_" + std::to_string(ell)
                    : "no l-adic root of psi_l lifts to a Q_" + std::to_string(ell) + " point";
    return R;
}

/// As above, doubling the working precision on indeterminacy (12 up to 96).
inline LocalTorsionReport torsion_by_division_poly_adaptive(const WeierstrassModel& E, long ell,
                                                            long start_precision = 12,
                                                            long max_precision = 96) {
    long prec = start_precision;
    while (true) {
        try {
            return torsion_by_division_poly(E, ell, prec);
        } catch (const IndeterminatePrecision&) {
            if (2 * prec > max_precision) throw;
            prec *= 2;
        }
    }
}

/// The formal-group criterion at p in {3, 5, 7}: on a p-minimal model with
/// additive reduction and all a_i in pZ_p,
///   p = 3: E_0(Q_3)[3] != 0  iff  a_2 = 6 mod 9,
///   p = 5: E_0(Q_5)[5] != 0  iff  a_4 = 10 mod 25,
///   p = 7: E_0(Q_7)[7] != 0  iff  a_6 = 14 mod 49.
/// The shape is reached by completing the square and translating x to the
/// singular point (a cusp, so the cubic has a triple root mod p).
inline LocalTorsionReport formal_group_criterion(const WeierstrassModel& E_in, long p) {
    if (p != 3 && p != 5 && p != 7)
        throw std::invalid_argument("formal_group_criterion: p must be 3, 5, or 7");
    Int P(p);
    LocalTorsionReport R;
    R.ell = P;
    R.method = "formal-group-criterion";

    LocalData L = tate_algorithm(E_in, P);
    if (L.reduction_class != ReductionClass::additive)
        throw std::runtime_error("shape unreachable: reduction at " + std::to_string(p) +
                                 " is not additive");
    // Complete the square on the p-minimal model (p odd: u = 1 transform).
    WeierstrassModel M = L.minimal_model;
    IsoTransform S{Rat(1), Rat(0), -M.a1 / 2, -M.a3 / 2};
    M = S.apply(M);
    // Translate x to the singular point of the reduction.
    auto [x0, y0] = detail::singular_point(M, P);
    IsoTransform T{Rat(1), Rat(x0), Rat(0), Rat(0)};
    M = T.apply(M);

    for (const Rat* a : {&M.a1, &M.a2, &M.a3, &M.a4, &M.a6})
        if (*a != 0 && valuation(*a, P) < 1)
            throw std::runtime_error("shape unreachable: a_i not all in pZ_p after normalization");

    Int p2 = P * P;
    bool e0_nontrivial;
    Rat residue_src;
    if (p == 3) {
        residue_src = M.a2;
        e0_nontrivial = mod_pos(M.a2, p2) == 6;
    } else if (p == 5) {
        residue_src = M.a4;
        e0_nontrivial = mod_pos(M.a4, p2) == 10;
    } else {
        residue_src = M.a6;
        e0_nontrivial = mod_pos(M.a6, p2) == 14;
    }
    R.e0_torsion_trivial = !e0_nontrivial;
    R.details = "criterion residue " + mod_pos(residue_src, p2).get_str() + " mod " +
                p2.get_str() + ", Tamagawa " + std::to_string(L.tamagawa);

    // Bridge from E_0 to E: torsion in E \ E_0 maps to the component group, so
    // p-torsion outside E_0 requires p | c_p.
    if (e0_nontrivial)
        R.torsion_trivial = false;
    else if (L.tamagawa % p != 0)
        R.torsion_trivial = true;
    // else: E_0 is torsion-free but the component group could hide p-torsion;
    // torsion_trivial stays not-applicable.
    return R;
}

/// Run both methods and require agreement wherever the criterion decides.
inline LocalTorsionReport combined_local_torsion(const WeierstrassModel& E, long ell,
                                                 long precision = 12) {
    LocalTorsionReport div = torsion_by_division_poly_adaptive(E, ell, precision);
    LocalTorsionReport R;
    R.ell = Int(ell);
    R.method = "combined";
    R.torsion_trivial = div.torsion_trivial;
    R.details = div.details;
    try {
        LocalTorsionReport fg = formal_group_criterion(E, ell);
        R.e0_torsion_trivial = fg.e0_torsion_trivial;
        if (fg.torsion_trivial.has_value() && fg.torsion_trivial != div.torsion_trivial)
            throw std::logic_error("combined_local_torsion: methods disagree (" + div.details +
                                   " vs " + fg.details + ")");
        R.details += "; " + fg.details;
    } catch (const std::runtime_error&) {
        // Criterion inapplicable (shape unreachable); division polynomial
        // verdict stands alone.
    }
    return R;
}

/// Square-class representatives d with E^d(Q_l)[l] = 0, among {1, u, l, ul}
/// for u the least positive non-residue unit mod l.
inline std::vector<long> local_twist_classes(const WeierstrassModel& E, long ell,
                                             long precision = 12) {
    if (ell != 3 && ell != 5 && ell != 7)
        throw std::invalid_argument("local_twist_classes: l must be 3, 5, or 7");
    long u = 2;
    while (jacobi_symbol(Int(u), Int(ell)) != -1) ++u;
    std::vector<long> classes = {1, u, ell, u * ell};
    std::vector<long> out;
    for (long d : classes) {
        WeierstrassModel Ed = d == 1 ? E : quadratic_twist(E, Int(d));
        LocalTorsionReport R = torsion_by_division_poly_adaptive(Ed, ell, precision);
        if (R.torsion_trivial.value()) out.push_back(d);
    }
    if (out.size() < 2)
        throw std::logic_error("local_twist_classes: fewer than two torsion-free classes "
                               "(contradicts the two-character bound)");
    return out;
}

}  // namespace shavis
