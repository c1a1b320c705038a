#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "shavis/tate.hpp"
#include "shavis/weierstrass.hpp"

namespace shavis {

// ---------------------------------------------------------------------------
// Torsion subgroup over Q.

struct TorsionGroup {
    long order = 1;
    std::string structure;              ///< "trivial", "Z/nZ", or "Z/2Z x Z/2mZ"
    std::vector<CurvePoint> generators; ///< on the input model
    std::vector<CurvePoint> points;     ///< the full torsion subgroup, on the input model
};

namespace detail {

/// Multiplicative order of P in a finite set closed under the group law.
inline long point_order(const WeierstrassModel& E, const CurvePoint& P, long cap = 16) {
    CurvePoint R = P;
    for (long n = 1; n <= cap; ++n) {
        if (R.inf) return n;
        R = point_add(E, R, P);
    }
    throw std::logic_error("point_order: order exceeds cap");
}

}  // namespace detail

/// Exact torsion subgroup: bound the order by gcd of #E~(F_p) over good
/// primes, then realize every point through division-polynomial rational
/// roots and close under the group law.
inline TorsionGroup torsion_subgroup(const WeierstrassModel& E_in) {
    GlobalMinimalResult gm = global_minimal_model(E_in);
    const WeierstrassModel& E = gm.model;

    // Order bound.
    Int bound = 0;
    int used = 0;
    for (long p : primes_up_to(200)) {
        if (p == 2 || gm.min_disc % p == 0) continue;
        bound = gcd(bound, Int(p + 1 - count_points_ap(E, p)));
        if (++used >= 12) break;
    }
    long B = bound.get_si();

    RatPoly Wp = E.two_division_poly();
    auto [W, wm] = Wp.cleared();

    // Collect candidate torsion points on the minimal model.
    std::vector<CurvePoint> pts = {CurvePoint::infinity()};
    auto add_point = [&](const CurvePoint& P) {
        if (std::find(pts.begin(), pts.end(), P) == pts.end()) pts.push_back(P);
    };
    auto points_with_x = [&](const Rat& x0) {
        Rat w = Wp(x0);
        if (w == 0) {
            add_point(CurvePoint(x0, (-E.a1 * x0 - E.a3) / 2));
        } else if (w > 0 && is_square(num(w)) && is_square(den(w))) {
            Rat s(isqrt(num(w)), isqrt(den(w)));
            for (const Rat& sg : {s, Rat(-s)})
                add_point(CurvePoint(x0, (sg - E.a1 * x0 - E.a3) / 2));
        }
    };

    if (B % 2 == 0)
        for (const Rat& x0 : rational_roots(W)) points_with_x(x0);
    for (long n : {3L, 4L, 5L, 7L, 8L, 9L}) {
        if (B % n != 0) continue;
        auto [f, m] = division_polynomial_x(E, n);
        for (const Rat& x0 : rational_roots(f)) points_with_x(x0);
    }
    // Close under addition.
    for (size_t grew = 0; grew != pts.size();) {
        grew = pts.size();
        for (size_t i = 0; i < pts.size(); ++i)
            for (size_t j = i; j < pts.size(); ++j) add_point(point_add(E, pts[i], pts[j]));
    }
    // Every candidate really is torsion (order bounded by Mazur).
    for (const auto& P : pts) detail::point_order(E, P);

    TorsionGroup T;
    T.order = static_cast<long>(pts.size());
    if (B % T.order != 0)
        throw std::logic_error("torsion_subgroup: group order does not divide the gcd bound");

    long two_torsion = 0;
    CurvePoint gmax = CurvePoint::infinity();
    long omax = 1;
    for (const auto& P : pts) {
        if (P.inf) continue;
        long o = detail::point_order(E, P);
        if (o == 2) ++two_torsion;
        if (o > omax) {
            omax = o;
            gmax = P;
        }
    }
    IsoTransform back = gm.to_minimal.inverse();
    auto pull = [&](const CurvePoint& P) {
        if (P.inf) return P;
        auto [x, y] = back.apply_point(P.x, P.y);
        return CurvePoint(x, y);
    };
    if (T.order == 1) {
        T.structure = "trivial";
    } else if (two_torsion <= 1) {
        if (omax != T.order) throw std::logic_error("torsion_subgroup: not cyclic as expected");
        T.structure = "Z/" + std::to_string(T.order) + "Z";
        T.generators.push_back(pull(gmax));
    } else if (two_torsion == 3) {
        T.structure = "Z/2Z x Z/" + std::to_string(T.order / 2) + "Z";
        T.generators.push_back(pull(gmax));
        // Second generator: a 2-torsion point outside <gmax>.
        std::vector<CurvePoint> cyc;
        CurvePoint R = CurvePoint::infinity();
        for (long k = 0; k < omax; ++k) {
            cyc.push_back(R);
            R = point_add(E, R, gmax);
        }
        for (const auto& P : pts) {
            if (P.inf || detail::point_order(E, P) != 2) continue;
            if (std::find(cyc.begin(), cyc.end(), P) == cyc.end()) {
                T.generators.push_back(pull(P));
                break;
            }
        }
    } else {
        throw std::logic_error("torsion_subgroup: impossible 2-torsion count");
    }
    for (const auto& P : pts) T.points.push_back(pull(P));
    return T;
}

// ---------------------------------------------------------------------------
// Canonical height, convention h-hat(P) = lim h(x(2^n P)) / 4^n.

namespace detail {

/// Archimedean local term of the height decomposition:
///   sum_k 4^{-k-1} log|Psi(x_k)| + 4^{-n} log+ |x_n|,
/// where x_{k+1} = Phi(x_k)/Psi(x_k) is the x-duplication map.
inline double lambda_arch(const WeierstrassModel& E, const Rat& x_start, int steps = 40) {
    Invariants I = E.invariants();
    long double b2 = mpq_get_d(I.b2.get_mpq_t()), b4 = mpq_get_d(I.b4.get_mpq_t());
    long double b6 = mpq_get_d(I.b6.get_mpq_t()), b8 = mpq_get_d(I.b8.get_mpq_t());
    long double x = mpq_get_d(x_start.get_mpq_t());
    long double acc = 0.0L, w = 0.25L;
    for (int k = 0; k < steps; ++k) {
        long double psi = ((4.0L * x + b2) * x + 2.0L * b4) * x + b6;
        long double phi = ((x * x - b4) * x - 2.0L * b6) * x - b8;
        if (psi == 0.0L)
            throw std::runtime_error("tolerance unreachable: duplication hit a 2-torsion fiber");
        acc += w * std::log(std::abs(psi));
        x = phi / psi;
        w *= 0.25L;
    }
    long double tail = std::abs(x) > 1.0L ? std::log(std::abs(x)) : 0.0L;
    acc += 4.0L * w * tail;
    return static_cast<double>(acc);
}

/// Non-archimedean local term as an exact rational multiple of log p, by
/// simulating the duplication orbit p-adically.
///
/// For a point in the kernel of reduction, x = u p^{-2t} with u a unit, the
/// remaining contribution telescopes in closed form to exactly 2t: writing
/// Psi(x) = (2y + a1 x + a3)^2 on the curve, v(Psi(x_k)) = -6 t_k + 2 v_p(2)
/// with t_{k+1} = t_k + v_p(2), and
///   sum_k 4^{-k-1} (6 t_k - 2 v_p(2)) + lim 4^{-n} 2 t_n = 2 t.
/// The only case the generic valuation pattern can fail is p = 2 with t = 1
/// (the 4x^3 and b2 x^2 terms collide), which is stepped exactly instead.
inline Rat lambda_padic_coeff(const WeierstrassModel& E, const Rat& x_start, const Int& p,
                              int max_steps = 30) {
    Invariants I = E.invariants();
    long prec = 64;
    while (true) {
        bool restart = false;
        Int mod = pow_int(p, prec);
        Int b2 = mod_pos(I.b2, mod), b4 = mod_pos(I.b4, mod), b6 = mod_pos(I.b6, mod),
            b8 = mod_pos(I.b8, mod);
        // State: x = U * p^V with V <= 0; for V = 0, U is any residue.
        long V = x_start == 0 ? 0 : std::min(valuation(x_start, p), 0L);
        Int U = mod_pos(Rat(x_start * Rat(pow_int(p, -V))), mod);
        Rat acc = 0;
        Rat w(1, 4);
        long effective = prec;
        for (int k = 0; k < max_steps; ++k) {
            if (V < 0) {
                if (V % 2 != 0) throw std::logic_error("lambda_padic: odd kernel valuation");
                long t = -V / 2;
                if (p != 2 || t >= 2) return acc + 4 * w * Rat(2 * t);
                // p = 2, t = 1: one exact kernel step.  Scaled numerators
                // (pm = p^{-V}): psi * pm^3 and phi * pm^4 are integral.
                Int pm = pow_int(p, -V);
                Int npsi = mod_pos(((4 * U + b2 * pm) * U + 2 * b4 * pm * pm) * U +
                                       b6 * pm * pm * pm,
                                   mod);
                Int nphi = mod_pos(((U * U - b4 * pm * pm) * U - 2 * b6 * pm * pm * pm) * U -
                                       b8 * pm * pm * pm * pm,
                                   mod);
                long vnpsi = npsi == 0 ? effective : valuation(npsi, p);
                if (valuation(nphi, p) != 0 || vnpsi >= effective - 8 || vnpsi < 2) {
                    if (prec > 4096)
                        throw std::runtime_error("tolerance unreachable: p-adic orbit precision");
                    prec *= 2;
                    restart = true;
                    break;
                }
                acc += w * Rat(-(3 * V + vnpsi));  // v(psi) = 3V + v(npsi)
                w /= 4;
                long Vn = V - vnpsi;  // v(x') = 4V - (3V + vnpsi)
                effective -= vnpsi;
                Int m2 = pow_int(p, effective);
                U = mod_pos(mod_pos(nphi, m2) *
                                inv_mod(mod_pos(npsi / pow_int(p, vnpsi), m2), m2),
                            m2);
                V = Vn;
                mod = m2;
                b2 = mod_pos(b2, m2);
                b4 = mod_pos(b4, m2);
                b6 = mod_pos(b6, m2);
                b8 = mod_pos(b8, m2);
                continue;
            }
            Int psi = mod_pos(((4 * U + b2) * U + 2 * b4) * U + b6, mod);
            Int phi = mod_pos(((U * U - b4) * U - 2 * b6) * U - b8, mod);
            long vpsi = psi == 0 ? effective : valuation(psi, p);
            long vphi = phi == 0 ? effective : valuation(phi, p);
            if (vpsi >= effective - 8 || vphi >= effective - 8) {
                // Either genuinely torsion-adjacent or out of precision.
                if (prec > 4096)
                    throw std::runtime_error("tolerance unreachable: p-adic orbit precision");
                prec *= 2;
                restart = true;
                break;
            }
            acc += w * Rat(-vpsi);
            w /= 4;
            long vmin = std::min(vphi, vpsi);
            effective -= vpsi;
            Int m2 = pow_int(p, effective);
            // x' = phi/psi = [phi/p^vmin] * inv[psi/p^vpsi] * p^{min(0, vphi-vpsi)}.
            U = mod_pos(mod_pos(phi / pow_int(p, vmin), m2) *
                            inv_mod(mod_pos(psi / pow_int(p, vpsi), m2), m2),
                        m2);
            V = vphi < vpsi ? vphi - vpsi : 0;
            mod = m2;
            b2 = mod_pos(b2, m2);
            b4 = mod_pos(b4, m2);
            b6 = mod_pos(b6, m2);
            b8 = mod_pos(b8, m2);
        }
        if (restart) continue;
        // Orbit never entered the kernel within max_steps; the truncation
        // error is bounded by max |v(psi)| * 4^{-max_steps}/3, negligible.
        return acc;
    }
}

/// Is P torsion?  Mazur's bound caps the order at 12.
inline bool is_torsion(const WeierstrassModel& E, const CurvePoint& P) {
    CurvePoint R = P;
    for (int n = 1; n <= 12; ++n) {
        if (R.inf) return true;
        R = point_add(E, R, P);
    }
    return false;
}

}  // namespace detail

/// Canonical height h-hat(P) = lim h(x(2^n P))/4^n, by local decomposition on
/// the global minimal model.  |error| <= tol for tol >= 1e-9.
inline double canonical_height(const WeierstrassModel& E_in, const CurvePoint& P_in,
                               double tol = 1e-8) {
    if (tol < 1e-9) throw std::runtime_error("tolerance unreachable: tol below 1e-9");
    if (!on_curve(E_in, P_in)) throw std::invalid_argument("canonical_height: point not on curve");
    if (P_in.inf) return 0.0;
    GlobalMinimalResult gm = global_minimal_model(E_in);
    const WeierstrassModel& E = gm.model;
    auto [px, py] = gm.to_minimal.apply_point(P_in.x, P_in.y);
    CurvePoint P(px, py);
    if (detail::is_torsion(E, P)) return 0.0;

    double h = detail::lambda_arch(E, P.x);
    std::set<Int> primes;
    primes.insert(Int(2));
    for (auto& [p, e] : factor(den(P.x))) primes.insert(p);
    for (auto& [p, e] : factor(gm.min_disc)) primes.insert(p);
    for (const Int& p : primes) {
        Rat c = detail::lambda_padic_coeff(E, P.x, p);
        if (c != 0) h += mpq_get_d(c.get_mpq_t()) * log_abs(p);
    }
    return h;
}

/// Independent slow oracle: h(x(2^n P))/4^n by exact duplication.
inline double canonical_height_doubling_oracle(const WeierstrassModel& E_in,
                                               const CurvePoint& P_in, int n = 8) {
    GlobalMinimalResult gm = global_minimal_model(E_in);
    const WeierstrassModel& E = gm.model;
    auto [px, py] = gm.to_minimal.apply_point(P_in.x, P_in.y);
    CurvePoint P(px, py);
    for (int k = 0; k < n; ++k) {
        P = point_double(E, P);
        if (P.inf) return 0.0;
        P.x.canonicalize();
        P.y.canonicalize();
    }
    return weil_height(P.x) / std::pow(4.0, n);
}

/// Height pairing <P, Q> = (h-hat(P+Q) - h-hat(P) - h-hat(Q)) / 2.
inline double height_pairing(const WeierstrassModel& E, const CurvePoint& P, const CurvePoint& Q,
                             double tol = 1e-8) {
    return (canonical_height(E, point_add(E, P, Q), tol) - canonical_height(E, P, tol) -
            canonical_height(E, Q, tol)) /
           2.0;
}

/// Height pairing data for a list of points.
struct HeightData {
    std::vector<CurvePoint> points;
    std::vector<double> canonical_heights;
    std::vector<std::vector<double>> pairing_matrix;
    double regulator = 1.0;  ///< det of the full pairing matrix (1 if empty)
    double tol = 0.0;        ///< per-entry error bound
};

namespace detail {

inline double det_dense(const std::vector<std::vector<double>>& A) {
    // Cofactor expansion; matrices here are at most 4x4.
    size_t n = A.size();
    if (n == 0) return 1.0;
    if (n == 1) return A[0][0];
    double det = 0.0;
    for (size_t c = 0; c < n; ++c) {
        std::vector<std::vector<double>> B;
        for (size_t i = 1; i < n; ++i) {
            std::vector<double> row;
            for (size_t j = 0; j < n; ++j)
                if (j != c) row.push_back(A[i][j]);
            B.push_back(std::move(row));
        }
        det += ((c % 2 == 0) ? 1.0 : -1.0) * A[0][c] * det_dense(B);
    }
    return det;
}

inline double det_submatrix(const std::vector<std::vector<double>>& M,
                            const std::vector<int>& idx) {
    std::vector<std::vector<double>> A(idx.size(), std::vector<double>(idx.size()));
    for (size_t i = 0; i < idx.size(); ++i)
        for (size_t j = 0; j < idx.size(); ++j) A[i][j] = M[idx[i]][idx[j]];
    return det_dense(A);
}

}  // namespace detail

/// Largest k with a k x k principal minor of the pairing matrix provably
/// nonzero: a certified lower bound for rank(E/Q).
inline std::pair<long, HeightData> independence_certificate(const WeierstrassModel& E,
                                                            const std::vector<CurvePoint>& pts,
                                                            double tol = 1e-8) {
    HeightData H;
    H.tol = 2 * tol;
    size_t m = pts.size();
    for (const auto& P : pts) {
        if (!on_curve(E, P))
            throw std::invalid_argument("independence_certificate: point not on curve");
        H.points.push_back(P);
        H.canonical_heights.push_back(canonical_height(E, P, tol));
    }
    H.pairing_matrix.assign(m, std::vector<double>(m, 0.0));
    double maxM = 1.0;
    for (size_t i = 0; i < m; ++i) {
        for (size_t j = i; j < m; ++j) {
            double v = (i == j) ? H.canonical_heights[i] : height_pairing(E, pts[i], pts[j], tol);
            H.pairing_matrix[i][j] = H.pairing_matrix[j][i] = v;
            maxM = std::max(maxM, std::abs(v));
        }
    }
    long best = 0;
    double fact = 1.0;
    for (long k = 1; k <= static_cast<long>(std::min<size_t>(m, 4)); ++k) {
        fact *= k;
        double err = fact * k * std::pow(maxM, k - 1) * H.tol;
        // All k-subsets of indices.
        std::vector<int> idx(k);
        std::function<bool(int, int)> try_from = [&](int pos, int start) -> bool {
            if (pos == k) return std::abs(detail::det_submatrix(H.pairing_matrix, idx)) > err;
            for (int i = start; i < static_cast<int>(m); ++i) {
                idx[pos] = i;
                if (try_from(pos + 1, i + 1)) return true;
            }
            return false;
        };
        if (try_from(0, 0)) best = k;
    }
    std::vector<int> all(m);
    for (size_t i = 0; i < m; ++i) all[i] = static_cast<int>(i);
    H.regulator = m == 0 ? 1.0 : detail::det_submatrix(H.pairing_matrix, all);
    return {best, H};
}

}  // namespace shavis
