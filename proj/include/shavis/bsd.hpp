#pragma once

#include <cmath>
#include <complex>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "shavis/heights.hpp"
#include "shavis/tate.hpp"
#include "shavis/weierstrass.hpp"

namespace shavis {

namespace detail {

/// Carlson's symmetric elliptic integral R_F(x, y, z) by the duplication
/// theorem with the degree-5 series tail.  Works for real nonnegative
/// arguments and for complex arguments off the negative real axis (used for
/// the conjugate-pair case of a negative-discriminant cubic).
template <class T>
inline T carlson_rf(T x, T y, T z) {
    using std::abs;
    using std::sqrt;
    for (int iter = 0; iter < 200; ++iter) {
        T lam = sqrt(x) * sqrt(y) + sqrt(y) * sqrt(z) + sqrt(z) * sqrt(x);
        x = (x + lam) / T(4);
        y = (y + lam) / T(4);
        z = (z + lam) / T(4);
        T A = (x + y + z) / T(3);
        if (abs(A) == 0.0L) break;
        long double spread = std::max({static_cast<long double>(abs(x - A)),
                                       static_cast<long double>(abs(y - A)),
                                       static_cast<long double>(abs(z - A))}) /
                             static_cast<long double>(abs(A));
        if (spread < 1e-7L) {
            T X = T(1) - x / A, Y = T(1) - y / A, Z = -(X + Y);
            T e2 = X * Y - Z * Z, e3 = X * Y * Z;
            T s = T(1) - e2 / T(10) + e3 / T(14) + e2 * e2 / T(24) - T(3) * e2 * e3 / T(44);
            return s / sqrt(A);
        }
    }
    throw std::runtime_error("carlson_rf: no convergence");
}

/// Roots of the monic cubic x^3 + a x^2 + b x + c over C (long double).
inline std::vector<std::complex<long double>> cubic_roots(long double a, long double b,
                                                          long double c) {
    // Depress: x = t - a/3.
    long double p = b - a * a / 3.0L;
    long double q = 2.0L * a * a * a / 27.0L - a * b / 3.0L + c;
    long double shift = -a / 3.0L;
    std::vector<std::complex<long double>> roots;
    long double disc = -4.0L * p * p * p - 27.0L * q * q;
    if (disc > 0.0L) {
        // Three real roots (trigonometric form; p < 0 here).
        long double m = 2.0L * std::sqrt(-p / 3.0L);
        long double theta = std::acos(std::clamp(3.0L * q / (p * m), -1.0L, 1.0L)) / 3.0L;
        for (int k = 0; k < 3; ++k)
            roots.emplace_back(m * std::cos(theta - 2.0L * M_PIl * k / 3.0L) + shift, 0.0L);
    } else {
        // One real root (Cardano) and a conjugate pair.
        long double rad = std::sqrt(q * q / 4.0L + p * p * p / 27.0L);
        long double u = std::cbrt(-q / 2.0L + rad);
        long double v = std::cbrt(-q / 2.0L - rad);
        long double re = -(u + v) / 2.0L, im = std::sqrt(3.0L) * (u - v) / 2.0L;
        roots.emplace_back(u + v + shift, 0.0L);
        roots.emplace_back(re + shift, im);
        roots.emplace_back(re + shift, -im);
    }
    // Newton-polish (helps the trig/Cardano forms to full long double accuracy).
    for (auto& r : roots) {
        for (int it = 0; it < 5; ++it) {
            std::complex<long double> f = ((r + a) * r + b) * r + c;
            std::complex<long double> df = (3.0L * r + 2.0L * a) * r + b;
            if (abs(df) == 0.0L) break;
            r -= f / df;
        }
        if (std::abs(r.imag()) < 1e-14L * (1.0L + std::abs(r.real()))) r = {r.real(), 0.0L};
    }
    return roots;
}

/// Real period of the given model (no minimalization): with the curve in the
/// completed-square form eta^2 = x^3 + (b2/4) x^2 + (b4/2) x + (b6/4),
///   Omega = (disc > 0 ? 4 : 2) * R_F(0, e1 - e2, e1 - e3)
/// for e1 the largest (resp. unique) real root.
inline double real_period_of_model(const WeierstrassModel& E) {
    Invariants I = E.invariants();
    long double a = mpq_get_d(Rat(I.b2 / 4).get_mpq_t());
    long double b = mpq_get_d(Rat(I.b4 / 2).get_mpq_t());
    long double c = mpq_get_d(Rat(I.b6 / 4).get_mpq_t());
    auto roots = cubic_roots(a, b, c);
    bool all_real = true;
    for (auto& r : roots) all_real = all_real && r.imag() == 0.0L;
    if (all_real) {
        std::vector<long double> e = {roots[0].real(), roots[1].real(), roots[2].real()};
        std::sort(e.begin(), e.end());
        long double rf =
            carlson_rf<long double>(0.0L, e[2] - e[1], e[2] - e[0]);
        return static_cast<double>(4.0L * rf);
    }
    std::complex<long double> e1, e2, e3;
    for (auto& r : roots)
        (r.imag() == 0.0L ? e1 : (r.imag() > 0.0L ? e2 : e3)) = r;
    std::complex<long double> rf =
        carlson_rf<std::complex<long double>>(0.0L, e1 - e2, e1 - e3);
    return static_cast<double>(2.0L * rf.real());
}

}  // namespace detail

/// Real period Omega(E) of the global minimal model (covariant by |u| under
/// coordinate changes, so this is the model-independent normalization).
inline double real_period(const WeierstrassModel& E) {
    return detail::real_period_of_model(global_minimal_model(E).model);
}

// ---------------------------------------------------------------------------
// Arithmetic-invariant record for side-by-side comparison of two curves.

struct BSDRecord {
    std::string curve;  ///< model string of the input
    Int conductor;
    Int min_disc;
    std::string torsion_structure;
    long torsion_order = 1;
    std::map<Int, long> tamagawa;           ///< bad prime -> c_p
    std::map<Int, std::string> kodaira;     ///< bad prime -> symbol
    double real_period = 0.0;
    std::optional<long> rank;               ///< absent when unknown
    std::string rank_tag;                   ///< "verified-lower-bound" or "assumed"
    std::optional<double> regulator;        ///< absent when no basis supplied
    std::string regulator_note;
    std::string l_value_note = "not computed";
    std::string sha_note = "not computed (analytic order unavailable)";
    Rat j_invariant;
};

/// Assemble the record.  `points` (optional) feeds the regulator through the
/// height pairing; `assumed_rank` records an externally supplied rank with
/// the honest "assumed" tag.
inline BSDRecord bsd_record(const WeierstrassModel& E,
                            std::optional<long> assumed_rank = std::nullopt,
                            const std::vector<CurvePoint>& points = {}) {
    BSDRecord R;
    R.curve = E.str();
    GlobalMinimalResult gm = global_minimal_model(E);
    R.min_disc = gm.min_disc;
    R.j_invariant = E.invariants().j;
    Int N = 1;
    for (const Int& p : discriminant_primes(gm.model)) {
        LocalData L = tate_algorithm(gm.model, p);
        if (L.reduction_class == ReductionClass::good) continue;
        R.tamagawa[p] = L.tamagawa;
        R.kodaira[p] = L.kodaira.str();
        N *= pow_int(p, L.conductor_exponent);
    }
    R.conductor = N;
    TorsionGroup T = torsion_subgroup(E);
    R.torsion_structure = T.structure;
    R.torsion_order = T.order;
    R.real_period = real_period(E);
    if (!points.empty()) {
        auto [lower, H] = independence_certificate(E, points);
        R.regulator = H.regulator;
        R.regulator_note = "Gram determinant of " + std::to_string(points.size()) +
                           " supplied points; certified independent rank >= " +
                           std::to_string(lower);
        if (!assumed_rank) {
            R.rank = lower;
            R.rank_tag = "verified-lower-bound";
        }
    }
    if (assumed_rank) {
        R.rank = *assumed_rank;
        R.rank_tag = "assumed";
        if (*assumed_rank == 0 && !R.regulator) {
            R.regulator = 1.0;
            R.regulator_note = "rank 0 convention";
        }
    }
    return R;
}

struct FieldComparison {
    std::string field;
    bool equal = false;
    std::string a, b;
};

struct ComparisonReport {
    std::vector<FieldComparison> fields;
    bool all_equal = true;
};

namespace detail {

inline std::string fmt_double(double v) {
    std::ostringstream os;
    os.precision(15);
    os << v;
    return os.str();
}

}  // namespace detail

/// Field-by-field comparison of two records; discrete invariants compare
/// exactly, the period to relative `period_rtol`.  The j-invariants are
/// always included so isomorphic-vs-merely-similar curves are distinguishable.
inline ComparisonReport compare_records(const BSDRecord& A, const BSDRecord& B,
                                        double period_rtol = 1e-9) {
    ComparisonReport R;
    auto push = [&R](const std::string& f, bool eq, std::string a, std::string b) {
        R.fields.push_back({f, eq, std::move(a), std::move(b)});
        R.all_equal = R.all_equal && eq;
    };
    push("conductor", A.conductor == B.conductor, A.conductor.get_str(), B.conductor.get_str());
    push("minimal-discriminant", A.min_disc == B.min_disc, A.min_disc.get_str(),
         B.min_disc.get_str());
    push("torsion", A.torsion_structure == B.torsion_structure, A.torsion_structure,
         B.torsion_structure);
    auto map_str = [](const auto& m, auto fmt) {
        std::string s = "{";
        for (auto& [k, v] : m) s += (s.size() > 1 ? ", " : "") + k.get_str() + ": " + fmt(v);
        return s + "}";
    };
    auto lfmt = [](long v) { return std::to_string(v); };
    auto sfmt = [](const std::string& v) { return v; };
    push("tamagawa-numbers", A.tamagawa == B.tamagawa, map_str(A.tamagawa, lfmt),
         map_str(B.tamagawa, lfmt));
    push("kodaira-symbols", A.kodaira == B.kodaira, map_str(A.kodaira, sfmt),
         map_str(B.kodaira, sfmt));
    double denom = std::max(std::abs(A.real_period), std::abs(B.real_period));
    push("real-period", std::abs(A.real_period - B.real_period) <= period_rtol * denom,
         detail::fmt_double(A.real_period), detail::fmt_double(B.real_period));
    auto rank_str = [](const BSDRecord& X) {
        return X.rank ? std::to_string(*X.rank) + " (" + X.rank_tag + ")" : std::string("unknown");
    };
    push("rank", A.rank.has_value() && B.rank.has_value() && *A.rank == *B.rank, rank_str(A),
         rank_str(B));
    auto reg_str = [](const BSDRecord& X) {
        return X.regulator ? detail::fmt_double(*X.regulator) : std::string("not computed");
    };
    push("regulator",
         A.regulator.has_value() && B.regulator.has_value() &&
             std::abs(*A.regulator - *B.regulator) <=
                 1e-4 * std::max(1.0, std::max(std::abs(*A.regulator), std::abs(*B.regulator))),
         reg_str(A), reg_str(B));
    push("j-invariant", A.j_invariant == B.j_invariant, to_string(A.j_invariant),
         to_string(B.j_invariant));
    return R;
}

}  // namespace shavis
