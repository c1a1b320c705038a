#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "shavis/poly.hpp"
#include "shavis/primes.hpp"
#include "shavis/rational.hpp"

namespace shavis {

/// Raised when a computation cannot be decided at the working precision.
/// Callers retry with a higher precision instead of guessing.
class IndeterminatePrecision : public std::runtime_error {
public:
    explicit IndeterminatePrecision(const std::string& what)
        : std::runtime_error("indeterminate at this precision: " + what) {}
};

/// A p-adic number known to `precision` significant digits:
///   value = unit * p^valuation  with  unit a unit mod p (unless exact_zero).
struct PadicApprox {
    Int p;
    long valuation = 0;
    Int unit;  ///< residue mod p^precision, p ∤ unit
    long precision = 0;
    bool exact_zero = false;

    static PadicApprox zero(const Int& p, long precision) {
        PadicApprox z;
        z.p = p;
        z.unit = 0;
        z.precision = precision;
        z.exact_zero = true;
        return z;
    }

    /// From an exact rational with denominator handled via valuation.
    static PadicApprox from_rational(const Rat& q, const Int& p, long precision) {
        if (q == 0) return zero(p, precision);
        PadicApprox a;
        a.p = p;
        a.precision = precision;
        a.valuation = shavis::valuation(q, p);
        Rat u = a.valuation >= 0
                    ? Rat(q / Rat(pow_int(p, static_cast<unsigned long>(a.valuation))))
                    : Rat(q * Rat(pow_int(p, static_cast<unsigned long>(-a.valuation))));
        a.unit = mod_pos(u, pow_int(p, precision));
        return a;
    }

    /// The rational representative unit * p^valuation (exact as far as known).
    Rat representative() const {
        if (exact_zero) return Rat(0);
        Rat r(unit);
        Int pv = pow_int(p, static_cast<unsigned long>(std::abs(valuation)));
        return valuation >= 0 ? Rat(r * Rat(pv)) : Rat(r / Rat(pv));
    }

    bool is_square() const {
        if (exact_zero) throw std::domain_error("square class of p-adic zero");
        if (p == 2) throw std::domain_error("square test implemented for odd p only");
        if (valuation % 2 != 0) return false;
        return jacobi_symbol(mod_pos(unit, p), p) == 1;
    }

    std::string str() const {
        if (exact_zero) return "O(" + p.get_str() + "^" + std::to_string(precision) + ")";
        return unit.get_str() + "*" + p.get_str() + "^" + std::to_string(valuation) + " + O(" +
               p.get_str() + "^" + std::to_string(valuation + precision) + ")";
    }
};

namespace detail {

/// Newton lift of a simple root r of f mod p^k0 (f'(r) a unit) to mod p^target.
inline Int newton_lift(const IntPolynomial& f, const Int& p, Int r, long k0, long target) {
    long k = k0;
    while (k < target) {
        k = std::min(2 * k, target);
        Int m = pow_int(p, k);
        Int corr = mod_pos(f(r), m) * inv_mod(mod_pos(-f.derivative()(r), m), m);
        r = mod_pos(r + corr, m);
    }
    return mod_pos(r, pow_int(p, target));
}

/// Coefficients of f(x + r) (Taylor shift by synthetic division; degrees tiny).
inline std::vector<Int> taylor_shift(const IntPolynomial& f, const Int& r) {
    std::vector<Int> taylor(f.degree() + 1, Int(0));
    std::vector<Int> cur(f.coeffs());
    for (long i = 0; i <= f.degree() && !cur.empty(); ++i) {
        Int rem = 0;
        for (long j = static_cast<long>(cur.size()) - 1; j >= 0; --j) {
            Int tmp = cur[j] + rem * r;
            cur[j] = rem;
            rem = tmp;
        }
        taylor[i] = rem;
        cur.pop_back();  // quotient occupies the low indices; top slot is 0
    }
    return taylor;
}

/// All roots of f in Z_p, as residues mod p^prec.  f must be squarefree.
/// Classic branch-and-lift: simple residues Hensel-lift uniquely; multiple
/// residues are refined by the substitution x = r + p t, dividing out the
/// content power of p.  Depth is bounded by the working precision; exceeding
/// it raises IndeterminatePrecision.
inline void zp_roots_rec(const IntPolynomial& f, const Int& p, long prec, const Int& offset,
                         long depth, std::vector<Int>& out) {
    if (depth > prec + 2)
        throw IndeterminatePrecision("root cluster not separated (depth " +
                                     std::to_string(depth) + ")");
    IntPolynomial df = f.derivative();
    long pl = p.get_si();
    Int scale = pow_int(p, depth);
    for (long r0 = 0; r0 < pl; ++r0) {
        Int r(r0);
        if (mod_pos(f(r), p) != 0) continue;
        if (mod_pos(df(r), p) != 0) {
            // Simple: unique Z_p root over this residue.
            long remaining = prec - depth;
            if (remaining < 1) remaining = 1;
            Int lifted = newton_lift(f, p, r, 1, remaining);
            out.push_back(mod_pos(offset + scale * lifted, pow_int(p, prec)));
        } else {
            // Multiple residue: refine with x = r + p t, dividing out the
            // p-power content.  g(t) = f(r + p t) / p^m.
            std::vector<Int> taylor = taylor_shift(f, r);
            for (long i = 0; i <= f.degree(); ++i) taylor[i] *= pow_int(p, i);
            IntPolynomial g(std::move(taylor));
            long m = valuation(g.content(), p);
            Int pm = pow_int(p, m);
            std::vector<Int> gd(g.coeffs());
            for (auto& x : gd) x /= pm;
            zp_roots_rec(IntPolynomial(std::move(gd)), p, prec, offset + scale * r, depth + 1, out);
        }
    }
}

/// Count of roots (with multiplicity) of slope -s segments with integer s,
/// from the Newton polygon of f at p.  Used as a completeness cross-check.
inline long newton_polygon_integer_slope_count(const IntPolynomial& f, const Int& p) {
    std::vector<std::pair<long, long>> pts;  // (i, v_p(c_i))
    for (long i = 0; i <= f.degree(); ++i)
        if (f.coeff(i) != 0) pts.emplace_back(i, valuation(f.coeff(i), p));
    // Lower convex hull left to right.
    std::vector<std::pair<long, long>> hull;
    for (auto& pt : pts) {
        while (hull.size() >= 2) {
            auto& a = hull[hull.size() - 2];
            auto& b = hull[hull.size() - 1];
            // Keep hull lower-convex: cross product test.
            long long cx = static_cast<long long>(b.first - a.first) * (pt.second - a.second) -
                           static_cast<long long>(pt.first - a.first) * (b.second - a.second);
            if (cx <= 0)
                hull.pop_back();
            else
                break;
        }
        hull.push_back(pt);
    }
    long count = 0;
    for (size_t i = 0; i + 1 < hull.size(); ++i) {
        long dx = hull[i + 1].first - hull[i].first;
        long dy = hull[i + 1].second - hull[i].second;
        if (dy % dx == 0) count += dx;  // slope dy/dx integral: -slope = valuation of roots
    }
    return count;
}

}  // namespace detail

/// All roots of f in Q_p to the requested precision, negative valuations
/// included (via coefficient reversal).  The returned set is complete; a
/// Newton-polygon census bounds the possible count as a structural check.
inline std::vector<PadicApprox> hensel_roots(const IntPolynomial& f_in, const Int& p,
                                             long precision) {
    if (f_in.is_zero()) throw std::invalid_argument("hensel_roots: zero polynomial");
    if (precision < 2) throw std::invalid_argument("hensel_roots: precision must be >= 2");
    IntPolynomial f = squarefree_part(f_in);
    std::vector<PadicApprox> out;
    if (f.degree() < 1) return out;

    // Strip x = 0 root.
    long zero_mult = 0;
    while (f.coeff(0) == 0) {
        std::vector<Int> c(f.coeffs().begin() + 1, f.coeffs().end());
        f = IntPolynomial(std::move(c));
        ++zero_mult;
    }
    if (zero_mult > 0) out.push_back(PadicApprox::zero(p, precision));

    // Normalize so content is prime to p.
    {
        long m = valuation(f.content(), p);
        if (m > 0) {
            Int pm = pow_int(p, m);
            std::vector<Int> c(f.coeffs());
            for (auto& x : c) x /= pm;
            f = IntPolynomial(std::move(c));
        }
    }

    long census = detail::newton_polygon_integer_slope_count(f, p);

    // Z_p roots.
    std::vector<Int> zp;
    detail::zp_roots_rec(f, p, precision, Int(0), 0, zp);
    Int pprec = pow_int(p, precision);
    for (const Int& r : zp) {
        PadicApprox a;
        a.p = p;
        a.valuation = r == 0 ? precision : valuation(r, p);
        if (a.valuation >= precision)
            throw IndeterminatePrecision("nonzero root indistinguishable from 0 at precision " +
                                         std::to_string(precision));
        a.precision = precision - a.valuation;
        a.unit = mod_pos(r / pow_int(p, a.valuation), pow_int(p, a.precision));
        out.push_back(a);
    }

    // Negative-valuation roots: reciprocal roots of the reversed polynomial
    // that lie in pZ_p.
    IntPolynomial rev = f.reversed();  // rev(0) = leading(f) != 0
    {
        std::vector<Int> zr;
        detail::zp_roots_rec(rev, p, precision, Int(0), 0, zr);
        for (const Int& r : zr) {
            if (r == 0)
                throw IndeterminatePrecision("pole-side root indistinguishable from 0");
            long v = valuation(r, p);
            if (v < 1) continue;  // units already found directly
            if (v >= precision)
                throw IndeterminatePrecision("root valuation at or beyond working precision");
            // root of f is 1/r with valuation -v.
            long uprec = precision - v;
            Int mod = pow_int(p, uprec);
            Int u = inv_mod(mod_pos(r / pow_int(p, v), mod), mod);
            PadicApprox a;
            a.p = p;
            a.valuation = -v;
            a.unit = u;
            a.precision = uprec;
            out.push_back(a);
        }
    }

    if (static_cast<long>(out.size()) > census + zero_mult)
        throw std::logic_error("hensel_roots: found more roots than Newton polygon allows");
    return out;
}

}  // namespace shavis
