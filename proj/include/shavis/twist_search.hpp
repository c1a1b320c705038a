#pragma once

#include <stdexcept>
#include <vector>

#include "shavis/primes.hpp"
#include "shavis/rational.hpp"

namespace shavis {

/// A congruence condition D mod modulus in allowed residues.
struct CongruenceCondition {
    long modulus = 2;
    std::vector<long> residues;
};

/// Required value of the Legendre symbol (D / q).
struct LegendreCondition {
    long q = 3;
    int value = 1;
};

/// Sieve query for square-free twist parameters.
struct TwistQuery {
    long dmin = 2, dmax = 0;
    bool require_prime = false;
    std::vector<CongruenceCondition> congruences;
    std::vector<LegendreCondition> legendre_conditions;
    long coprime_to = 1;  ///< D must avoid every prime factor of this integer

    void validate() const {
        if (dmin > dmax) throw std::invalid_argument("twist query: empty range");
        for (const auto& c : congruences)
            if (c.modulus < 2) throw std::invalid_argument("twist query: modulus must be >= 2");
        for (const auto& l : legendre_conditions) {
            if (l.q < 3 || l.q % 2 == 0 || !is_prime(Int(l.q)))
                throw std::invalid_argument("twist query: Legendre primes must be odd primes");
            if (l.value != 1 && l.value != -1)
                throw std::invalid_argument("twist query: Legendre value must be +-1");
        }
        if (coprime_to == 0) throw std::invalid_argument("twist query: coprime modulus is zero");
    }
};

/// All D in [dmin, dmax] meeting every condition, ascending.  Square-free is
/// always enforced; D = 0 never qualifies.  Negative D are allowed: residue
/// and symbol tests use the signed value (mod_pos / jacobi on |.| with sign).
inline std::vector<long> scan(const TwistQuery& q) {
    q.validate();
    std::vector<long> out;
    for (long D = q.dmin; D <= q.dmax; ++D) {
        if (D == 0) continue;
        Int Di(D);
        if (!is_squarefree(Di)) continue;
        if (q.require_prime && !is_prime(abs(Di))) continue;
        bool ok = true;
        for (const auto& c : q.congruences) {
            long r = mod_pos(Di, Int(c.modulus)).get_si();
            bool hit = false;
            for (long allowed : c.residues) hit = hit || mod_pos(Int(allowed), Int(c.modulus)) == r;
            if (!hit) { ok = false; break; }
        }
        if (!ok) continue;
        for (const auto& l : q.legendre_conditions) {
            if (jacobi_symbol(mod_pos(Di, Int(l.q)), Int(l.q)) != l.value) { ok = false; break; }
        }
        if (!ok) continue;
        if (q.coprime_to != 1 && gcd(Di, Int(q.coprime_to)) != 1) continue;
        // Double-entry re-verification through the factorization path: the
        // sieve verdicts above must agree with first-principles recomputation.
        {
            auto f = factor(abs(Di));
            for (auto& [p, e] : f) {
                if (e > 1) throw std::logic_error("twist scan: square-free check contradicted");
                if (q.coprime_to != 1 && mod_pos(Int(q.coprime_to), p) == 0)
                    throw std::logic_error("twist scan: coprimality check contradicted");
            }
            if (q.require_prime && !(f.size() == 1 && f.begin()->second == 1))
                throw std::logic_error("twist scan: primality check contradicted");
        }
        out.push_back(D);
    }
    return out;
}

/// The paper's condition set: D prime, D = 1 mod 8, (D/5) = -1, (D/13) = 1,
/// gcd(D, 390) = 1, and the visibility clause D = 2 mod 3.
inline TwistQuery paper_query(long dmin, long dmax) {
    TwistQuery q;
    q.dmin = dmin;
    q.dmax = dmax;
    q.require_prime = true;
    q.congruences = {{8, {1}}, {3, {2}}};
    q.legendre_conditions = {{5, -1}, {13, 1}};
    q.coprime_to = 390;  // 2 * 3 * 5 * 13
    return q;
}

}  // namespace shavis
