#pragma once

#include <optional>
#include <stdexcept>
#include <vector>

#include "shavis/tate.hpp"
#include "shavis/weierstrass.hpp"

namespace shavis {

/// Sturm bound data for weight k on Gamma_0(N).
struct SturmBound {
    Int N;
    long weight = 2;
    Int index;  ///< [SL2(Z) : Gamma_0(N)]
    long bound = 0;
};

/// B = floor(k * index / 12) with index = N * prod_{p | N} (1 + 1/p).
inline SturmBound sturm_bound(const Int& N, long k) {
    if (N < 1) throw std::invalid_argument("sturm_bound: N must be positive");
    SturmBound S;
    S.N = N;
    S.weight = k;
    Int num = N, den = 1;
    for (auto& [p, e] : factor(N)) {
        num *= p + 1;
        den *= p;
    }
    if (num % den != 0) throw std::logic_error("sturm_bound: index not integral");
    S.index = num / den;
    S.bound = Int(k * S.index / 12).get_si();
    return S;
}

/// Newform coefficient at a bad prime: 0 additive, +1 split, -1 nonsplit.
inline long bad_prime_ap(const WeierstrassModel& E, const Int& p) {
    LocalData L = tate_algorithm(E, p);
    switch (L.reduction_class) {
        case ReductionClass::good:
            throw std::invalid_argument("bad_prime_ap: good reduction at p");
        case ReductionClass::additive: return 0;
        case ReductionClass::split_multiplicative: return 1;
        case ReductionClass::nonsplit_multiplicative: return -1;
    }
    throw std::logic_error("bad_prime_ap: unreachable");
}

/// q-expansion of the newform attached to E, coefficients a_1..a_B.
struct QExpansion {
    Int N;           ///< level (conductor of E)
    long weight = 2;
    std::vector<long> a;  ///< a[n] for 1 <= n <= B; a[0] unused

    long coeff(long n) const { return a.at(n); }
};

/// Assemble a_1..a_B from point counts at good primes, the reduction class at
/// bad primes, the Hecke recurrence at prime powers, and multiplicativity.
inline QExpansion q_expansion(const WeierstrassModel& E_in, long B) {
    if (B < 1) throw std::invalid_argument("q_expansion: B must be >= 1");
    GlobalMinimalResult R = global_minimal_model(E_in);
    const WeierstrassModel& E = R.model;
    QExpansion f;
    f.N = 1;
    for (auto& [q, L] : R.local) f.N *= pow_int(q, L.conductor_exponent);

    f.a.assign(B + 1, 0);
    f.a[1] = 1;
    // Smallest-prime-factor sieve for multiplicative assembly.
    std::vector<long> spf(B + 1, 0);
    for (long i = 2; i <= B; ++i)
        if (spf[i] == 0)
            for (long j = i; j <= B; j += i)
                if (spf[j] == 0) spf[j] = i;

    for (long p = 2; p <= B; ++p) {
        if (spf[p] != p) continue;  // not prime
        bool bad = f.N % p == 0;
        long ap = bad ? bad_prime_ap(E, Int(p)) : count_points_ap(E, p);
        // Prime powers.
        long prev2 = 1, prev1 = ap, pk = p;
        f.a[pk] = ap;
        while (pk <= B / p) {
            pk *= p;
            long cur = bad ? prev1 * ap : ap * prev1 - p * prev2;
            f.a[pk] = cur;
            prev2 = prev1;
            prev1 = cur;
        }
    }
    // Multiplicativity: peel the full power of the smallest prime factor.
    for (long n = 2; n <= B; ++n) {
        long p = spf[n];
        long pk = 1, m = n;
        while (m % p == 0) { m /= p; pk *= p; }
        if (m != 1) f.a[n] = f.a[pk] * f.a[m];
    }
    return f;
}

/// Verdict of a mod-l coefficient comparison up to the Sturm bound.
struct CongruenceVerdict {
    Int ell;
    long bound = 0;
    Int index;
    bool congruent = false;
    std::optional<long> first_failure;  ///< smallest n with a_n mismatched mod l
};

/// Compare a_n(E) and a_n(F) mod l for 1 <= n <= Sturm bound of the common
/// level.  Congruence up to the bound certifies it for all n.
inline CongruenceVerdict congruence_verdict(const WeierstrassModel& E, const WeierstrassModel& F,
                                            const Int& ell) {
    if (!is_prime(ell)) throw std::invalid_argument("congruence_verdict: l must be prime");
    Int NE = conductor(E), NF = conductor(F);
    if (NE != NF)
        throw std::invalid_argument("level mismatch: conductors " + NE.get_str() + " and " +
                                    NF.get_str() + " differ");
    SturmBound S = sturm_bound(NE, 2);
    CongruenceVerdict V;
    V.ell = ell;
    V.bound = S.bound;
    V.index = S.index;
    QExpansion fE = q_expansion(E, S.bound);
    QExpansion fF = q_expansion(F, S.bound);
    V.congruent = true;
    for (long n = 1; n <= S.bound; ++n) {
        if (mod_pos(Int(fE.a[n] - fF.a[n]), ell) != 0) {
            V.congruent = false;
            V.first_failure = n;
            break;
        }
    }
    return V;
}

}  // namespace shavis
