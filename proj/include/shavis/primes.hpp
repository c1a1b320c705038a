#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <vector>

#include "shavis/rational.hpp"

namespace shavis {

/// Jacobi symbol (a/n) for odd positive n.
inline int jacobi_symbol(const Int& a, const Int& n) {
    if (n <= 0 || mpz_even_p(n.get_mpz_t()))
        throw std::invalid_argument("jacobi_symbol: n must be odd and positive");
    return mpz_jacobi(a.get_mpz_t(), n.get_mpz_t());
}

enum class Primality { composite, prime, probable_prime };

/// Miller-Rabin with the first 12 prime bases: deterministic below 3.3e24,
/// which covers every certified range this toolkit promises (3.3e14).
inline Primality classify_prime(const Int& n) {
    if (n < 2) return Primality::composite;
    static const int bases[] = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37};
    for (int b : bases) {
        if (n == b) return Primality::prime;
        if (n % b == 0) return Primality::composite;
    }
    Int d = n - 1;
    long s = 0;
    while (mpz_even_p(d.get_mpz_t())) { d >>= 1; ++s; }
    for (int b : bases) {
        Int x;
        Int bb(b);
        mpz_powm(x.get_mpz_t(), bb.get_mpz_t(), d.get_mpz_t(), n.get_mpz_t());
        if (x == 1 || x == n - 1) continue;
        bool witness = true;
        for (long i = 1; i < s; ++i) {
            x = x * x % n;
            if (x == n - 1) { witness = false; break; }
        }
        if (witness) return Primality::composite;
    }
    static const Int certified_bound = Int("3317044064679887385961981");
    return n < certified_bound ? Primality::prime : Primality::probable_prime;
}

inline bool is_prime(const Int& n) { return classify_prime(n) != Primality::composite; }

namespace detail {

inline Int pollard_brent(const Int& n) {
    // Brent's cycle variant; n odd composite, not a prime power edge handled by caller retry.
    for (Int c = 1; ; ++c) {
        Int x = 2, y = 2, d = 1, q = 1, ys = y;
        long r = 1;
        const long m = 128;
        while (d == 1) {
            x = y;
            for (long i = 0; i < r; ++i) y = (y * y + c) % n;
            for (long k = 0; k < r && d == 1; k += m) {
                ys = y;
                long lim = std::min(m, r - k);
                for (long i = 0; i < lim; ++i) {
                    y = (y * y + c) % n;
                    q = q * abs(x - y) % n;
                }
                d = gcd(q, n);
            }
            r *= 2;
            if (r > (1L << 24)) break;
        }
        if (d == n) {
            // Backtrack one step at a time.
            d = 1;
            while (d == 1) {
                ys = (ys * ys + c) % n;
                d = gcd(abs(x - ys), n);
            }
        }
        if (d != n && d != 1) return d;
    }
}

inline void factor_rec(Int n, std::map<Int, long>& out) {
    if (n == 1) return;
    if (is_prime(n)) { ++out[n]; return; }
    if (is_square(n)) {
        Int r = isqrt(n);
        factor_rec(r, out);
        factor_rec(r, out);
        return;
    }
    Int d = pollard_brent(n);
    factor_rec(d, out);
    factor_rec(n / d, out);
}

}  // namespace detail

/// Prime factorization of |n| as {prime: exponent}.  n != 0.
inline std::map<Int, long> factor(Int n) {
    if (n == 0) throw std::invalid_argument("factor: n must be nonzero");
    n = abs(n);
    std::map<Int, long> out;
    for (long p : {2L, 3L, 5L}) {
        while (n % p == 0) { n /= p; ++out[p]; }
    }
    // Trial division to 1e6 by a 2,4-wheel-ish stride.
    for (Int p = 7; p <= 1000000 && p * p <= n; p += 2) {
        while (n % p == 0) { n /= p; ++out[p]; }
    }
    if (n > 1) detail::factor_rec(n, out);
    return out;
}

inline bool is_squarefree(const Int& n) {
    if (n == 0) return false;
    for (auto& [p, e] : factor(n))
        if (e > 1) return false;
    return true;
}

/// Ascending primes in [2, limit] by sieve.
inline std::vector<long> primes_up_to(long limit) {
    std::vector<bool> sieve(std::max(limit + 1, 2L), true);
    std::vector<long> out;
    for (long i = 2; i <= limit; ++i) {
        if (!sieve[i]) continue;
        out.push_back(i);
        for (long j = 2 * i; j <= limit; j += i) sieve[j] = false;
    }
    return out;
}

}  // namespace shavis
