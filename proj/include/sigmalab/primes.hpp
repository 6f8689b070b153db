#pragma once

// Integer utilities for desk-scale inputs: deterministic Miller-Rabin for
// 64-bit, trial-division factorization with a configurable effort budget, and
// the downward prime search used for the modulus choice.

#include <cstdint>
#include <vector>

#include "sigmalab/errors.hpp"

namespace sigmalab {

namespace detail {
inline std::uint64_t mulmod_u64(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
    return (std::uint64_t)((__uint128_t)a * b % m);
}
inline std::uint64_t powmod_u64(std::uint64_t a, std::uint64_t e, std::uint64_t m) {
    std::uint64_t r = 1 % m;
    a %= m;
    while (e) {
        if (e & 1) r = mulmod_u64(r, a, m);
        a = mulmod_u64(a, a, m);
        e >>= 1;
    }
    return r;
}
} // namespace detail

// Deterministic for all 64-bit inputs with this witness set.
inline bool is_prime_u64(std::uint64_t n) {
    if (n < 2) return false;
    for (std::uint64_t p : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
        if (n % p == 0) return n == p;
    }
    std::uint64_t d = n - 1;
    int r = 0;
    while ((d & 1) == 0) { d >>= 1; ++r; }
    for (std::uint64_t a : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
        std::uint64_t x = detail::powmod_u64(a, d, n);
        if (x == 1 || x == n - 1) continue;
        bool composite = true;
        for (int i = 1; i < r; ++i) {
            x = detail::mulmod_u64(x, x, n);
            if (x == n - 1) { composite = false; break; }
        }
        if (composite) return false;
    }
    return true;
}

// Largest prime <= n (0 if none).
inline std::uint64_t prev_prime(std::uint64_t n) {
    for (std::uint64_t m = n; m >= 2; --m)
        if (is_prime_u64(m)) return m;
    return 0;
}

struct PrimePower {
    std::uint64_t p;
    unsigned e;
};

// Trial division. Throws OverflowBudget once more than max_trials candidate
// divisors have been tested, which keeps runaway inputs out of the caches.
inline std::vector<PrimePower> factorize(std::uint64_t n, std::uint64_t max_trials = 1u << 26) {
    if (n == 0) throw DomainError("factorize: n must be positive");
    std::vector<PrimePower> out;
    std::uint64_t trials = 0;
    for (std::uint64_t p = 2; p * p <= n; p += (p == 2 ? 1 : 2)) {
        if (++trials > max_trials) throw OverflowBudget("factorize: trial budget exceeded");
        if (n % p) continue;
        unsigned e = 0;
        while (n % p == 0) { n /= p; ++e; }
        out.push_back({p, e});
    }
    if (n > 1) out.push_back({n, 1});
    return out;
}

inline bool is_perfect_square(std::uint64_t n, std::uint64_t* root = nullptr) {
    std::uint64_t r = (std::uint64_t)__builtin_sqrt((double)n);
    while (r > 0 && r * r > n) --r;
    while ((r + 1) * (r + 1) <= n) ++r;
    if (root) *root = r;
    return r * r == n;
}

// Smallest-prime-factor sieve for bulk multiplicative-function tables.
inline std::vector<std::uint32_t> spf_sieve(std::uint32_t n) {
    std::vector<std::uint32_t> spf(n + 1, 0);
    for (std::uint32_t i = 2; i <= n; ++i) {
        if (spf[i] == 0) {
            for (std::uint64_t j = i; j <= n; j += i)
                if (spf[j] == 0) spf[j] = i;
        }
    }
    return spf;
}

} // namespace sigmalab
