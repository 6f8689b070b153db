#pragma once

// The two multiplicative coefficient families. sigma_k(n) sums
// d_1^{1/k} d_2^{2/k} ... d_{k-1}^{(k-1)/k} over tuples with product dividing
// n; a_n is the same sum with negated exponents. Both are computed from the
// prime factorization: the local factor at p^e is an integer-weighted sum of
// powers p^{j/k}, and the integer weights depend only on (k, e).

#include <cstdint>
#include <map>
#include <mutex>
#include <vector>

#include "sigmalab/dirichlet.hpp"
#include "sigmalab/precision.hpp"
#include "sigmalab/primes.hpp"
#include "sigmalab/rational.hpp"

namespace sigmalab {

// weights[j] = #{(e_1..e_{k-1}) >= 0 : sum e_i <= e, sum i e_i = j}, so that
// sigma_k(p^e) = sum_j weights[j] p^{j/k} and a(p^e) = sum_j weights[j] p^{-j/k}.
inline const std::vector<Int>& local_exponent_weights(long k, unsigned e) {
    static std::map<std::pair<long, unsigned>, std::vector<Int>> cache;
    static std::mutex mu;
    std::scoped_lock lock(mu);
    auto key = std::make_pair(k, e);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;

    // dp[used][j]: tuples of the first i coordinates with sum e_i = used, sum i e_i = j
    long jmax = (k - 1) * (long)e;
    std::vector<std::vector<Int>> dp(e + 1, std::vector<Int>(jmax + 1, 0));
    dp[0][0] = 1;
    for (long i = 1; i <= k - 1; ++i) {
        std::vector<std::vector<Int>> nx(e + 1, std::vector<Int>(jmax + 1, 0));
        for (unsigned used = 0; used <= e; ++used)
            for (long j = 0; j <= jmax; ++j) {
                if (dp[used][j] == 0) continue;
                for (unsigned ei = 0; used + ei <= e && j + i * (long)ei <= jmax; ++ei)
                    nx[used + ei][j + i * (long)ei] += dp[used][j];
            }
        dp.swap(nx);
    }
    std::vector<Int> weights(jmax + 1, 0);
    for (unsigned used = 0; used <= e; ++used)
        for (long j = 0; j <= jmax; ++j) weights[j] += dp[used][j];
    return cache.emplace(key, std::move(weights)).first->second;
}

namespace detail {

inline Real local_factor(std::uint64_t p, unsigned e, long k, bool inverse, Prec prec) {
    const auto& w = local_exponent_weights(k, e);
    Real root = rootn(Real((long)p, prec), (unsigned long)k);
    if (inverse) root = Real(1L, prec) / root;
    Real acc(prec), pw(1L, prec);
    for (size_t j = 0; j < w.size(); ++j) {
        if (w[j] != 0) acc += to_real(w[j], prec) * pw;
        pw *= root;
    }
    return acc;
}

inline Real multiplicative_value(std::uint64_t n, long k, bool inverse, Prec prec) {
    Real acc(1L, prec);
    for (auto& pp : factorize(n)) acc *= local_factor(pp.p, pp.e, k, inverse, prec);
    return acc;
}

} // namespace detail

inline Real sigma_k(const PrecisionContext& ctx, std::uint64_t n, long k) {
    if (k < 2) throw DomainError("sigma_k: k must exceed 1");
    if (n == 0) throw DomainError("sigma_k: n must be positive");
    return detail::multiplicative_value(n, k, false, ctx.working_bits);
}

inline Real a_coeff(const PrecisionContext& ctx, std::uint64_t n, long k) {
    if (k < 2) throw DomainError("a_coeff: k must exceed 1");
    if (n == 0) throw DomainError("a_coeff: n must be positive");
    return detail::multiplicative_value(n, k, true, ctx.working_bits);
}

// Bulk tables over 1..N via a smallest-prime-factor sieve; index 0 unused.
inline std::vector<Real> multiplicative_table(std::uint32_t N, long k, bool inverse, Prec prec) {
    auto spf = spf_sieve(N);
    std::vector<Real> v;
    v.reserve(N + 1);
    v.emplace_back(Real::nan());
    v.emplace_back(Real(1L, prec));
    std::map<std::pair<std::uint64_t, unsigned>, Real> local;
    for (std::uint32_t n = 2; n <= N; ++n) {
        std::uint32_t p = spf[n], m = n;
        unsigned e = 0;
        while (m % p == 0) { m /= p; ++e; }
        auto key = std::make_pair((std::uint64_t)p, e);
        auto it = local.find(key);
        if (it == local.end())
            it = local.emplace(key, detail::local_factor(p, e, k, inverse, prec)).first;
        v.push_back(m == 1 ? it->second : v[m] * it->second);
    }
    return v;
}

inline std::vector<Real> sigma_table(std::uint32_t N, long k, Prec prec) {
    return multiplicative_table(N, k, false, prec);
}
inline std::vector<Real> a_table(std::uint32_t N, long k, Prec prec) {
    return multiplicative_table(N, k, true, prec);
}

// Upper bound for sum_{n > N} d_k(n) n^beta (beta < -1), from Abel summation
// against D_k(t) <= t (ln t + 1)^{k-1}:
//   (-beta) N^{beta+1} sum_i C(k-1,i) (ln N + 1)^{k-1-i} i! / (-beta-1)^{i+1}.
inline Real divisor_tail_bound(long k, const Real& beta, std::uint64_t N, Prec prec) {
    if (!(beta < Real(-1L, prec))) throw DomainError("divisor_tail_bound: beta must be < -1");
    Real lnN1 = log(Real((long)N, prec)) + 1;
    Real mb1 = -beta - 1;
    Real acc(prec);
    for (long i = 0; i <= k - 1; ++i) {
        Real term = to_real(binomial_int((unsigned long)(k - 1), (unsigned long)i), prec) *
                    pow(lnN1, k - 1 - i) * to_real(factorial_int((unsigned long)i), prec) /
                    pow(mb1, i + 1);
        acc += term;
    }
    return -beta * pow(Real((long)N, prec), beta + 1) * acc;
}

struct PartialSumResult {
    Complex value;
    Real tail_bound; // bound on |sum_{n > N_cut} sigma_k(n) chi(n) n^{-s}|
};

// sum_{n <= N_cut} sigma_k(n) chi(n) n^{-s}; requires Re s > 2 - 1/k. The tail
// bound uses sigma_k(n) <= d_k(n) n^{(k-1)/k}.
inline PartialSumResult dirichlet_partial_sum(const PrecisionContext& ctx, long k,
                                              const DirichletCharacter& chi, const Complex& s,
                                              std::uint32_t N_cut) {
    Prec p = ctx.working_bits;
    Real edge = Real(2L, p) - Real(1L, p) / Real(k, p);
    if (!(s.re > edge)) throw DivergenceError("dirichlet_partial_sum: Re s <= 2 - 1/k");
    if (N_cut < 1) throw DomainError("dirichlet_partial_sum: N_cut >= 1 required");

    Complex value = escalated(ctx, [&](Prec pp) {
        auto sig = sigma_table(N_cut, k, pp);
        Complex acc(pp);
        Complex sp = s.at_prec(pp);
        for (std::uint32_t n = 1; n <= N_cut; ++n) {
            if (chi.log_at(n) < 0) continue;
            Real ln = log(Real((long)n, pp));
            Complex npow = cexp({-sp.re * ln, -sp.im * ln});
            acc += chi.value(n, pp) * sig[n] * npow;
        }
        return acc;
    });

    Real beta = Real(k - 1, p) / Real(k, p) - s.re;
    return {value, divisor_tail_bound(k, beta, N_cut, p)};
}

} // namespace sigmalab
