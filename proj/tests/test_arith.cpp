#include <catch2/catch_amalgamated.hpp>

#include <numeric>

#include "sigmalab/arith.hpp"
#include "test_helpers.hpp"

using namespace sigmalab;
using testutil::Lcg;

TEST_CASE("sigma_k base cases") {
    PrecisionContext ctx(128);
    Prec p = ctx.working_bits;

    CHECK(sigma_k(ctx, 1, 2) == 1);
    CHECK(sigma_k(ctx, 1, 5) == 1);

    // sigma_k(p) = 1 + p^{1/k} + ... + p^{(k-1)/k}
    for (long k : {2L, 3L, 4L}) {
        Real expect(p);
        for (long i = 0; i < k; ++i) expect += pow(rootn(Real(7L, p), (unsigned long)k), i);
        CHECK(close_enough(sigma_k(ctx, 7, k), expect, ctx.target_tol));
    }

    // sigma_2(6) = (1+sqrt2)(1+sqrt3) = 1+sqrt2+sqrt3+sqrt6
    Real v = sigma_k(ctx, 6, 2);
    Real expect = Real(1L, p) + sqrt(Real(2L, p)) + sqrt(Real(3L, p)) + sqrt(Real(6L, p));
    CHECK(close_enough(v, expect, ctx.target_tol));
    CHECK(std::abs(v.to_double() - 6.5957541) < 1e-6);

    CHECK_THROWS_AS(sigma_k(ctx, 0, 2), DomainError);
    CHECK_THROWS_AS(sigma_k(ctx, 5, 1), DomainError);
}

TEST_CASE("a_coeff base cases") {
    PrecisionContext ctx(128);
    Prec p = ctx.working_bits;

    CHECK(a_coeff(ctx, 1, 3) == 1);

    // a_4 (k=2): d_1 in {1,2,4} -> 1 + 2^{-1/2} + 4^{-1/2}
    Real v = a_coeff(ctx, 4, 2);
    Real expect = Real(1L, p) + Real(1L, p) / sqrt(Real(2L, p)) + Real(0.5, p);
    CHECK(close_enough(v, expect, ctx.target_tol));
    CHECK(std::abs(v.to_double() - 2.2071068) < 1e-6);

    // a_p (k=3): tuples (1,1),(p,1),(1,p) -> 1 + p^{-1/3} + p^{-2/3}
    Real w = a_coeff(ctx, 11, 3);
    Real r = rootn(Real(11L, p), 3);
    Real expect3 = Real(1L, p) + Real(1L, p) / r + Real(1L, p) / (r * r);
    CHECK(close_enough(w, expect3, ctx.target_tol));
    CHECK(close_enough(w, testutil::brute_a_coeff(11, 3, p), ctx.target_tol));
}

TEST_CASE("factored evaluation equals brute tuple enumeration") {
    PrecisionContext ctx(128);
    Prec p = ctx.working_bits;
    for (long k : {2L, 3L, 4L}) {
        for (std::uint64_t n = 1; n <= 500; ++n) {
            Real fast = sigma_k(ctx, n, k);
            Real brute = testutil::brute_sigma_k(n, k, p);
            REQUIRE(close_enough(fast, brute, ctx.target_tol));
            Real fast_a = a_coeff(ctx, n, k);
            Real brute_a = testutil::brute_a_coeff(n, k, p);
            REQUIRE(close_enough(fast_a, brute_a, ctx.target_tol));
        }
    }
}

TEST_CASE("multiplicativity on random coprime pairs") {
    PrecisionContext ctx(128);
    Lcg rng(424242);
    int done = 0;
    while (done < 200) {
        std::uint64_t m = 2 + rng.next_u64() % 9998;
        std::uint64_t n = 2 + rng.next_u64() % 9998;
        if (std::gcd(m, n) != 1) continue;
        for (long k : {2L, 3L}) {
            Real lhs = sigma_k(ctx, m * n, k);
            Real rhs = sigma_k(ctx, m, k) * sigma_k(ctx, n, k);
            REQUIRE(abs(lhs - rhs) <= ctx.target_tol * lhs);
            Real la = a_coeff(ctx, m * n, k);
            Real ra = a_coeff(ctx, m, k) * a_coeff(ctx, n, k);
            REQUIRE(abs(la - ra) <= ctx.target_tol * la);
        }
        ++done;
    }
}

TEST_CASE("domination and growth bound") {
    PrecisionContext ctx(96);
    Prec p = ctx.working_bits;
    for (long k : {2L, 4L}) {
        auto sig = sigma_table(10000, k, p);
        auto ac = a_table(10000, k, p);
        Real max_ratio(p);
        Real two_k = pow(Real(2L, p), k);
        for (std::uint32_t n = 1; n <= 10000; ++n) {
            REQUIRE(sig[n] >= ac[n]);
            REQUIRE(ac[n] >= 1);
            Real ratio = ac[n] / (two_k * pow(Real((long)n, p), 3L));
            if (ratio > max_ratio) max_ratio = ratio;
        }
        INFO("max a_n / (2^k n^3) for k=" << k << ": " << max_ratio.str(6));
        CHECK(max_ratio < 1);
    }
}

TEST_CASE("bulk tables match single evaluation") {
    PrecisionContext ctx(128);
    auto sig = sigma_table(300, 3, ctx.working_bits);
    auto ac = a_table(300, 3, ctx.working_bits);
    for (std::uint32_t n : {1u, 2u, 16u, 97u, 128u, 243u, 300u}) {
        CHECK(close_enough(sig[n], sigma_k(ctx, n, 3), ctx.target_tol));
        CHECK(close_enough(ac[n], a_coeff(ctx, n, 3), ctx.target_tol));
    }
}

TEST_CASE("dirichlet partial sum trivial case and divergence guard") {
    PrecisionContext ctx(128);
    Prec p = ctx.working_bits;
    auto chi = quadratic_character(5);
    auto r = dirichlet_partial_sum(ctx, 2, chi, Complex(3L, p), 1);
    CHECK(close_enough(r.value, Complex(1L, p), ctx.target_tol));
    CHECK(r.tail_bound > 0);

    CHECK_THROWS_AS(dirichlet_partial_sum(ctx, 2, chi, Complex{Real(1.5, p), Real(p)}, 100),
                    DivergenceError);
}

TEST_CASE("divisor tail bound is a true upper bound") {
    // check sum_{n>N} d_k(n) n^beta (computed exactly over a long range)
    // against the closed-form bound
    Prec p = 128;
    long k = 3;
    std::uint32_t N = 200, far = 200000;
    Real beta(-7.0 / 3.0, p);
    // d_3 via divisor-count convolution
    std::vector<std::uint32_t> d3(far + 1, 0);
    {
        std::vector<std::uint32_t> d1(far + 1, 0), d2(far + 1, 0);
        for (std::uint32_t i = 1; i <= far; ++i)
            for (std::uint32_t j = i; j <= far; j += i) d1[j] += 1;
        for (std::uint32_t i = 1; i <= far; ++i)
            for (std::uint32_t j = i; j <= far; j += i) d2[j] += d1[j / i];
        d3.swap(d2);
    }
    Real tail(p);
    for (std::uint32_t n = N + 1; n <= far; ++n)
        tail += Real((long)d3[n], p) * pow(Real((long)n, p), beta);
    Real bound = divisor_tail_bound(k, beta, N, p);
    CHECK(tail < bound);
}
