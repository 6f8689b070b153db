#include <catch2/catch_amalgamated.hpp>

#include "sigmalab/pnu.hpp"
#include "test_helpers.hpp"

using namespace sigmalab;
using testutil::Lcg;

namespace {
Complex sign_product(long k, int parity, const Complex& s, Prec p) {
    Real pi = Real::pi(p);
    Complex prod(1L, p);
    for (long m = 0; m < k; ++m) {
        Complex w = (s - Complex(Real(m, p) / Real(k, p))) * (pi / 2);
        Complex e1 = cexp({-w.im, w.re});
        Complex e2 = cexp({w.im, -w.re});
        prod *= (e1 - e2 * (long)parity);
    }
    return prod;
}
} // namespace

TEST_CASE("phase terms: extremal coefficients") {
    Prec p = 128;
    Real tol = Real::pow2(-100);
    for (long k = 2; k <= 6; ++k) {
        for (int parity : {1, -1}) {
            auto ph = phase_terms(k, parity, p);
            REQUIRE(ph.size() == (size_t)(k + 1));
            CHECK(ph[0].omega == Rat(1));
            CHECK(ph[(size_t)k].omega == Rat(-1));
            Complex c0 = cis(-Real::pi(p) * (k - 1) / 4);
            CHECK(cabs(ph[0].C - c0) <= tol);
            // C_k = (-chi(-1))^k e^{i pi (k-1)/4}; for odd k this equals the
            // printed -chi(-1)^k form, for even k the sign is positive.
            Complex ck = cis(Real::pi(p) * (k - 1) / 4);
            if (parity > 0 && k % 2 != 0) ck = -ck;
            CHECK(cabs(ph[(size_t)k].C - ck) <= tol);
            // interior bounds
            for (long r = 1; r < k; ++r) {
                CHECK(abs(ph[(size_t)r].omega) <= Rat(k - 2, k));
                CHECK(cabs(ph[(size_t)r].C) <= Real(1L << k, p) + tol);
            }
        }
    }
}

TEST_CASE("phase expansion completeness") {
    Prec p = 160;
    Real pi = Real::pi(p);
    Lcg rng(2718);
    for (long k = 2; k <= 6; ++k) {
        for (int parity : {1, -1}) {
            auto ph = phase_terms(k, parity, p);
            for (int i = 0; i < 20; ++i) {
                Complex s{Real(5.0 * rng.next(), p), Real(5.0 * rng.next(), p)};
                Complex lhs(p);
                for (auto& t : ph) {
                    Complex expo = s * (pi * to_real(t.omega, p) * k / 2);
                    lhs += t.C * cexp({-expo.im, expo.re});
                }
                Complex rhs = sign_product(k, parity, s, p);
                REQUIRE(cabs(lhs - rhs) <= Real::pow2(-120) * max(Real(1, p), cabs(rhs)));
            }
        }
    }
    // k=2 even parity: exactly three grouped terms
    auto ph2 = phase_terms(2, 1, p);
    CHECK(ph2.size() == 3);
}

TEST_CASE("pnu_direct base cases") {
    PrecisionContext ctx(128);
    Prec p = ctx.working_bits;
    PnuParams pr;
    pr.k = 2;
    pr.nu = 2;
    pr.chi = quadratic_character(3);

    CHECK(cabs(pnu_direct(ctx, pr, Real(0.5, p))).is_zero());

    // x=2: sigma_2(1) chi(1) (2-1)^1 + sigma_2(2) chi(2) * 0 = 1
    Complex v = pnu_direct(ctx, pr, Real(2, p));
    CHECK(close_enough(v, Complex(1L, p), ctx.target_tol));

    // continuity across an integer for nu >= 2
    pr.nu = 3;
    Real h1(1e-6, p), h2(1e-9, p);
    Real d1 = cabs(pnu_direct(ctx, pr, Real(10, p) + h1) - pnu_direct(ctx, pr, Real(10, p) - h1));
    Real d2 = cabs(pnu_direct(ctx, pr, Real(10, p) + h2) - pnu_direct(ctx, pr, Real(10, p) - h2));
    CHECK(d1 < Real(1e-3, p));
    CHECK(d2 < d1 / 100);
}

TEST_CASE("three-way agreement at x=30.5, k=2, nu=12, ell=5") {
    PrecisionContext ctx(224);
    Prec p = ctx.working_bits;
    PnuParams pr;
    pr.k = 2;
    pr.nu = 12;
    pr.chi = quadratic_character(5);

    Real x(30.5, p);
    Complex direct = pnu_direct(ctx, pr, x);
    Real scale = cabs(direct);

    auto oracle = mellin_identity_oracle(ctx, pr, x, scale * Real(1e-11, p));
    INFO("direct = " << direct.str(20) << "  oracle = " << oracle.value.str(20));
    CHECK(cabs(direct - oracle.value) <= scale * Real(1e-10, p));

    pr.abs_tol = scale * Real(1e-9, p);
    auto an = pnu_analytic(ctx, pr, x);
    INFO("analytic = " << an.value.str(20) << "  X = " << an.X_used);
    CHECK(cabs(direct - an.value) <= scale * Real(1e-8, p));
}

TEST_CASE("analytic path at k=3") {
    PrecisionContext ctx(224);
    Prec p = ctx.working_bits;
    PnuParams pr;
    pr.k = 3;
    pr.nu = 18;
    pr.chi = quadratic_character(3);

    Real x(20.5, p);
    Complex direct = pnu_direct(ctx, pr, x);
    Real scale = max(Real(1, p), cabs(direct));
    pr.abs_tol = scale * Real(1e-9, p);
    auto an = pnu_analytic(ctx, pr, x);
    INFO("direct = " << direct.str(18) << " analytic = " << an.value.str(18));
    CHECK(cabs(direct - an.value) <= scale * Real(1e-8, p));
}

TEST_CASE("zero target below x=1: nontrivial cancellation") {
    PrecisionContext ctx(224);
    Prec p = ctx.working_bits;
    PnuParams pr;
    pr.k = 2;
    pr.nu = 12;
    pr.chi = quadratic_character(7);
    pr.abs_tol = Real(1e-10, p);
    auto an = pnu_analytic(ctx, pr, Real(0.5, p));
    // P_nu(0.5) = 0: main term and series must cancel to the budget
    CHECK(cabs(an.value) <= Real(1e-9, p));
}

TEST_CASE("mellin oracle vanishes as x -> 0+") {
    PrecisionContext ctx(160);
    Prec p = ctx.working_bits;
    PnuParams pr;
    pr.k = 2;
    pr.nu = 12;
    pr.chi = quadratic_character(5);
    auto o = mellin_identity_oracle(ctx, pr, Real(0.1, p), Real(1e-12, p));
    CHECK(cabs(o.value) <= Real(1e-10, p));
}

TEST_CASE("tail bound soundness under X_trunc refinement") {
    PrecisionContext ctx(192);
    Prec p = ctx.working_bits;
    PnuParams pr;
    pr.k = 2;
    pr.nu = 12;
    pr.chi = quadratic_character(7);
    Real x(30.5, p);

    pr.X_trunc = 96;
    pr.abs_tol = Real(1e30, p); // budget large enough to accept X_trunc = 96
    auto a1 = pnu_analytic(ctx, pr, x);
    pr.X_trunc = 96 * 4;
    auto a2 = pnu_analytic(ctx, pr, x);
    CHECK(cabs(a1.value - a2.value) <= a1.tail_bound);
}

TEST_CASE("truncation guard") {
    PrecisionContext ctx(192);
    Prec p = ctx.working_bits;
    PnuParams pr;
    pr.k = 2;
    pr.nu = 12;
    pr.chi = quadratic_character(7);
    pr.X_trunc = 4;
    pr.abs_tol = Real::pow2(-160);
    CHECK_THROWS_AS(pnu_analytic(ctx, pr, Real(30.5, p)), TruncationError);

    PnuParams bad = pr;
    bad.nu = 6;
    bad.X_trunc = 0;
    CHECK_THROWS_AS(pnu_analytic(ctx, bad, Real(30.5, p)), DomainError);
}

TEST_CASE("prefactor calibration is the identity") {
    PrecisionContext ctx(224);
    Prec p = ctx.working_bits;
    PnuParams pr;
    pr.k = 2;
    pr.nu = 12;
    pr.chi = quadratic_character(7);
    auto rep = calibrate_prefactor(ctx, pr, {Real(30.5, p), Real(40.5, p)}, Real(1e-8, p));
    REQUIRE(rep.ratios.size() == 2);
    CHECK(rep.constant);
    for (auto& [x, r] : rep.ratios) {
        INFO("x = " << x.str(6) << " ratio = " << r.str(16));
        CHECK(cabs(r - Complex(1L, p)) <= Real(1e-7, p));
    }
}

TEST_CASE("addend breakdown sums to the value") {
    PrecisionContext ctx(192);
    Prec p = ctx.working_bits;
    PnuParams pr;
    pr.k = 2;
    pr.nu = 12;
    pr.chi = quadratic_character(5);
    Real x(20.5, p);
    Complex direct = pnu_direct(ctx, pr, x);
    pr.abs_tol = cabs(direct) * Real(1e-9, p);
    auto an = pnu_analytic(ctx, pr, x, /*want_addends=*/true);
    REQUIRE(an.addends.size() > 10);
    Complex total(p);
    for (auto& ad : an.addends) total += ad.value;
    CHECK(cabs(total - an.value) <= cabs(an.value) * Real(1e-20, p) + an.tail_bound);
}
