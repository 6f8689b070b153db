#include <catch2/catch_amalgamated.hpp>

#include "sigmalab/gamma.hpp"
#include "sigmalab/precision.hpp"
#include "test_helpers.hpp"

using namespace sigmalab;
using testutil::Lcg;

namespace {
Real tol_of(const PrecisionContext& ctx) { return ctx.target_tol; }
} // namespace

TEST_CASE("PrecisionContext invariants") {
    CHECK_THROWS_AS(PrecisionContext(32), DomainError);
    CHECK_THROWS_AS(PrecisionContext(128, Real::pow2(-120)), DomainError);
    PrecisionContext ctx(128);
    CHECK(ctx.working_bits == 128);
    CHECK(ctx.target_tol > 0);
}

TEST_CASE("Gamma special values") {
    PrecisionContext ctx(128);
    Prec p = ctx.working_bits;

    // Gamma(1) = 1
    Complex g1 = eval_gamma(ctx, Complex(1L, p));
    CHECK(close_enough(g1, Complex(1L, p), tol_of(ctx)));

    // Gamma(6) = 120 (the constant arising in the nu=2, k=3 kernel residue)
    Complex g6 = eval_gamma(ctx, Complex(6L, p));
    CHECK(close_enough(g6, Complex(120L, p), tol_of(ctx)));

    // Gamma(1/2) = sqrt(pi)
    Complex gh = eval_gamma(ctx, Complex(Real(0.5, p)));
    CHECK(close_enough(gh, Complex(sqrt(Real::pi(p))), tol_of(ctx)));

    // Pole detection
    CHECK_THROWS_AS(eval_gamma(ctx, Complex(0L, p)), PoleError);
    CHECK_THROWS_AS(eval_gamma(ctx, Complex(-3L, p)), PoleError);
}

TEST_CASE("Gamma functional equation on a random grid") {
    PrecisionContext ctx(128);
    Prec p = ctx.working_bits;
    Lcg rng(20240601);
    int checked = 0;
    for (int i = 0; i < 100; ++i) {
        double re = rng.next() * 20.0;
        double im = rng.next() * 20.0;
        Complex s{Real(re, p), Real(im, p)};
        if (detail::is_nonpositive_integer(s) || detail::is_nonpositive_integer(s + 1)) continue;
        // near-pole real arguments are excluded: the relative contract holds away from poles
        if (s.im.is_zero() && s.re < 0) continue;
        Complex lhs = eval_gamma(ctx, s + 1);
        Complex rhs = s * eval_gamma(ctx, s);
        CHECK(cabs(lhs - rhs) <= tol_of(ctx) * cabs(lhs));
        ++checked;
    }
    CHECK(checked >= 80);
}

TEST_CASE("Gamma conjugation symmetry") {
    PrecisionContext ctx(128);
    Prec p = ctx.working_bits;
    Lcg rng(7);
    for (int i = 0; i < 20; ++i) {
        Complex s{Real(1.0 + 5.0 * (rng.next() + 1.0), p), Real(10.0 * rng.next(), p)};
        Complex a = eval_gamma(ctx, conj(s));
        Complex b = conj(eval_gamma(ctx, s));
        CHECK(close_enough(a, b, tol_of(ctx)));
    }
}

TEST_CASE("Gauss multiplication residual") {
    PrecisionContext ctx(128);
    Prec p = ctx.working_bits;

    // k=1 is an identity
    Real r1 = gauss_multiplication_residual(ctx, Complex(2L, p), 1);
    CHECK(r1 <= tol_of(ctx));

    // (s=1, k=2): Gamma(1)Gamma(3/2) vs (2pi)^(1/2) 2^(-3/2) Gamma(2)
    Real r2 = gauss_multiplication_residual(ctx, Complex(1L, p), 2);
    CHECK(r2 <= tol_of(ctx));

    // complex argument
    Real r3 = gauss_multiplication_residual(ctx, Complex{Real(1.5, p), Real(5.0, p)}, 3);
    CHECK(r3 <= tol_of(ctx));
}

TEST_CASE("Recomputation stability under doubled working precision") {
    PrecisionContext lo(128), hi(256);
    Prec p = 128;
    Lcg rng(99);
    for (int i = 0; i < 10; ++i) {
        Complex s{Real(0.5 + 8.0 * (rng.next() + 1.0), p), Real(8.0 * rng.next(), p)};
        Complex a = eval_gamma(lo, s);
        Complex b = eval_gamma(hi, s);
        CHECK(close_enough(a, b, lo.target_tol));
    }
}

TEST_CASE("Gamma modulus bound dominates |Gamma| and decays") {
    Prec p = 192;
    PrecisionContext ctx(p);
    for (double t : {1.0, 5.0, 20.0, 60.0}) {
        Real sigma(3.0, p);
        Real bound = gamma_mod_bound(sigma, Real(t, p), p);
        Complex g = eval_gamma(ctx, Complex{sigma, Real(t, p)});
        CHECK(cabs(g) <= bound);
    }
    CHECK(gamma_mod_bound(Real(3.0, p), Real(50.0, p), p) <
          gamma_mod_bound(Real(3.0, p), Real(10.0, p), p));
}
