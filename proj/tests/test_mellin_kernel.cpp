#include <catch2/catch_amalgamated.hpp>

#include "sigmalab/mellin_kernel.hpp"
#include "test_helpers.hpp"

using namespace sigmalab;
using testutil::Lcg;

TEST_CASE("partial fraction weights") {
    CHECK(partial_fractions(1) == std::vector<Rat>{Rat(1)});
    CHECK(partial_fractions(2) == std::vector<Rat>{Rat(-1), Rat(1)});
    CHECK(partial_fractions(3) == std::vector<Rat>{Rat(1, 2), Rat(-1), Rat(1, 2)});

    // recombination: sum_u b_u prod_{r != u} (s - r) == 1 as a polynomial identity
    for (long nu : {2L, 5L, 9L}) {
        auto b = partial_fractions(nu);
        for (long s = nu + 1; s <= 2 * nu + 1; ++s) {
            Rat lhs = 0;
            for (long u = 1; u <= nu; ++u) {
                Rat prod = 1;
                for (long r = 1; r <= nu; ++r)
                    if (r != u) prod *= Rat(s - r);
                lhs += b[(size_t)u - 1] * prod;
            }
            REQUIRE(lhs == 1);
        }
    }
}

TEST_CASE("P matrix entries") {
    auto P32 = p_matrix(3, 2);
    CHECK(P32[0][0] == Rat(1, 3)); // P_{1,1} = 1/k
    CHECK(P32[1][0] == Rat(1, 3)); // P_{1,2} = 1/k
    CHECK(P32[1][1] == Rat(5, 9)); // (3*2-1)/3^2

    auto P21 = p_matrix(2, 2);
    CHECK(P21[0][1] == Rat(1, 4)); // (2*1-1)/2^2

    // P_{m,u} vanishes for m > ku via the zero factor
    CHECK(p_coefficient(2, 1, 3) == 0);
    CHECK(p_coefficient(3, 2, 7) == 0);
}

TEST_CASE("closed form worked example k=3 nu=2") {
    auto f = closed_form_polynomials(3, 2);
    std::vector<Rat> p_expect{Rat(120), Rat(360), Rat(540), Rat(486), Rat(243)};
    CHECK(f.p_poly == p_expect);
    CHECK(f.q_poly == std::vector<Rat>{Rat(120)});
}

TEST_CASE("leading terms and exact cancellation") {
    for (long k : {2L, 3L, 4L}) {
        for (long nu = 2; nu <= 24; ++nu) {
            auto f = closed_form_polynomials(k, nu);
            // leading coefficient of p is k^{k nu - 1}
            REQUIRE(f.p_poly.back() == rat_pow(Rat(k), k * nu - 1));
            // leading term of q is (-1)^nu Gamma(2k) k^{k(nu-2)} / (nu-2)!
            Rat qlead = Rat(factorial_int((unsigned long)(2 * k - 1))) *
                        rat_pow(Rat(k), k * (nu - 2)) /
                        Rat(factorial_int((unsigned long)(nu - 2)));
            if (nu % 2 != 0) qlead = -qlead;
            REQUIRE(f.q_poly.back() == qlead);
            // sum_u b_u P_{m,u} = 0 exactly for every m < nu
            for (long m = 1; m < nu; ++m) REQUIRE(f.w[(size_t)m - 1] == 0);
            // and the first surviving weight is 1/k
            REQUIRE(f.w[(size_t)nu - 1] == Rat(1, k));
        }
    }
}

TEST_CASE("kernel closed form at the worked point") {
    PrecisionContext ctx(128);
    Prec p = ctx.working_bits;
    auto f = closed_form_polynomials(3, 2);
    Complex I = kernel_eval_y(ctx, f, Real(1, p));
    // (1749 e^{-3} - 120) / 729, with 1749 = 3 * 583; the residue part is
    // subtracted on the Re s = 3/2 line.
    Real expect = (Real(1749, p) * exp(Real(-3, p)) - 120) / 729;
    CHECK(close_enough(I, Complex(expect), ctx.target_tol));
    CHECK(std::abs(I.re.to_double() - (-0.0451611)) < 1e-6);

    CHECK_THROWS_AS(kernel_eval(ctx, f, Complex{Real(-1, p), Real(p)}), DomainError);
    CHECK_THROWS_AS(kernel_eval(ctx, f, Complex(p)), DomainError);
}

TEST_CASE("kernel vs quadrature oracle") {
    PrecisionContext ctx(128);
    Prec p = ctx.working_bits;

    auto f32 = closed_form_polynomials(3, 2);
    auto o = kernel_quadrature_oracle(ctx, 3, 2, Real(1, p), Real(40, p));
    CHECK(o.tail_bound < Real(1e-25, p));
    Complex c = kernel_eval_y(ctx, f32, Real(1, p));
    CHECK(cabs(c - o.value) <= ctx.target_tol * 2 + o.tail_bound);

    // deep cancellation regime: small y at large nu
    auto f212 = closed_form_polynomials(2, 12);
    auto o2 = kernel_quadrature_oracle(ctx, 2, 12, Real(0.5, p), Real(60, p));
    Complex c2 = kernel_eval_y(ctx, f212, Real(0.5, p));
    CHECK(cabs(c2 - o2.value) <= ctx.target_tol * 2 + o2.tail_bound);

    // a couple of random triples (the acceptance suite runs thirty)
    Lcg rng(31337);
    for (int i = 0; i < 4; ++i) {
        long k = 2 + (long)(rng.next_u64() % 3);
        long nu = 2 + (long)(rng.next_u64() % 23);
        Real y(0.1 + 9.9 * rng.next01(), p);
        auto fk = closed_form_polynomials(k, nu);
        auto ok = kernel_quadrature_oracle(ctx, k, nu, y, Real(60, p));
        Complex ck = kernel_eval_y(ctx, fk, y);
        INFO("k=" << k << " nu=" << nu << " y=" << y.str(8));
        REQUIRE(cabs(ck - ok.value) <= ctx.target_tol * 2 + ok.tail_bound);
    }
}

TEST_CASE("boundary-adjacent argument matches the tilted oracle") {
    PrecisionContext ctx(128);
    Prec p = ctx.working_bits;
    long k = 3, nu = 2;
    auto f = closed_form_polynomials(k, nu);
    Real t = Real::pi(p) / 4;
    Complex X = polar(Real(1.2, p), t); // e^{i pi/4} 1.2
    Complex y = cpow(X, k);
    Complex c = kernel_eval(ctx, f, X);
    auto o = kernel_quadrature_oracle(ctx, k, nu, y, Real(80, p));
    CHECK(cabs(c - o.value) <= ctx.target_tol * 10 + o.tail_bound);
}

TEST_CASE("oracle tail bound behavior") {
    PrecisionContext ctx(128);
    Prec p = ctx.working_bits;
    // monotone decreasing in T
    Real t1 = kernel_tail_bound(3, 2, Complex(Real(1, p)), Real(30, p), p);
    Real t2 = kernel_tail_bound(3, 2, Complex(Real(1, p)), Real(50, p), p);
    Real t3 = kernel_tail_bound(3, 2, Complex(Real(1, p)), Real(80, p), p);
    CHECK(t2 < t1);
    CHECK(t3 < t2);
    // too-short contour refused
    CHECK_THROWS_AS(kernel_quadrature_oracle(ctx, 2, 2, Real(1, p), Real(3, p)), TailTooLarge);
}

TEST_CASE("kernel decay at infinity") {
    // (k^k y)^nu I(y) + q(y) -> 0 as y grows: only the exponential part is
    // left once the residue polynomial is added back.
    PrecisionContext ctx(128);
    Prec p = ctx.working_bits;
    long k = 2, nu = 5;
    auto f = closed_form_polynomials(k, nu);
    auto gap = [&](double yd) {
        Real y(yd, p);
        Complex I = kernel_eval_y(ctx, f, y);
        Real kky_nu = pow(pow(Real(k, p), k) * y, (long)nu);
        Real q = eval_poly(f.q_poly, y, p);
        return abs((I * kky_nu).re + q);
    };
    Real g3 = gap(1e3), g6 = gap(1e6);
    CHECK(g3 < Real(1e-10, p));
    CHECK(g6 < g3);
}

TEST_CASE("nu-th derivative of the continuous part") {
    // d^nu/dy^nu [ p(y^{1/k}) e^{-k y^{1/k}} ] = (-1)^nu k^{k nu - 1} e^{-k y^{1/k}},
    // checked by central finite differences with a step-size study.
    Prec p = 320;
    for (auto [k, nu] : {std::pair<long, long>{2, 2}, {3, 3}}) {
        auto f = closed_form_polynomials(k, nu);
        auto itilde = [&](const Real& y) {
            Real X = rootn(y, (unsigned long)k);
            return eval_poly(f.p_poly, X, p) * exp(-(X * k));
        };
        Real y0(2, p);
        Real target = pow(Real(k, p), k * nu - 1) * exp(-(rootn(y0, (unsigned long)k) * k));
        if (nu % 2 != 0) target = -target;

        auto fd_err = [&](double hd) {
            Real h(hd, p);
            Real acc(p);
            for (long i = 0; i <= nu; ++i) {
                Real pt = y0 + h * Real(nu, p) / 2 - h * i;
                Real coef = to_real(binomial_int((unsigned long)nu, (unsigned long)i), p);
                if (i % 2 != 0) coef = -coef;
                acc += coef * itilde(pt);
            }
            return abs(acc / pow(h, nu) - target);
        };
        Real e1 = fd_err(1.0 / 64), e2 = fd_err(1.0 / 128);
        INFO("k=" << k << " nu=" << nu << " err(h)=" << e1.str(4) << " err(h/2)=" << e2.str(4));
        CHECK(e1 < Real(1e-2, p));
        // second-order convergence: roughly quartering as h halves
        CHECK(e2 < e1 * Real(0.35, p));
    }
}

TEST_CASE("polynomial export format") {
    auto f = closed_form_polynomials(3, 2);
    std::string text = export_polynomials(f);
    CHECK(text.find("kernel k 3 nu 2") == 0);
    CHECK(text.find("p degree 4\n243/1\n486/1\n540/1\n360/1\n120/1\n") != std::string::npos);
    CHECK(text.find("q degree 0\n120/1\n") != std::string::npos);
}
