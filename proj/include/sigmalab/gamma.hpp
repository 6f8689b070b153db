#pragma once

// Complex Gamma at arbitrary precision: Stirling's asymptotic series with
// argument shifting (recurrence) into the sector Re w >= max(R, |Im w|), and
// the reflection formula for Re z < 1/2. Bernoulli numbers are computed
// exactly and cached. The public eval_gamma applies verify-by-escalation.

#include <mutex>
#include <vector>

#include "sigmalab/precision.hpp"
#include "sigmalab/rational.hpp"

namespace sigmalab {

// B_0, B_1, B_2, ... via the defining recurrence sum_{j<=m} C(m+1,j) B_j = 0.
inline const Rat& bernoulli(unsigned long n) {
    static std::vector<Rat> cache{Rat(1), Rat(-1, 2)};
    static std::mutex mu;
    std::scoped_lock lock(mu);
    while (cache.size() <= n) {
        unsigned long m = cache.size();
        if (m % 2 == 1) {
            cache.emplace_back(0);
            continue;
        }
        Rat acc = 0;
        for (unsigned long j = 0; j < m; ++j)
            acc += Rat(binomial_int(m + 1, j)) * cache[j];
        cache.emplace_back(-acc / Rat((long)(m + 1)));
    }
    return cache[n];
}

namespace detail {

inline bool is_nonpositive_integer(const Complex& z) {
    return z.im.is_zero() && z.re.is_integer() && z.re <= 0;
}

// ln Gamma(w) by Stirling for Re w >= max(R, |Im w|); caller guarantees the sector.
inline Complex log_gamma_stirling(const Complex& w, Prec p) {
    Complex lw = clog(w);
    Complex acc = (w - Real(0.5, p)) * lw - w;
    Real half_ln_2pi = log(Real::pi(p) * 2) / 2;
    acc = acc + half_ln_2pi;

    Complex w2 = w * w;
    Complex wpow = w; // w^{2j-1}
    Real thresh = Real::pow2(-(long)p - 16);
    Real prev_mag = Real::nan();
    for (unsigned long j = 1; j < 4 * (unsigned long)p; ++j) {
        Real bj = to_real(bernoulli(2 * j), p);
        Complex term = Complex(bj / (long)(2 * j * (2 * j - 1))) / wpow;
        Real mag = cabs(term);
        // Asymptotic series: stop at the smallest term.
        if (!prev_mag.is_nan() && mag > prev_mag) break;
        acc += term;
        if (mag < thresh) break;
        prev_mag = mag;
        wpow *= w2;
    }
    return acc;
}

inline Complex gamma_core(const Complex& z0, Prec p) {
    if (is_nonpositive_integer(z0))
        throw PoleError("Gamma pole at " + z0.re.str(8));
    Complex z = {z0.re.at_prec(p), z0.im.at_prec(p)};

    // Reflection into Re z >= 1/2.
    if (z.re < Real(0.5, p)) {
        Real pi = Real::pi(p);
        Complex s = csin({pi * z.re, pi * z.im});
        Complex g = gamma_core({Real(1L, p) - z.re, -z.im}, p);
        return Complex(pi) / (s * g);
    }

    // Shift until Stirling's sector is reached. R ~ 0.16 p makes the smallest
    // series term fall below 2^-p.
    long R = (long)(0.16 * (double)p) + 10;
    Real target = max(Real(R, p), abs(z.im));
    long shift = 0;
    if (z.re < target) shift = (target - z.re).to_long() + 1;

    Complex w = z + shift;
    Complex lg = log_gamma_stirling(w, p);
    Complex g = cexp(lg);
    if (shift > 0) {
        Complex prod = z;
        for (long j = 1; j < shift; ++j) prod *= (z + j);
        g = g / prod;
    }
    return g;
}

} // namespace detail

// Gamma(s) to ctx.target_tol (relative, away from the zeros of 1/Gamma).
inline Complex eval_gamma(const PrecisionContext& ctx, const Complex& s) {
    if (detail::is_nonpositive_integer(s))
        throw PoleError("Gamma pole at " + s.re.str(8));
    return escalated(ctx, [&](Prec p) { return detail::gamma_core(s, p); });
}

inline Real eval_gamma(const PrecisionContext& ctx, const Real& s) {
    if (s.is_integer() && s <= 0) throw PoleError("Gamma pole at " + s.str(8));
    return escalated(ctx, [&](Prec p) { return gamma_mpfr(s.at_prec(p)); });
}

// |Gamma(sigma + it)| <= Gamma(sigma) exp(-t atan(t/sigma) + (sigma/2) ln(1+t^2/sigma^2)),
// from the product formula |Gamma(sigma+it)|^2 = Gamma(sigma)^2 prod (1+t^2/(sigma+n)^2)^{-1}
// with the sum under the exponent bounded below by its integral. Rigorous for
// sigma > 0, t >= 0; decays like e^{-pi t / 2} for large t.
inline Real gamma_mod_bound(const Real& sigma, const Real& t, Prec p) {
    Real s = sigma.at_prec(p), tt = abs(t).at_prec(p);
    Real ratio = tt / s;
    Real expo = -tt * atan(ratio) + s / 2 * log(Real(1L, p) + ratio * ratio);
    return gamma_mpfr(s) * exp(expo);
}

// Two-sided residual of Gauss' multiplication formula:
// Gamma(s) Gamma(s+1/k) ... Gamma(s+(k-1)/k) = (2pi)^{(k-1)/2} k^{1/2-ks} Gamma(ks).
inline Real gauss_multiplication_residual(const PrecisionContext& ctx, const Complex& s, long k) {
    if (k < 1) throw DomainError("gauss_multiplication_residual: k must be >= 1");
    return escalated(ctx, [&](Prec p) {
        Complex z = {s.re.at_prec(p), s.im.at_prec(p)};
        Complex lhs(1L, p);
        for (long m = 0; m < k; ++m)
            lhs *= detail::gamma_core(z + Complex(Real(m, p) / Real(k, p)), p);
        Real two_pi = Real::pi(p) * 2;
        Complex ks = z * Real(k, p);
        Complex rhs = Complex(pow(two_pi, Real(k - 1, p) / 2)) *
                      cpow(Real(k, p), Complex(Real(0.5, p)) - ks) *
                      detail::gamma_core(ks, p);
        return cabs(lhs - rhs);
    });
}

} // namespace sigmalab
