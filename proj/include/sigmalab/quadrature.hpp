#pragma once

// Gauss-Legendre rules at arbitrary precision (Newton refinement of the
// double-precision Chebyshev initial guesses) and a panel integrator for the
// vertical-line contour integrals.

#include <cmath>
#include <map>
#include <mutex>
#include <vector>

#include "sigmalab/complex.hpp"

namespace sigmalab {

struct GLRule {
    std::vector<Real> nodes;   // on (-1, 1)
    std::vector<Real> weights;
};

namespace detail {
// P_n(x) and P_n'(x) by the three-term recurrence.
inline void legendre_pd(int n, const Real& x, Real& pn, Real& dpn) {
    Prec p = x.prec();
    Real p0(1L, p), p1 = x;
    for (int j = 2; j <= n; ++j) {
        Real p2 = (x * p1 * (2 * j - 1) - p0 * (j - 1)) / (long)j;
        p0 = p1;
        p1 = p2;
    }
    pn = p1;
    dpn = (x * p1 - p0) * (long)n / (x * x - 1);
}
} // namespace detail

inline const GLRule& gauss_legendre(int n, Prec p) {
    static std::map<std::pair<int, Prec>, GLRule> cache;
    static std::mutex mu;
    std::scoped_lock lock(mu);
    auto key = std::make_pair(n, p);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;

    GLRule rule;
    rule.nodes.reserve(n);
    rule.weights.reserve(n);
    for (int i = 1; i <= n; ++i) {
        double guess = std::cos(M_PI * (i - 0.25) / (n + 0.5));
        Real x(guess, p);
        Real pn(p), dpn(p);
        int iters = 3 + (int)(std::log2((double)p / 40.0 + 1.0)) + 2;
        for (int it2 = 0; it2 < iters; ++it2) {
            detail::legendre_pd(n, x, pn, dpn);
            x = x - pn / dpn;
        }
        detail::legendre_pd(n, x, pn, dpn);
        rule.nodes.push_back(x);
        rule.weights.push_back(Real(2L, p) / ((Real(1L, p) - x * x) * dpn * dpn));
    }
    return cache.emplace(key, std::move(rule)).first->second;
}

// integral of f over [a, b] split into `panels` equal panels, GL-n per panel.
template <class F>
Complex integrate_panels(F&& f, const Real& a, const Real& b, long panels, int n, Prec p) {
    const GLRule& rule = gauss_legendre(n, p);
    Complex acc(p);
    Real h = (b - a) / panels;
    Real half = h / 2;
    for (long k = 0; k < panels; ++k) {
        Real mid = a + h * k + half;
        Complex panel(p);
        for (int i = 0; i < n; ++i)
            panel += f(mid + half * rule.nodes[i]) * rule.weights[i];
        acc += panel * half;
    }
    return acc;
}

} // namespace sigmalab
