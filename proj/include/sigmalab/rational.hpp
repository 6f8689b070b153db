#pragma once

// Exact integer/rational arithmetic (GMP via Boost.Multiprecision) plus the
// conversions to/from Real. Every Real is a dyadic rational, so the Real->Rat
// direction is exact.

#include <boost/multiprecision/gmp.hpp>

#include <vector>

#include "sigmalab/real.hpp"

namespace sigmalab {

using Int = boost::multiprecision::mpz_int;
using Rat = boost::multiprecision::mpq_rational;

inline Int factorial_int(unsigned long n) {
    Int r = 1;
    for (unsigned long i = 2; i <= n; ++i) r *= i;
    return r;
}

inline Int binomial_int(unsigned long n, unsigned long k) {
    if (k > n) return 0;
    if (k > n - k) k = n - k;
    Int r = 1;
    for (unsigned long i = 0; i < k; ++i) {
        r *= (long)(n - i);
        r /= (long)(i + 1);
    }
    return r;
}

inline Rat rat_pow(const Rat& a, long e) {
    Rat r = 1;
    Rat base = a;
    long n = e < 0 ? -e : e;
    while (n) {
        if (n & 1) r *= base;
        base *= base;
        n >>= 1;
    }
    if (e < 0) r = Rat(1) / r;
    return r;
}

inline Real to_real(const Rat& q, Prec prec) {
    Real r(prec);
    mpfr_set_q(r.raw(), q.backend().data(), MPFR_RNDN);
    return r;
}

inline Real to_real(const Int& z, Prec prec) {
    Real r(prec);
    mpfr_set_z(r.raw(), z.backend().data(), MPFR_RNDN);
    return r;
}

// Exact: every finite Real is n * 2^e.
inline Rat to_rational(const Real& x) {
    Rat q;
    mpfr_get_q(q.backend().data(), x.raw());
    return q;
}

// Horner evaluation of a polynomial with exact coefficients (degree-ascending).
inline Real eval_poly(const std::vector<Rat>& coeff_ascending, const Real& x, Prec prec) {
    Real acc(prec);
    for (auto it = coeff_ascending.rbegin(); it != coeff_ascending.rend(); ++it)
        acc = acc * x + to_real(*it, prec);
    return acc;
}

inline Complex eval_poly(const std::vector<Rat>& coeff_ascending, const Complex& x, Prec prec) {
    Complex acc(prec);
    for (auto it = coeff_ascending.rbegin(); it != coeff_ascending.rend(); ++it)
        acc = acc * x + to_real(*it, prec);
    return acc;
}

} // namespace sigmalab
