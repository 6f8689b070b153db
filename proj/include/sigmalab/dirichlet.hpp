#pragma once

// Dirichlet characters as exact value tables (a residue's value is a power of
// a fixed root of unity, stored as the power index), Gauss sums by direct
// summation, and L(s, chi) everywhere in the plane through the l-term
// decomposition into Hurwitz-type series continued by Euler-Maclaurin.

#include <cstdint>
#include <string>
#include <vector>

#include "sigmalab/gamma.hpp"
#include "sigmalab/precision.hpp"
#include "sigmalab/primes.hpp"

namespace sigmalab {

struct DirichletCharacter {
    long modulus = 0;          // l
    long order = 1;            // values are order-th roots of unity
    std::vector<long> logs;    // residue -> power index in [0, order), -1 off units
    int parity = 1;            // chi(-1)
    bool primitive = false;
    std::string label;

    bool is_real() const { return order <= 2; }

    long log_at(std::uint64_t n) const { return logs[n % (std::uint64_t)modulus]; }

    // chi(n) for real characters, in {-1, 0, +1}.
    int real_value(std::uint64_t n) const {
        long lg = log_at(n);
        if (lg < 0) return 0;
        return lg == 0 ? 1 : -1;
    }

    Complex value(std::uint64_t n, Prec p) const {
        long lg = log_at(n);
        if (lg < 0) return Complex(p);
        if (order <= 2) return Complex(Real(lg == 0 ? 1L : -1L, p));
        return cis(Real::pi(p) * 2 * lg / (long)order);
    }

    DirichletCharacter conjugate() const {
        DirichletCharacter c = *this;
        for (auto& lg : c.logs)
            if (lg > 0) lg = order - lg;
        c.label = label + "~";
        return c;
    }
};

// Legendre-symbol character mod an odd prime l.
inline DirichletCharacter quadratic_character(long ell) {
    if (ell < 3 || !is_prime_u64((std::uint64_t)ell) || ell % 2 == 0)
        throw NotPrime("quadratic_character: modulus " + std::to_string(ell) + " is not an odd prime");
    DirichletCharacter chi;
    chi.modulus = ell;
    chi.order = 2;
    chi.logs.assign(ell, 1); // non-residues
    chi.logs[0] = -1;
    for (long a = 1; a < ell; ++a) chi.logs[(a * a) % ell] = 0;
    chi.parity = ((ell - 1) / 2) % 2 == 0 ? 1 : -1;
    chi.primitive = true;
    chi.label = "quadratic mod " + std::to_string(ell);
    return chi;
}

// The odd primitive character mod 4 (chi(1)=1, chi(3)=-1).
inline DirichletCharacter mod4_odd_character() {
    DirichletCharacter chi;
    chi.modulus = 4;
    chi.order = 2;
    chi.logs = {-1, 0, -1, 1};
    chi.parity = -1;
    chi.primitive = true;
    chi.label = "odd mod 4";
    return chi;
}

inline long primitive_root(long ell) {
    auto fac = factorize((std::uint64_t)(ell - 1));
    for (long g = 2; g < ell; ++g) {
        bool ok = true;
        for (auto& pp : fac) {
            if (detail::powmod_u64((std::uint64_t)g, (std::uint64_t)(ell - 1) / pp.p, (std::uint64_t)ell) == 1) {
                ok = false;
                break;
            }
        }
        if (ok) return g;
    }
    throw NotPrime("primitive_root: no generator found; modulus not prime?");
}

// chi of order d mod a prime l, defined by chi(g^j) = e^{2 pi i j / d}.
// Primitive for every d > 1 dividing l-1.
inline DirichletCharacter power_character(long ell, long d) {
    if (ell < 3 || !is_prime_u64((std::uint64_t)ell))
        throw NotPrime("power_character: modulus must be an odd prime");
    if (d < 2 || (ell - 1) % d != 0)
        throw DomainError("power_character: order must divide l-1");
    long g = primitive_root(ell);
    DirichletCharacter chi;
    chi.modulus = ell;
    chi.order = d;
    chi.logs.assign(ell, -1);
    std::uint64_t pw = 1;
    for (long j = 0; j < ell - 1; ++j) {
        chi.logs[pw] = j % d;
        pw = detail::mulmod_u64(pw, (std::uint64_t)g, (std::uint64_t)ell);
    }
    chi.parity = chi.logs[ell - 1] == 0 ? 1 : -1;
    chi.primitive = true;
    chi.label = "order-" + std::to_string(d) + " mod " + std::to_string(ell);
    return chi;
}

// tau(chi) = sum_{m=1}^{l} chi(m) e^{2 pi i m / l}.
inline Complex gauss_sum(const PrecisionContext& ctx, const DirichletCharacter& chi) {
    return escalated(ctx, [&](Prec p) {
        Complex acc(p);
        Real step = Real::pi(p) * 2 / chi.modulus;
        for (long m = 1; m <= chi.modulus; ++m) {
            if (chi.log_at(m) < 0) continue;
            acc += chi.value(m, p) * cis(step * m);
        }
        return acc;
    });
}

namespace detail {

struct EmParams {
    long M;
    long q;
};

// Euler-Maclaurin remainder bound after q Bernoulli terms at offset M:
// |R| <= |B_{2q+2}/(2q+2)!| |(s)_{2q+1}| (M+w)^{-sigma-2q-1} (sigma+2q+1+|s+2q+1|)/(sigma+2q+1).
inline Real em_remainder_bound(const Complex& s, long M, long q, Prec p) {
    Real sig = s.re;
    Real base(M, p); // M + w >= M for w in (0,1] is false; use M itself (w>0 gives M+w>M, so M is conservative)
    Real pw = pow(base, -(sig + (long)(2 * q + 1)));
    Real poch(1L, p);
    for (long j = 0; j <= 2 * q; ++j) poch *= cabs(s + j);
    Real b = abs(to_real(bernoulli((unsigned long)(2 * q + 2)), p)) /
             to_real(factorial_int((unsigned long)(2 * q + 2)), p);
    Real sig2q = sig + (long)(2 * q + 1);
    return b * poch * pw * (sig2q + cabs(s + (long)(2 * q + 1))) / sig2q;
}

// Picks (M, q) so the remainder is below 2^-(p-8); geometric search on M.
inline EmParams choose_em_params(const Complex& s_worst, Prec p) {
    long q = std::max<long>(8, (long)(0.30 * (double)p) + 4);
    double sig = s_worst.re.to_double();
    if ((double)(2 * q + 1) + sig < 2.0) q = (long)((2.0 - sig) / 2) + 4 + q;
    double smod = cabs(s_worst).to_double();
    long M = std::max<long>(10, (long)(0.20 * (smod + 2.0 * (double)q + 2.0)) + 6);
    Real target = Real::pow2(-(long)p + 8);
    for (int iter = 0; iter < 60; ++iter) {
        if (em_remainder_bound(s_worst, M, q, p) <= target) break;
        M = M * 3 / 2 + 8;
    }
    return {M, q};
}

// All k factors L(s - m/k, chi), m = 0..k-1, in one Euler-Maclaurin pass.
// chi must be non-principal (the per-a poles at s-m/k = 1 cancel over a; the
// exact-argument case is handled by the log limit).
inline std::vector<Complex> l_shifted_core(const Complex& s0, long k, const DirichletCharacter& chi, Prec p) {
    const long ell = chi.modulus;
    Complex s = s0.at_prec(p);
    // worst case over shifts for the remainder: smallest sigma, largest |s|
    Complex s_worst = {s.re - Real(k - 1, p) / Real(k, p), s.im};
    if (cabs(s) > cabs(s_worst)) s_worst = s;
    EmParams em = choose_em_params(s_worst, p);
    const long M = em.M, q = em.q;

    // Pochhammer coefficients B_{2j}/(2j)! (s_m)_{2j-1} per shift m.
    std::vector<std::vector<Complex>> coeff(k);
    std::vector<Complex> sm(k, Complex(p));
    for (long m = 0; m < k; ++m) {
        sm[m] = s - Complex(Real(m, p) / Real(k, p));
        coeff[m].reserve(q);
        Complex poch = sm[m];
        for (long j = 1; j <= q; ++j) {
            Real bj = to_real(bernoulli((unsigned long)(2 * j)), p) /
                      to_real(factorial_int((unsigned long)(2 * j)), p);
            coeff[m].push_back(poch * bj);
            poch = poch * (sm[m] + (long)(2 * j - 1)) * (sm[m] + (long)(2 * j));
        }
    }

    std::vector<Complex> L(k, Complex(p));
    for (long a = 1; a < ell; ++a) {
        if (chi.log_at((std::uint64_t)a) < 0) continue;
        Real w = Real(a, p) / Real(ell, p);

        // base sums for all shifts: (n+w)^{-s+m/k}
        std::vector<Complex> base(k, Complex(p));
        for (long n = 0; n < M; ++n) {
            Real t = w + n;
            Real lt = log(t);
            Complex z = cexp({-s.re * lt, -s.im * lt});
            Real rk = exp(lt / (long)k);
            Real rm(1L, p);
            for (long m = 0; m < k; ++m) {
                base[m] += z * rm;
                rm *= rk;
            }
        }

        // boundary + Bernoulli tail at M+w per shift
        Real T = w + M;
        Real lT = log(T);
        Complex zT = cexp({-s.re * lT, -s.im * lT});
        Real rkT = exp(lT / (long)k);
        Real u = Real(1L, p) / T;
        Real rmT(1L, p);
        std::vector<Complex> zeta(k, Complex(p));
        for (long m = 0; m < k; ++m) {
            Complex TmS = zT * rmT; // (M+w)^{-s_m}
            Complex acc = base[m] + TmS * Real(0.5, p);
            if (sm[m].im.is_zero() && sm[m].re == 1) {
                // exact s_m = 1: lim ((M+w)^{1-s}-1)/(s-1) = -log(M+w); the
                // a-constant part cancels after summing chi(a).
                acc += Complex(-lT);
            } else {
                acc += TmS * T / (sm[m] - 1);
            }
            Real upow = u; // u^{2j-1}
            for (long j = 1; j <= q; ++j) {
                acc += coeff[m][(size_t)j - 1] * TmS * upow;
                upow *= u * u;
            }
            zeta[m] = acc;
            rmT *= rkT;
        }

        Complex cv = chi.value((std::uint64_t)a, p);
        for (long m = 0; m < k; ++m) L[m] += cv * zeta[m];
    }

    // prefactor l^{-s_m}
    for (long m = 0; m < k; ++m) {
        Real ll = log(Real(ell, p));
        L[m] = L[m] * cexp({-sm[m].re * ll, -sm[m].im * ll});
    }
    return L;
}

inline Complex l_core(const Complex& s, const DirichletCharacter& chi, Prec p) {
    return l_shifted_core(s, 1, chi, p)[0];
}

} // namespace detail

// L(s, chi) for non-principal chi, valid in the whole plane.
inline Complex l_function(const PrecisionContext& ctx, const Complex& s, const DirichletCharacter& chi) {
    if (chi.modulus < 2) throw DomainError("l_function: need a non-principal character");
    // guard bits against the (s-1)-cancellation when s is near (but not at) 1
    long guard = 0;
    Complex s1 = s - 1;
    if (!(s1.re.is_zero() && s1.im.is_zero())) {
        Real d = cabs(s1);
        if (d < 1) guard = -log2(d).to_long() + 4;
        if (guard < 0) guard = 0;
    }
    PrecisionContext c2(ctx.working_bits + guard, ctx.target_tol, ctx.max_escalations);
    return escalated(c2, [&](Prec p) { return detail::l_core(s, chi, p); });
}

// prod_{m=0}^{k-1} L(s - m/k, chi) in one pass.
inline Complex l_product(const PrecisionContext& ctx, const Complex& s, long k, const DirichletCharacter& chi) {
    return escalated(ctx, [&](Prec p) {
        auto f = detail::l_shifted_core(s, k, chi, p);
        Complex r(1L, p);
        for (auto& v : f) r *= v;
        return r;
    });
}

// Right-hand side of the asymmetric functional equation:
// (1/2 pi i) (2 pi / l)^s tau(chi) Gamma(1-s) L(1-s, conj chi) (e^{i pi s/2} - chi(-1) e^{-i pi s/2}).
inline Complex functional_equation_rhs(const PrecisionContext& ctx, const Complex& s,
                                       const DirichletCharacter& chi) {
    return escalated(ctx, [&](Prec p) {
        PrecisionContext cp(p, Real::pow2(-(long)p + 24), ctx.max_escalations);
        Complex sp = s.at_prec(p);
        Real pi = Real::pi(p);
        Complex tau = gauss_sum(cp, chi);
        Complex gam = detail::gamma_core(Complex(1L, p) - sp, p);
        Complex lval = detail::l_core(Complex(1L, p) - sp, chi.conjugate(), p);
        Complex phase = cexp({-pi * sp.im / 2, pi * sp.re / 2});
        Complex phase2 = cexp({pi * sp.im / 2, -pi * sp.re / 2});
        Complex sign_part = phase - phase2 * (long)chi.parity;
        Complex pref = cpow(pi * 2 / chi.modulus, sp); // (2 pi / l)^s
        Complex two_pi_i = {Real(p), pi * 2};
        return pref * tau * gam * lval * sign_part / two_pi_i;
    });
}

// |L(s,chi) - FE(s,chi)| with each factor evaluated independently.
inline Real functional_equation_residual(const PrecisionContext& ctx, const Complex& s,
                                         const DirichletCharacter& chi) {
    if (!chi.primitive) throw DomainError("functional equation requires a primitive character");
    if (s.im.is_zero() && s.re.is_integer() && s.re >= 1)
        throw PoleError("Gamma(1-s) pole at integer s >= 1");
    Complex lhs = l_function(ctx, s, chi);
    Complex rhs = functional_equation_rhs(ctx, s, chi);
    return cabs(lhs - rhs);
}

// L(-m/k, chi) via the functional equation from L(1+m/k, conj chi), checked
// against the direct Euler-Maclaurin continuation.
inline Complex l_special_negative(const PrecisionContext& ctx, const DirichletCharacter& chi,
                                  long m, long k) {
    if (!chi.primitive || chi.modulus < 2)
        throw DomainError("l_special_negative: primitive character with l > 1 required");
    if (m < 0 || m >= k) throw DomainError("l_special_negative: need 0 <= m < k");
    Prec p = ctx.working_bits;
    Complex s = {-Real(m, p) / Real(k, p), Real(p)};
    Complex fe = functional_equation_rhs(ctx, s, chi);
    Complex direct = l_function(ctx, s, chi);
    if (!close_enough(fe, direct, ctx.target_tol * 16))
        throw PrecisionError("l_special_negative: functional-equation and direct routes disagree");
    return fe;
}

} // namespace sigmalab
