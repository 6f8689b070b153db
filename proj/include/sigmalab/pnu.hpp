#pragma once

// The two faces of the weighted summatory polynomial
//   P_nu(x) = sum_{n <= x} sigma_k(n) chi(n) (x - n)^{nu-1}:
// the direct sum, and the functional-equation expansion
//   P_nu(x) = x^{nu-1} L(0,chi)...L(-(k-1)/k,chi)
//           + sum_{r=0}^{k} A_r [ sum_{m=nu}^{k nu} w_m coeff_m S_{r,m}
//                                - sum_{m=2}^{nu} resw_m rcoeff_m Lambda_m ],
// with
//   A_r    = C_r Gamma(nu) (tau/2 pi i)^k (l/2 pi)^{(k-1)/2}
//            (2 pi / l)^k e^{i k pi w_r / 2} x^nu (-1)^nu (2 pi)^{(k-1)/2} sqrt(k),
//   S_{r,m} = sum_{n<=X} a_n conj(chi)(n) exp(-2 pi k e^{i pi w_r/2} (xn)^{1/k} / l) n^{-m/k},
//   Lambda_m = prod_j L(m + j/k, conj chi).
// The kernel's residue polynomial enters with a minus sign (see
// mellin_kernel.hpp). The m < nu terms of the u-sums cancel exactly, so the
// grouped weights w_m = sum_u b_u P_{m,u} are used, assembled rationally.
// An inverse-Mellin quadrature of the defining identity on Re s = 2 is the
// independent oracle.

#include <string>
#include <vector>

#include "sigmalab/arith.hpp"
#include "sigmalab/dirichlet.hpp"
#include "sigmalab/mellin_kernel.hpp"
#include "sigmalab/quadrature.hpp"

namespace sigmalab {

struct PnuParams {
    long k = 2;
    long nu = 12;
    DirichletCharacter chi;
    long X_trunc = 0;           // singular-series truncation; 0 = choose from abs_tol
    Real abs_tol = Real::nan(); // absolute error budget of the analytic path

    void validate() const {
        if (k < 2) throw DomainError("PnuParams: k > 1 required");
        if (nu < 2) throw DomainError("PnuParams: nu >= 2 required");
        if (chi.modulus < 2) throw DomainError("PnuParams: character required");
    }
};

struct PhaseTerm {
    long r;
    Rat omega;  // (k - 2r)/k
    Complex C;
};

// Expands prod_{m=0}^{k-1} (e^{i pi (s - m/k)/2} - chi(-1) e^{-i pi (s - m/k)/2})
// into sum_r C_r e^{i pi omega_r k s / 2} by enumerating all 2^k sign choices
// and grouping by the coefficient of s.
inline std::vector<PhaseTerm> phase_terms(long k, int parity, Prec p) {
    if (k < 1 || k > 24) throw DomainError("phase_terms: 1 <= k <= 24");
    if (parity != 1 && parity != -1) throw DomainError("phase_terms: parity must be +-1");
    std::vector<PhaseTerm> terms;
    terms.reserve(k + 1);
    for (long r = 0; r <= k; ++r) terms.push_back({r, Rat(k - 2 * r, k), Complex(p)});

    Real pi = Real::pi(p);
    for (unsigned long mask = 0; mask < (1ul << k); ++mask) {
        long r = (long)__builtin_popcountll(mask); // minus-signs chosen
        long sum_plus = 0, sum_minus = 0;
        for (long m = 0; m < k; ++m)
            ((mask >> m) & 1 ? sum_minus : sum_plus) += m;
        // angle of the s-free factor: -(pi/2k)(sum_plus - sum_minus)
        Real angle = -pi * (sum_plus - sum_minus) / (2 * k);
        Complex contrib = cis(angle);
        // factor (-chi(-1))^r
        if (parity > 0 && r % 2 != 0) contrib = -contrib;
        terms[(size_t)r].C += contrib;
    }
    return terms;
}

// P_nu(x) by the direct weighted sum.
inline Complex pnu_direct(const PrecisionContext& ctx, const PnuParams& params, const Real& x) {
    params.validate();
    if (x < 1) return Complex(ctx.working_bits);
    long N = (long)floor(x).to_long();
    if (N < 1) return Complex(ctx.working_bits);
    return escalated(ctx, [&](Prec p) {
        auto sig = sigma_table((std::uint32_t)N, params.k, p);
        Real xp = x.at_prec(p);
        Complex acc(p);
        for (long n = 1; n <= N; ++n) {
            if (params.chi.log_at((std::uint64_t)n) < 0) continue;
            Real wgt = pow(xp - n, params.nu - 1);
            acc += params.chi.value((std::uint64_t)n, p) * wgt * sig[(size_t)n];
        }
        return acc;
    });
}

struct PnuAddend {
    long r;             // phase index, -1 for the main term
    long u;             // partial-fraction index, -1 for grouped/residue rows
    long m;             // inner power index
    std::string block;  // n-range label
    Complex value;
};

struct PnuAnalyticResult {
    Complex value;
    Complex main_term;
    Complex singular_part;  // sum_r A_r (singular-series block)
    Complex residue_l_part; // -sum_r A_r (residue block), the Lambda_m terms
    Real tail_bound;
    long X_used = 0;
    Complex calibration{Real(1.0, 64), Real(0.0, 64)};
    std::vector<PnuAddend> addends;
};

namespace detail {

// Truncation bound for the singular series: sum_r |A_r| sum_m |w_m| coeff_m tail_{d_k}(X).
inline Real series_tail_bound(const PnuParams& pr, const std::vector<Real>& absA,
                              const std::vector<Rat>& w, const Real& x, long X, Prec p) {
    long k = pr.k, nu = pr.nu;
    Real coeff_base = Real(pr.chi.modulus, p) / (Real::pi(p) * 2 * rootn(x, (unsigned long)k));
    Real total(p);
    Real asum(p);
    for (auto& a : absA) asum += a;
    for (long m = nu; m <= k * nu; ++m) {
        Rat wm = w[(size_t)m - 1];
        if (wm == 0) continue;
        Real beta = -Real(m, p) / Real(k, p);
        total += abs(to_real(wm, p)) * pow(coeff_base, m) *
                 divisor_tail_bound(k, beta, (std::uint64_t)X, p);
    }
    return asum * total;
}

} // namespace detail

// The functional-equation expansion with per-addend breakdown.
inline PnuAnalyticResult pnu_analytic(const PrecisionContext& ctx, const PnuParams& params,
                                      const Real& x, bool want_addends = false,
                                      const Complex* calibration = nullptr) {
    params.validate();
    const long k = params.k, nu = params.nu, ell = params.chi.modulus;
    if (nu < 6 * k) throw DomainError("pnu_analytic: nu >= 6k required for the shifted contour");
    if (!(x > 0)) throw DomainError("pnu_analytic: x > 0 required");

    auto f = closed_form_polynomials(k, nu);

    // main term x^{nu-1} L(0) ... L(-(k-1)/k)
    Complex lmain(1L, ctx.working_bits);
    for (long m = 0; m < k; ++m) lmain *= l_special_negative(ctx, params.chi, m, k);
    Complex main_term = lmain * pow(x, nu - 1);

    // |A_r| at moderate precision for the tail bound
    Prec pb = 96;
    std::vector<PhaseTerm> ph = phase_terms(k, params.chi.parity, pb);
    Real tau_abs = sqrt(Real(ell, pb));
    Real two_pi_b = Real::pi(pb) * 2;
    std::vector<Real> absA;
    Real gamma_nu_b = gamma_mpfr(Real(nu, pb));
    for (long r = 0; r <= k; ++r) {
        Real mag = cabs(ph[(size_t)r].C) * gamma_nu_b * pow(tau_abs / two_pi_b, k) *
                   pow(Real(ell, pb) / two_pi_b, Real(k - 1, pb) / 2) *
                   pow(two_pi_b / ell, k) * pow(x.at_prec(pb), nu) *
                   pow(two_pi_b, Real(k - 1, pb) / 2) * sqrt(Real(k, pb));
        absA.push_back(mag);
    }

    // absolute budget and truncation point
    Real abs_tol = params.abs_tol;
    if (abs_tol.is_nan() || !(abs_tol > 0))
        abs_tol = ctx.target_tol * max(Real(1, ctx.working_bits), cabs(main_term));
    long X = params.X_trunc;
    Real tail(pb);
    if (X > 0) {
        tail = detail::series_tail_bound(params, absA, f.w, x, X, pb);
        if (!(tail <= abs_tol))
            throw TruncationError("pnu_analytic: tail bound " + tail.str(4) +
                                  " above budget " + abs_tol.str(4) + " at X_trunc");
    } else {
        X = 64;
        for (int i = 0; i < 18; ++i) {
            tail = detail::series_tail_bound(params, absA, f.w, x, X, pb);
            if (tail <= abs_tol / 2) break;
            X *= 2;
        }
        if (!(tail <= abs_tol / 2))
            throw TruncationError("pnu_analytic: no feasible X_trunc under budget " +
                                  abs_tol.str(4));
    }

    auto chibar = params.chi.conjugate();

    auto evaluate = [&](Prec p) {
        Real xp = x.at_prec(p);
        Real pi = Real::pi(p);
        Real two_pi = pi * 2;
        auto phases = phase_terms(k, params.chi.parity, p);
        PrecisionContext cp(p, Real::pow2(-(long)p + 24), ctx.max_escalations);
        Complex tau = gauss_sum(cp, params.chi);

        // A_r
        Complex base = cpow(tau / Complex{Real(p), two_pi}, k) *
                       Complex(pow(Real(ell, p) / two_pi, Real(k - 1, p) / 2) *
                               gamma_mpfr(Real(nu, p)) * pow(two_pi / ell, k) * pow(xp, nu) *
                               pow(two_pi, Real(k - 1, p) / 2) * sqrt(Real(k, p)));
        if (nu % 2 != 0) base = -base;
        std::vector<Complex> A;
        for (long r = 0; r <= k; ++r) {
            Real ang = pi * to_real(phases[(size_t)r].omega, p) * k / 2;
            A.push_back(phases[(size_t)r].C * cis(ang) * base);
        }

        // singular series S_{r,m}
        auto an = a_table((std::uint32_t)X, k, p);
        Real xroot = rootn(xp, (unsigned long)k);
        Real cbase = two_pi * k / ell;
        std::vector<Real> cosw(k + 1, Real(p)), sinw(k + 1, Real(p));
        for (long r = 0; r <= k; ++r) {
            Real half_ang = pi * to_real(phases[(size_t)r].omega, p) / 2;
            sin_cos(sinw[(size_t)r], cosw[(size_t)r], half_ang);
        }
        long mcount = k * nu - nu + 1;
        std::vector<std::vector<Complex>> S((size_t)(k + 1),
                                            std::vector<Complex>((size_t)mcount, Complex(p)));
        for (long n = 1; n <= X; ++n) {
            if (chibar.log_at((std::uint64_t)n) < 0) continue;
            Complex cv = chibar.value((std::uint64_t)n, p) * an[(size_t)n];
            Real nroot = rootn(Real(n, p), (unsigned long)k);
            Real c = cbase * xroot * nroot; // 2 pi k (x n)^{1/k} / l
            Real ninv = Real(1L, p) / nroot;
            Real nstart = pow(ninv, nu); // n^{-nu/k}
            for (long r = 0; r <= k; ++r) {
                // exp(-c e^{i pi w_r/2}) = e^{-c cos} (cos(-c sin) + i sin(-c sin))
                Complex e = polar(exp(-(c * cosw[(size_t)r])), -(c * sinw[(size_t)r]));
                Complex term = cv * e * nstart;
                for (long mi = 0; mi < mcount; ++mi) {
                    S[(size_t)r][(size_t)mi] += term;
                    term = term * ninv;
                }
            }
        }

        // Lambda_m = prod_j L(m + j/k, conj chi) for the residue block
        std::vector<Complex> lambda;
        for (long m = 2; m <= nu; ++m) {
            Complex stop{Real(m, p) + Real(k - 1, p) / Real(k, p), Real(p)};
            auto factors = detail::l_shifted_core(stop, k, chibar, p);
            Complex prod(1L, p);
            for (auto& fv : factors) prod *= fv;
            lambda.push_back(prod);
        }

        // assemble
        Real coeff_base = Real(ell, p) / (two_pi * xroot);
        Real rcoeff_base = two_pi * k / ell * xroot; // (2 pi k / l) x^{1/k}
        Complex singular(p), residueL(p);
        for (long r = 0; r <= k; ++r) {
            Complex acc_s(p), acc_r(p);
            for (long m = nu; m <= k * nu; ++m) {
                Rat wm = f.w[(size_t)m - 1];
                if (wm == 0) continue;
                // (l e^{-i pi w_r/2} / (2 pi x^{1/k}))^m
                Complex coef = polar(pow(coeff_base, m), -(pi * to_real(phases[(size_t)r].omega, p) * m / 2));
                acc_s += to_real(wm, p) * coef * S[(size_t)r][(size_t)(m - nu)];
            }
            for (long m = 2; m <= nu; ++m) {
                // minus the residue block (contour shift subtracts residues)
                Complex rc = polar(pow(rcoeff_base, -(k * m)),
                                   -(pi * to_real(phases[(size_t)r].omega, p) * k * m / 2));
                acc_r -= to_real(f.res_weight[(size_t)(m - 2)], p) * rc * lambda[(size_t)(m - 2)];
            }
            singular += A[(size_t)r] * acc_s;
            residueL += A[(size_t)r] * acc_r;
        }
        return std::make_pair(singular, residueL);
    };

    // verify-by-escalation on the series part (main term is already verified)
    Prec p0 = ctx.working_bits;
    auto r0 = evaluate(p0);
    auto r1 = r0;
    bool ok = false;
    for (int round = 0; round <= ctx.max_escalations; ++round) {
        Prec p1 = p0 * 2;
        r1 = evaluate(p1);
        Complex d = (r0.first + r0.second) - (r1.first + r1.second);
        if (cabs(d) <= ctx.target_tol * max(Real(1, p1), cabs(r1.first + r1.second)) ||
            cabs(d) <= abs_tol) {
            ok = true;
            break;
        }
        p0 = p1;
        r0 = r1;
    }
    if (!ok) throw PrecisionError("pnu_analytic: escalation exhausted");

    Complex singular = r1.first, residueL = r1.second;
    if (calibration) {
        singular = singular * (*calibration);
        residueL = residueL * (*calibration);
    }

    PnuAnalyticResult out;
    out.main_term = main_term;
    out.singular_part = singular;
    out.residue_l_part = residueL;
    out.value = main_term + singular + residueL;
    out.tail_bound = tail;
    out.X_used = X;
    if (calibration) out.calibration = *calibration;

    if (want_addends) {
        // Recompute the per-(r,u,m) decomposition at working precision. The
        // n-sums S_{r,m} depend only on (r, m), so each (u, m) addend is the
        // grouped term re-weighted by b_u P_{m,u}.
        Prec p = ctx.working_bits;
        Real xp = x.at_prec(p);
        Real pi = Real::pi(p);
        auto phases = phase_terms(k, params.chi.parity, p);
        out.addends.push_back({-1, -1, 0, "main", main_term});
        // grouped series rows: r, u, m with the exact b_u P_{m,u} weight; the
        // n-sums depend only on (r, m) and are shared across u
        std::string blk = "n<=" + std::to_string(X);
        auto an = a_table((std::uint32_t)X, k, p);
        auto chibar2 = params.chi.conjugate();
        Real xroot = rootn(xp, (unsigned long)k);
        Real two_pi = pi * 2;
        PrecisionContext cp(p, Real::pow2(-(long)p + 24), ctx.max_escalations);
        Complex tau = gauss_sum(cp, params.chi);
        Complex base = cpow(tau / Complex{Real(p), two_pi}, k) *
                       Complex(pow(Real(ell, p) / two_pi, Real(k - 1, p) / 2) *
                               gamma_mpfr(Real(nu, p)) * pow(two_pi / ell, k) * pow(xp, nu) *
                               pow(two_pi, Real(k - 1, p) / 2) * sqrt(Real(k, p)));
        if (nu % 2 != 0) base = -base;
        long mcount = k * nu - nu + 1;
        std::vector<std::vector<Complex>> S((size_t)(k + 1),
                                            std::vector<Complex>((size_t)mcount, Complex(p)));
        for (long n = 1; n <= X; ++n) {
            if (chibar2.log_at((std::uint64_t)n) < 0) continue;
            Complex cv = chibar2.value((std::uint64_t)n, p) * an[(size_t)n];
            Real nroot = rootn(Real(n, p), (unsigned long)k);
            Real c = two_pi * k / ell * xroot * nroot;
            Real ninv = Real(1L, p) / nroot;
            Real nstart = pow(ninv, nu);
            for (long r = 0; r <= k; ++r) {
                Real sw(p), cw(p);
                sin_cos(sw, cw, pi * to_real(phases[(size_t)r].omega, p) / 2);
                Complex e = polar(exp(-(c * cw)), -(c * sw));
                Complex term = cv * e * nstart;
                for (long mi = 0; mi < mcount; ++mi) {
                    S[(size_t)r][(size_t)mi] += term;
                    term = term * ninv;
                }
            }
        }
        Real coeff_base = Real(ell, p) / (two_pi * xroot);
        Real rcoeff_base = two_pi * k / ell * xroot;
        auto b = f.b;
        for (long r = 0; r <= k; ++r) {
            Complex Ar = phases[(size_t)r].C *
                         cis(pi * to_real(phases[(size_t)r].omega, p) * k / 2) * base;
            if (calibration) Ar = Ar * (*calibration);
            for (long u = 1; u <= nu; ++u) {
                for (long m = nu; m <= k * u; ++m) {
                    Rat bp = b[(size_t)u - 1] * p_coefficient(k, u, m);
                    if (bp == 0) continue;
                    Complex coef = polar(pow(coeff_base, m),
                                         -(pi * to_real(phases[(size_t)r].omega, p) * m / 2));
                    out.addends.push_back({r, u, m, blk,
                                           Ar * (to_real(bp, p) * coef *
                                                 S[(size_t)r][(size_t)(m - nu)])});
                }
            }
            for (long m = 2; m <= nu; ++m) {
                Complex stop{Real(m, p) + Real(k - 1, p) / Real(k, p), Real(p)};
                auto factors = detail::l_shifted_core(stop, k, chibar2, p);
                Complex lam(1L, p);
                for (auto& fv : factors) lam *= fv;
                Complex rc = polar(pow(rcoeff_base, -(k * m)),
                                   -(pi * to_real(phases[(size_t)r].omega, p) * k * m / 2));
                out.addends.push_back(
                    {r, -1, m, "residue-L",
                     -(Ar * (to_real(f.res_weight[(size_t)(m - 2)], p) * rc * lam))});
            }
        }
    }
    return out;
}

struct MellinOracleResult {
    Complex value; // x^{nu-1} times the line integral, comparable to pnu_direct
    Real tail_bound;
    Real T_used;
    Real measured_l_product_max; // reported diagnostic
};

// (1/2 pi i) int_{(2)} prod_m L(s - m/k, chi) B(nu, s) x^s ds, |Im s| <= T,
// times x^{nu-1}. T = 0 picks the height from the rigorous tail bound
//   |tail| <= x^2 Gamma(nu) prod_m zeta(2 - m/k) T^{1-nu} / (pi (nu-1)).
inline MellinOracleResult mellin_identity_oracle(const PrecisionContext& ctx,
                                                 const PnuParams& params, const Real& x,
                                                 const Real& abs_tol_in = Real::nan(),
                                                 Real T = Real::nan()) {
    params.validate();
    const long k = params.k, nu = params.nu;
    Prec p = ctx.working_bits + 64;
    Real xp = x.at_prec(p);
    Real abs_tol = abs_tol_in.is_nan() ? ctx.target_tol * pow(xp, nu) : abs_tol_in.at_prec(p);

    // rigorous bound pieces
    Real zprod(1L, p);
    for (long m = 0; m < k; ++m) {
        Real arg = Real(2L, p) - Real(m, p) / Real(k, p);
        Real z(p);
        mpfr_zeta(z.raw(), arg.raw(), MPFR_RNDN);
        zprod *= z;
    }
    Real gnu = gamma_mpfr(Real(nu, p));
    Real xfac = pow(xp, nu + 1); // x^2 * x^{nu-1}
    auto tail_at = [&](const Real& TT) {
        return xfac * gnu * zprod * pow(TT, 1 - nu) / (Real::pi(p) * (nu - 1));
    };
    if (T.is_nan()) {
        // T from bound(T) = abs_tol / 4
        Real target = abs_tol / 4;
        Real lnT = (log(xfac * gnu * zprod / (Real::pi(p) * (nu - 1))) - log(target)) / (nu - 1);
        T = exp(lnT) + 4;
    }
    Real tail = tail_at(T);
    if (!(tail <= abs_tol / 2))
        throw TailTooLarge("mellin_identity_oracle: tail " + tail.str(4) + " above budget");

    Real lnx = log(xp);
    Real measured_max(p);
    auto integrand = [&](const Real& t) {
        Complex s{Real(2L, p), t};
        auto L = detail::l_shifted_core(s, k, params.chi, p);
        Complex lp(1L, p);
        for (auto& v : L) lp *= v;
        Real lpm = cabs(lp);
        if (lpm > measured_max) measured_max = lpm;
        // B(nu, s) = Gamma(nu) / ((s)(s+1)...(s+nu-1))
        Complex den(1L, p);
        for (long j = 0; j < nu; ++j) den *= (s + j);
        Complex bfac = Complex(gnu) / den;
        return lp * bfac * cexp(s * Complex(lnx));
    };

    bool realchi = params.chi.is_real();
    double freq = std::abs(lnx.to_double()) + 1.0;
    long panels = std::max<long>(8, (long)(T.to_double() * freq / 14.0) + 6);
    auto run = [&](long np) {
        if (realchi) {
            Complex half = integrate_panels(integrand, Real(0, p), T.at_prec(p), np, 32, p);
            return Complex{half.re * 2, Real(p)};
        }
        return integrate_panels(integrand, -T.at_prec(p), T.at_prec(p), 2 * np, 32, p);
    };

    Complex prev = run(panels);
    for (int round = 0; round < 4; ++round) {
        panels *= 2;
        Complex next = run(panels);
        Real scale = pow(xp, nu - 1);
        if (cabs(prev - next) * scale / (Real::pi(p) * 2) <= abs_tol / 4) {
            Complex val = next / (Real::pi(p) * 2) * scale;
            return {val.at_prec(ctx.working_bits), (tail + cabs(prev - next) * scale).at_prec(ctx.working_bits),
                    T.at_prec(ctx.working_bits), measured_max.at_prec(ctx.working_bits)};
        }
        prev = next;
    }
    throw PrecisionError("mellin_identity_oracle: quadrature failed to stabilize");
}

struct CalibrationReport {
    std::vector<std::pair<Real, Complex>> ratios; // (x, ratio)
    bool constant = false;
    Complex ratio; // adopted global constant
};

// Ratio (pnu_direct - main) / (analytic series) per x; constant across x
// means a single global prefactor correction suffices.
inline CalibrationReport calibrate_prefactor(const PrecisionContext& ctx, PnuParams params,
                                             const std::vector<Real>& xs, const Real& rel_tol) {
    CalibrationReport rep;
    Complex first;
    bool have_first = false;
    for (auto& x : xs) {
        Complex direct = pnu_direct(ctx, params, x);
        PnuParams pr = params;
        pr.abs_tol = cabs(direct) * rel_tol / 8;
        auto an = pnu_analytic(ctx, pr, x);
        Complex ratio = (direct - an.main_term) / (an.value - an.main_term);
        rep.ratios.emplace_back(x, ratio);
        if (!have_first) {
            first = ratio;
            have_first = true;
        }
    }
    rep.constant = true;
    for (auto& [x, r] : rep.ratios)
        if (!(cabs(r - first) <= rel_tol * 16)) rep.constant = false;
    rep.ratio = first;
    return rep;
}

} // namespace sigmalab
