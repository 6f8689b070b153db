#pragma once

// Closed-form machinery for the kernel
//   I(y) = (1/2 pi i) int_{(3/2)} Gamma(ks) (k^k y)^{-s} / ((s-nu)...(s-1)) ds
//        = (kX)^{-k nu} ( p_{k,nu}(X) e^{-kX} - q_{k,nu}(X^k) ),  X = y^{1/k},
// assembled in exact rational arithmetic: the partial-fraction weights b_u,
// the coefficient matrix P_{m,u}, and the two polynomials. A contour
// quadrature on Re s = 3/2 with a rigorous Gamma-decay tail bound serves as
// the independent oracle. The alternating u-sums cancel catastrophically in
// floating point for large nu, which is why everything upstream of the final
// evaluation stays rational.
//
// Sign of q: shifting the line from 3/2 to nu+1 crosses the poles at
// s = 2..nu, and int_{(3/2)} = int_{(nu+1)} - sum of those residues, so the
// residue polynomial enters with a minus sign. (Verified against the
// quadrature: at k=3, nu=2, y=1 the integral is (1749 e^{-3} - 120)/729.)

#include <sstream>
#include <vector>

#include "sigmalab/gamma.hpp"
#include "sigmalab/precision.hpp"
#include "sigmalab/quadrature.hpp"
#include "sigmalab/rational.hpp"

namespace sigmalab {

// b_u = prod_{r != u} 1/(u-r) = (-1)^{nu-u} / ((u-1)! (nu-u)!), u = 1..nu.
inline std::vector<Rat> partial_fractions(long nu) {
    if (nu < 1) throw DomainError("partial_fractions: nu >= 1 required");
    std::vector<Rat> b;
    b.reserve(nu);
    for (long u = 1; u <= nu; ++u) {
        Rat v = Rat(1) / Rat(factorial_int((unsigned long)(u - 1)) *
                             factorial_int((unsigned long)(nu - u)));
        if ((nu - u) % 2 != 0) v = -v;
        b.push_back(v);
    }
    return b;
}

// P_{m,u} = (ku-1)(ku-2)...(ku-(m-1)) / k^m; the empty product gives P_{1,u} = 1/k.
// Vanishes identically for m > ku (the product crosses zero).
inline Rat p_coefficient(long k, long u, long m) {
    Int num = 1;
    for (long i = 1; i <= m - 1; ++i) num *= (k * u - i);
    return Rat(num) / rat_pow(Rat(k), m);
}

// P[u-1][m-1] for 1 <= u <= nu, 1 <= m <= ku.
inline std::vector<std::vector<Rat>> p_matrix(long k, long nu) {
    if (k < 2 || nu < 2) throw DomainError("p_matrix: k >= 2 and nu >= 2 required");
    std::vector<std::vector<Rat>> P(nu);
    for (long u = 1; u <= nu; ++u) {
        P[u - 1].reserve(k * u);
        for (long m = 1; m <= k * u; ++m) P[u - 1].push_back(p_coefficient(k, u, m));
    }
    return P;
}

struct KernelClosedForm {
    long k = 0, nu = 0;
    std::vector<Rat> b;                  // b_1..b_nu
    std::vector<std::vector<Rat>> P;     // P_{m,u}
    std::vector<Rat> w;                  // w[m-1] = sum_u b_u P_{m,u}, m = 1..k*nu
    std::vector<Rat> p_poly;             // ascending, degree (k-1) nu
    std::vector<Rat> q_poly;             // ascending in y, degree nu-2
    std::vector<Rat> res_weight;         // res_weight[m-2] = Gamma(km) b_m, m = 2..nu
};

inline KernelClosedForm closed_form_polynomials(long k, long nu) {
    KernelClosedForm f;
    f.k = k;
    f.nu = nu;
    f.b = partial_fractions(nu);
    f.P = p_matrix(k, nu);

    f.w.assign((size_t)(k * nu), Rat(0));
    for (long u = 1; u <= nu; ++u)
        for (long m = 1; m <= k * u; ++m) f.w[(size_t)m - 1] += f.b[(size_t)u - 1] * f.P[(size_t)u - 1][(size_t)m - 1];

    // p(X) = (k^k)^nu sum_m w_m X^{k nu - m}; the m < nu coefficients vanish.
    Rat kk_nu = rat_pow(rat_pow(Rat(k), k), nu);
    f.p_poly.assign((size_t)((k - 1) * nu + 1), Rat(0));
    for (long m = 1; m <= k * nu; ++m) {
        long deg = k * nu - m;
        Rat c = kk_nu * f.w[(size_t)m - 1];
        if (deg <= (k - 1) * nu) {
            f.p_poly[(size_t)deg] = c;
        } else if (c != 0) {
            throw PrecisionError("closed_form_polynomials: nonzero coefficient above degree (k-1)nu");
        }
    }

    // q(y) = sum_{m=2}^{nu} Gamma(km) b_m (k^k)^{nu-m} y^{nu-m}
    // using prod_{r != m} (m-r) = (m-1)! (-1)^{nu-m} (nu-m)! = 1/b_m.
    f.q_poly.assign((size_t)(nu - 1), Rat(0));
    f.res_weight.reserve((size_t)(nu - 1));
    for (long m = 2; m <= nu; ++m) {
        Rat gw = Rat(factorial_int((unsigned long)(k * m - 1))) * f.b[(size_t)m - 1];
        f.res_weight.push_back(gw);
        f.q_poly[(size_t)(nu - m)] = gw * rat_pow(rat_pow(Rat(k), k), nu - m);
    }
    return f;
}

// I at a complex point X = y^{1/k} with Re X >= 0, X != 0:
//   I = (kX)^{-k nu} (p(X) e^{-kX} - q(X^k)).
// The escalation loop absorbs the p/q cancellation that dominates small |X|.
inline Complex kernel_eval(const PrecisionContext& ctx, const KernelClosedForm& f, const Complex& X) {
    if (X.re.sign() < 0) throw DomainError("kernel_eval: Re X >= 0 required");
    if (X.re.is_zero() && X.im.is_zero()) throw DomainError("kernel_eval: X = 0 excluded");
    return escalated(ctx, [&](Prec p) {
        Complex Xp = X.at_prec(p);
        Complex pe = eval_poly(f.p_poly, Xp, p) * cexp(-(Xp * f.k));
        Complex qe = eval_poly(f.q_poly, cpow(Xp, f.k), p);
        return (pe - qe) * cpow(Xp * f.k, -(f.k * f.nu));
    });
}

inline Complex kernel_eval_y(const PrecisionContext& ctx, const KernelClosedForm& f, const Real& y) {
    if (!(y > 0)) throw DomainError("kernel_eval_y: y > 0 required");
    Real X = rootn(y, (unsigned long)f.k);
    return kernel_eval(ctx, f, Complex(X));
}

struct OracleResult {
    Complex value;
    Real tail_bound;
};

// Upper bound for (1/2 pi) int_{|t|>T} |Gamma(k(3/2+it))| |(k^k y)^{-(3/2+it)}| / |prod (s-i)| dt.
// From gamma_mod_bound at t = T and the per-unit decay rate
// lambda = k atan(kT/sigma0) - sigma0/T - |arg y|  (sigma0 = 3k/2).
inline Real kernel_tail_bound(long k, long nu, const Complex& y, const Real& T, Prec p) {
    Real sigma0 = Real(3 * k, p) / 2;
    Real phi = abs(arg(y));
    Real aT = atan(T * k / sigma0);
    Real lambda = aT * k - sigma0 / T - phi;
    if (!(lambda > 0)) return Real(1e100, p); // no usable decay at this T
    Real mag_y = pow(cabs(y), Real(-1.5, p)) * pow(Real(k, p), Real(k, p) * Real(-1.5, p));
    Real C = gamma_mod_bound(sigma0, T * k, p) * mag_y * exp(phi * T) / pow(T, nu);
    return C / (Real::pi(p) * lambda);
}

// Quadrature of the defining integral over Re s = 3/2, |Im s| <= T. Real
// positive y is the contract; complex y with |arg y| < k pi/2 is accepted for
// the boundary-adjacent checks. Panel width is halved until two successive
// refinements agree within the tolerance.
inline OracleResult kernel_quadrature_oracle(const PrecisionContext& ctx, long k, long nu,
                                             const Complex& y, const Real& T) {
    if (k < 2 || nu < 2) throw DomainError("kernel_quadrature_oracle: k, nu >= 2 required");
    Prec p = ctx.working_bits + 64;
    Complex yp = y.at_prec(p);
    Real tail = kernel_tail_bound(k, nu, yp, T.at_prec(p), p);
    if (!(tail <= ctx.target_tol))
        throw TailTooLarge("kernel_quadrature_oracle: tail bound " + tail.str(6) +
                           " exceeds tolerance at T = " + T.str(6));

    Complex log_base = clog(yp) + Real(k, p) * log(Real(k, p)); // Log(k^k y)
    auto integrand = [&](const Real& t) {
        Complex s{Real(1.5, p), t};
        Complex g = detail::gamma_core(s * Real(k, p), p);
        Complex den(1L, p);
        for (long i = 1; i <= nu; ++i) den *= (s - i);
        return g * cexp(-(s * log_base)) / den;
    };

    bool sym = yp.im.is_zero() && yp.re.sign() > 0;
    double freq = k * std::log(k * std::max(T.to_double(), 3.0)) +
                  std::abs(cabs(log_base).to_double()) + 1.0;
    long panels = std::max<long>(8, (long)(T.to_double() * freq / 18.0) + 4);

    auto run = [&](long np) {
        if (sym) {
            Complex half = integrate_panels(integrand, Real(0, p), T.at_prec(p), np, 32, p);
            return Complex{half.re * 2, Real(p)}; // conjugate symmetry
        }
        return integrate_panels(integrand, -T.at_prec(p), T.at_prec(p), 2 * np, 32, p);
    };

    Complex prev = run(panels);
    for (int round = 0; round < 4; ++round) {
        panels *= 2;
        Complex next = run(panels);
        if (close_enough(prev, next, ctx.target_tol)) {
            Real two_pi = Real::pi(p) * 2;
            return {(next / two_pi).at_prec(ctx.working_bits), tail.at_prec(ctx.working_bits)};
        }
        prev = next;
    }
    throw PrecisionError("kernel_quadrature_oracle: quadrature failed to stabilize");
}

inline OracleResult kernel_quadrature_oracle(const PrecisionContext& ctx, long k, long nu,
                                             const Real& y, const Real& T) {
    if (!(y > 0)) throw DomainError("kernel_quadrature_oracle: y > 0 required");
    return kernel_quadrature_oracle(ctx, k, nu, Complex(y), T);
}

// Plain-text export of the exact coefficients, one numerator/denominator pair
// per line, degree-descending.
inline std::string export_polynomials(const KernelClosedForm& f) {
    std::ostringstream os;
    auto dump = [&os](const char* name, const std::vector<Rat>& poly) {
        os << name << " degree " << (poly.size() - 1) << "\n";
        for (auto it = poly.rbegin(); it != poly.rend(); ++it)
            os << numerator(*it) << "/" << denominator(*it) << "\n";
    };
    os << "kernel k " << f.k << " nu " << f.nu << "\n";
    dump("p", f.p_poly);
    dump("q", f.q_poly);
    return os.str();
}

} // namespace sigmalab
