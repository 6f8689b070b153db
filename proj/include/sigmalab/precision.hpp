#pragma once

// Working-precision contexts and the verify-by-escalation helper: a result is
// accepted once recomputation at doubled precision moves it by less than the
// context tolerance. This is not ball arithmetic; it is the cheap contract
// that catches cancellation blowups in the series evaluations.

#include <functional>

#include "sigmalab/complex.hpp"
#include "sigmalab/errors.hpp"

namespace sigmalab {

struct PrecisionContext {
    Prec working_bits;
    Real target_tol;
    int max_escalations;

    explicit PrecisionContext(Prec bits, int escalations = 4)
        : working_bits(bits),
          target_tol(Real::pow2(-(long)(bits - 24))),
          max_escalations(escalations) {
        validate();
    }
    PrecisionContext(Prec bits, Real tol, int escalations = 4)
        : working_bits(bits), target_tol(std::move(tol)), max_escalations(escalations) {
        validate();
    }

    void validate() const {
        if (working_bits < 64) throw DomainError("PrecisionContext: working_bits must be >= 64");
        if (!(target_tol > 0) || target_tol < Real::pow2(-(long)working_bits + 16))
            throw DomainError("PrecisionContext: target_tol below the 2^(-working_bits+16) guard margin");
        if (max_escalations < 0) throw DomainError("PrecisionContext: negative escalation budget");
    }
};

inline bool close_enough(const Real& a, const Real& b, const Real& tol) {
    return abs(a - b) <= tol * max(Real(1L, tol.prec()), abs(b));
}
inline bool close_enough(const Complex& a, const Complex& b, const Real& tol) {
    return cabs(a - b) <= tol * max(Real(1L, tol.prec()), cabs(b));
}

// Runs eval(prec) at working_bits, then at doubled precision, accepting once
// two consecutive evaluations agree within target_tol. eval must be a pure
// function of the precision argument. The accepted value is rounded back to
// working_bits so escalations do not inflate downstream operand precisions.
template <class F>
auto escalated(const PrecisionContext& ctx, F&& eval) {
    Prec p = ctx.working_bits;
    auto prev = eval(p);
    for (int round = 0; round <= ctx.max_escalations; ++round) {
        p *= 2;
        auto next = eval(p);
        if (close_enough(prev, next, ctx.target_tol)) return next.at_prec(ctx.working_bits);
        prev = next;
    }
    throw PrecisionError("escalation budget exhausted without convergence");
}

} // namespace sigmalab
