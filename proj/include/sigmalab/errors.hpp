#pragma once

#include <stdexcept>
#include <string>

namespace sigmalab {

// Base for every error raised by the library; the CLI maps these to exit 1
// with the class name surfaced.
struct Error : std::runtime_error {
    explicit Error(const std::string& what) : std::runtime_error(what) {}
    virtual const char* name() const noexcept { return "Error"; }
};

#define SIGMALAB_ERROR(Name)                                            \
    struct Name : Error {                                               \
        explicit Name(const std::string& what) : Error(what) {}         \
        const char* name() const noexcept override { return #Name; }    \
    }

SIGMALAB_ERROR(PoleError);        // Gamma at a non-positive integer
SIGMALAB_ERROR(PrecisionError);   // escalation budget exhausted
SIGMALAB_ERROR(DomainError);      // argument outside an operation's region
SIGMALAB_ERROR(DivergenceError);  // Dirichlet sum outside convergence region
SIGMALAB_ERROR(TruncationError);  // series truncation bound above tolerance
SIGMALAB_ERROR(TailTooLarge);     // quadrature tail bound above tolerance
SIGMALAB_ERROR(OverflowBudget);   // factorization effort exceeded
SIGMALAB_ERROR(BracketError);     // bisection target below branch minimum
SIGMALAB_ERROR(NotFactor);        // recovered candidate fails divisibility
SIGMALAB_ERROR(NotPrime);         // prime modulus required
SIGMALAB_ERROR(RankError);        // ambiguous numerical rank
SIGMALAB_ERROR(InfeasibleSystem); // constraint rows >= unknowns
SIGMALAB_ERROR(SmallC0);          // |C_0| below the error budget

#undef SIGMALAB_ERROR

} // namespace sigmalab
