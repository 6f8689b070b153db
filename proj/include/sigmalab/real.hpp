#pragma once

// Thin value-semantics wrapper over MPFR. Every Real carries its own binary
// precision; binary operations produce results at the wider of the two operand
// precisions, so mixing a 64-bit literal into a 256-bit computation never
// truncates the long operand. Rounding is to nearest throughout.

#include <mpfr.h>

#include <cstdint>
#include <string>
#include <utility>

#include "sigmalab/errors.hpp"

namespace sigmalab {

using Prec = mpfr_prec_t;

class Real {
  public:
    Real() { mpfr_init2(v_, 64); mpfr_set_nan(v_); }
    explicit Real(Prec prec) { mpfr_init2(v_, prec); mpfr_set_zero(v_, 1); }
    Real(long value, Prec prec) { mpfr_init2(v_, prec); mpfr_set_si(v_, value, MPFR_RNDN); }
    Real(int value, Prec prec) { mpfr_init2(v_, prec); mpfr_set_si(v_, value, MPFR_RNDN); }
    Real(unsigned long value, Prec prec) { mpfr_init2(v_, prec); mpfr_set_ui(v_, value, MPFR_RNDN); }
    Real(double value, Prec prec) { mpfr_init2(v_, prec); mpfr_set_d(v_, value, MPFR_RNDN); }

    Real(const Real& o) { mpfr_init2(v_, mpfr_get_prec(o.v_)); mpfr_set(v_, o.v_, MPFR_RNDN); }
    Real(Real&& o) noexcept { mpfr_init2(v_, 2); mpfr_swap(v_, o.v_); }
    Real& operator=(const Real& o) {
        if (this != &o) {
            if (mpfr_get_prec(v_) != mpfr_get_prec(o.v_)) mpfr_set_prec(v_, mpfr_get_prec(o.v_));
            mpfr_set(v_, o.v_, MPFR_RNDN);
        }
        return *this;
    }
    Real& operator=(Real&& o) noexcept { mpfr_swap(v_, o.v_); return *this; }
    ~Real() { mpfr_clear(v_); }

    static Real from_str(const std::string& s, Prec prec) {
        Real r(prec);
        if (mpfr_set_str(r.v_, s.c_str(), 10, MPFR_RNDN) != 0)
            throw DomainError("Real::from_str: unparsable '" + s + "'");
        return r;
    }
    static Real pi(Prec prec) { Real r(prec); mpfr_const_pi(r.v_, MPFR_RNDN); return r; }
    static Real nan() { return Real(); }
    // 2^e at minimal storage; exact.
    static Real pow2(long e, Prec prec = 64) {
        Real r(prec);
        mpfr_set_ui_2exp(r.v_, 1, e, MPFR_RNDN);
        return r;
    }

    Prec prec() const { return mpfr_get_prec(v_); }
    // Raises or lowers storage precision, preserving the value (rounding if lowered).
    Real at_prec(Prec p) const {
        Real r(p);
        mpfr_set(r.v_, v_, MPFR_RNDN);
        return r;
    }

    mpfr_ptr raw() { return v_; }
    mpfr_srcptr raw() const { return v_; }

    bool is_nan() const { return mpfr_nan_p(v_) != 0; }
    bool is_zero() const { return mpfr_zero_p(v_) != 0; }
    bool is_integer() const { return mpfr_integer_p(v_) != 0; }
    int sign() const { return mpfr_sgn(v_); }

    double to_double() const { return mpfr_get_d(v_, MPFR_RNDN); }
    long to_long() const { return mpfr_get_si(v_, MPFR_RNDN); }
    // Decimal string with enough digits to round-trip at this precision.
    std::string str(int digits = 0) const {
        char* s = nullptr;
        int d = digits > 0 ? digits : (int)(mpfr_get_prec(v_) * 0.3010) + 3;
        if (mpfr_asprintf(&s, "%.*Rg", d, v_) < 0) return "<fmt-error>";
        std::string out(s);
        mpfr_free_str(s);
        return out;
    }

    friend Real operator-(const Real& a) { Real r(a.prec()); mpfr_neg(r.v_, a.v_, MPFR_RNDN); return r; }

#define SIGMALAB_BINOP(op, fn)                                                   \
    friend Real operator op(const Real& a, const Real& b) {                      \
        Real r(a.prec() > b.prec() ? a.prec() : b.prec());                       \
        fn(r.v_, a.v_, b.v_, MPFR_RNDN);                                         \
        return r;                                                                \
    }
    SIGMALAB_BINOP(+, mpfr_add)
    SIGMALAB_BINOP(-, mpfr_sub)
    SIGMALAB_BINOP(*, mpfr_mul)
    SIGMALAB_BINOP(/, mpfr_div)
#undef SIGMALAB_BINOP

#define SIGMALAB_SIOP(op, fn, rfn)                                               \
    friend Real operator op(const Real& a, long b) {                             \
        Real r(a.prec());                                                        \
        fn(r.v_, a.v_, b, MPFR_RNDN);                                            \
        return r;                                                                \
    }                                                                            \
    friend Real operator op(long a, const Real& b) {                             \
        Real r(b.prec());                                                        \
        rfn;                                                                     \
        return r;                                                                \
    }
    SIGMALAB_SIOP(+, mpfr_add_si, mpfr_add_si(r.v_, b.v_, a, MPFR_RNDN))
    SIGMALAB_SIOP(-, mpfr_sub_si, mpfr_si_sub(r.v_, a, b.v_, MPFR_RNDN))
    SIGMALAB_SIOP(*, mpfr_mul_si, mpfr_mul_si(r.v_, b.v_, a, MPFR_RNDN))
    SIGMALAB_SIOP(/, mpfr_div_si, mpfr_si_div(r.v_, a, b.v_, MPFR_RNDN))
#undef SIGMALAB_SIOP

    Real& operator+=(const Real& b) { return *this = *this + b; }
    Real& operator-=(const Real& b) { return *this = *this - b; }
    Real& operator*=(const Real& b) { return *this = *this * b; }
    Real& operator/=(const Real& b) { return *this = *this / b; }

    friend bool operator==(const Real& a, const Real& b) { return mpfr_equal_p(a.v_, b.v_) != 0; }
    friend bool operator!=(const Real& a, const Real& b) { return !(a == b); }
    friend bool operator<(const Real& a, const Real& b) { return mpfr_less_p(a.v_, b.v_) != 0; }
    friend bool operator<=(const Real& a, const Real& b) { return mpfr_lessequal_p(a.v_, b.v_) != 0; }
    friend bool operator>(const Real& a, const Real& b) { return mpfr_greater_p(a.v_, b.v_) != 0; }
    friend bool operator>=(const Real& a, const Real& b) { return mpfr_greaterequal_p(a.v_, b.v_) != 0; }
    friend bool operator<(const Real& a, long b) { return mpfr_cmp_si(a.v_, b) < 0; }
    friend bool operator>(const Real& a, long b) { return mpfr_cmp_si(a.v_, b) > 0; }
    friend bool operator<=(const Real& a, long b) { return mpfr_cmp_si(a.v_, b) <= 0; }
    friend bool operator>=(const Real& a, long b) { return mpfr_cmp_si(a.v_, b) >= 0; }
    friend bool operator==(const Real& a, long b) { return mpfr_cmp_si(a.v_, b) == 0; }

  private:
    mpfr_t v_;
};

#define SIGMALAB_UNFN(name, fn)                                                  \
    inline Real name(const Real& a) {                                            \
        Real r(a.prec());                                                        \
        fn(r.raw(), a.raw(), MPFR_RNDN);                                         \
        return r;                                                                \
    }
SIGMALAB_UNFN(abs, mpfr_abs)
SIGMALAB_UNFN(sqrt, mpfr_sqrt)
SIGMALAB_UNFN(exp, mpfr_exp)
SIGMALAB_UNFN(log, mpfr_log)
SIGMALAB_UNFN(log2, mpfr_log2)
SIGMALAB_UNFN(sin, mpfr_sin)
SIGMALAB_UNFN(cos, mpfr_cos)
SIGMALAB_UNFN(tan, mpfr_tan)
SIGMALAB_UNFN(atan, mpfr_atan)
SIGMALAB_UNFN(sinh, mpfr_sinh)
SIGMALAB_UNFN(cosh, mpfr_cosh)
SIGMALAB_UNFN(gamma_mpfr, mpfr_gamma)    // real-argument Gamma (MPFR's own)
SIGMALAB_UNFN(lngamma_mpfr, mpfr_lngamma)
#undef SIGMALAB_UNFN

inline Real floor(const Real& a) { Real r(a.prec()); mpfr_floor(r.raw(), a.raw()); return r; }
inline Real ceil(const Real& a) { Real r(a.prec()); mpfr_ceil(r.raw(), a.raw()); return r; }
inline Real trunc(const Real& a) { Real r(a.prec()); mpfr_trunc(r.raw(), a.raw()); return r; }
// Nearest integer, halfway cases away from zero.
inline Real round(const Real& a) { Real r(a.prec()); mpfr_round(r.raw(), a.raw()); return r; }

inline Real atan2(const Real& y, const Real& x) {
    Real r(y.prec() > x.prec() ? y.prec() : x.prec());
    mpfr_atan2(r.raw(), y.raw(), x.raw(), MPFR_RNDN);
    return r;
}
inline Real pow(const Real& a, const Real& b) {
    Real r(a.prec() > b.prec() ? a.prec() : b.prec());
    mpfr_pow(r.raw(), a.raw(), b.raw(), MPFR_RNDN);
    return r;
}
inline Real pow(const Real& a, long e) {
    Real r(a.prec());
    mpfr_pow_si(r.raw(), a.raw(), e, MPFR_RNDN);
    return r;
}
// Principal k-th root of a nonnegative value.
inline Real rootn(const Real& a, unsigned long k) {
    Real r(a.prec());
    mpfr_rootn_ui(r.raw(), a.raw(), k, MPFR_RNDN);
    return r;
}
inline Real hypot(const Real& a, const Real& b) {
    Real r(a.prec() > b.prec() ? a.prec() : b.prec());
    mpfr_hypot(r.raw(), a.raw(), b.raw(), MPFR_RNDN);
    return r;
}
inline Real ldexp(const Real& a, long e) {
    Real r(a.prec());
    mpfr_mul_2si(r.raw(), a.raw(), e, MPFR_RNDN);
    return r;
}
inline Real min(const Real& a, const Real& b) { return a < b ? a : b; }
inline Real max(const Real& a, const Real& b) { return a > b ? a : b; }
inline void sin_cos(Real& s, Real& c, const Real& a) {
    s = Real(a.prec());
    c = Real(a.prec());
    mpfr_sin_cos(s.raw(), c.raw(), a.raw(), MPFR_RNDN);
}

} // namespace sigmalab
