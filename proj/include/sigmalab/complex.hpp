#pragma once

// Complex numbers over Real. std::complex is only specified for the builtin
// floating types, so we carry our own minimal pair type with the handful of
// transcendental functions the library needs (principal branches).

#include "sigmalab/real.hpp"

namespace sigmalab {

struct Complex {
    Real re, im;

    Complex() = default;
    explicit Complex(Prec prec) : re(prec), im(prec) {}
    Complex(Real r, Real i) : re(std::move(r)), im(std::move(i)) {}
    Complex(long r, Prec prec) : re(r, prec), im(prec) {}
    explicit Complex(const Real& r) : re(r), im(Real(r.prec())) {}

    Prec prec() const { return re.prec() > im.prec() ? re.prec() : im.prec(); }
    Complex at_prec(Prec p) const { return {re.at_prec(p), im.at_prec(p)}; }
    bool is_real() const { return im.is_zero(); }

    friend Complex operator-(const Complex& a) { return {-a.re, -a.im}; }
    friend Complex operator+(const Complex& a, const Complex& b) { return {a.re + b.re, a.im + b.im}; }
    friend Complex operator-(const Complex& a, const Complex& b) { return {a.re - b.re, a.im - b.im}; }
    friend Complex operator*(const Complex& a, const Complex& b) {
        return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
    }
    friend Complex operator*(const Complex& a, const Real& b) { return {a.re * b, a.im * b}; }
    friend Complex operator*(const Real& a, const Complex& b) { return b * a; }
    friend Complex operator*(const Complex& a, long b) { return {a.re * b, a.im * b}; }
    friend Complex operator/(const Complex& a, const Complex& b) {
        Real d = b.re * b.re + b.im * b.im;
        return {(a.re * b.re + a.im * b.im) / d, (a.im * b.re - a.re * b.im) / d};
    }
    friend Complex operator/(const Complex& a, const Real& b) { return {a.re / b, a.im / b}; }
    friend Complex operator/(const Complex& a, long b) { return {a.re / b, a.im / b}; }
    friend Complex operator+(const Complex& a, const Real& b) { return {a.re + b, a.im}; }
    friend Complex operator-(const Complex& a, const Real& b) { return {a.re - b, a.im}; }
    friend Complex operator+(const Real& a, const Complex& b) { return {a + b.re, b.im}; }
    friend Complex operator-(const Real& a, const Complex& b) { return {a - b.re, -b.im}; }
    friend Complex operator-(const Complex& a, long b) { return {a.re - b, a.im}; }
    friend Complex operator-(long a, const Complex& b) { return {a - b.re, -b.im}; }
    friend Complex operator+(const Complex& a, long b) { return {a.re + b, a.im}; }

    Complex& operator+=(const Complex& b) { re += b.re; im += b.im; return *this; }
    Complex& operator-=(const Complex& b) { re -= b.re; im -= b.im; return *this; }
    Complex& operator*=(const Complex& b) { return *this = *this * b; }

    std::string str(int digits = 0) const {
        return re.str(digits) + (im.sign() < 0 ? " - " : " + ") + abs(im).str(digits) + "i";
    }
};

inline Complex conj(const Complex& a) { return {a.re, -a.im}; }
inline Real cabs(const Complex& a) { return hypot(a.re, a.im); }
inline Real arg(const Complex& a) { return atan2(a.im, a.re); }
inline Real norm2(const Complex& a) { return a.re * a.re + a.im * a.im; }

inline Complex cis(const Real& t) {
    Real s(t.prec()), c(t.prec());
    sin_cos(s, c, t);
    return {c, s};
}
inline Complex polar(const Real& r, const Real& t) {
    Complex u = cis(t);
    return {r * u.re, r * u.im};
}
inline Complex cexp(const Complex& z) {
    Real m = exp(z.re);
    return polar(m, z.im);
}
// Principal logarithm.
inline Complex clog(const Complex& z) { return {log(cabs(z)), arg(z)}; }

inline Complex cpow(const Complex& z, long e) {
    Prec p = z.prec();
    Complex acc(1L, p);
    Complex base = z;
    unsigned long n = e < 0 ? (unsigned long)(-e) : (unsigned long)e;
    while (n) {
        if (n & 1) acc *= base;
        base *= base;
        n >>= 1;
    }
    if (e < 0) return Complex(Real(1L, p), Real(p)) / acc;
    return acc;
}
// base^s for positive real base: exp(s log base), exact branch.
inline Complex cpow(const Real& base, const Complex& s) {
    Real lb = log(base);
    return cexp({s.re * lb, s.im * lb});
}
// Principal power z^s.
inline Complex cpow(const Complex& z, const Complex& s) { return cexp(s * clog(z)); }

inline Complex csin(const Complex& z) {
    // sin z = (e^{iz} - e^{-iz}) / 2i
    Complex ez = cexp({-z.im, z.re});
    Complex enz = cexp({z.im, -z.re});
    Complex d = ez - enz;
    return {d.im / 2, -d.re / 2};
}

} // namespace sigmalab
