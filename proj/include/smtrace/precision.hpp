#pragma once

#include <boost/multiprecision/mpfr.hpp>

#include <cmath>
#include <utility>

#include "smtrace/types.hpp"

namespace smtrace {

// Arbitrary-precision real with runtime-selected precision.
using Real = boost::multiprecision::number<boost::multiprecision::mpfr_float_backend<0>,
                                           boost::multiprecision::et_off>;

struct PrecisionContext {
    unsigned bits = 256;
    unsigned guard = 32;

    PrecisionContext() = default;
    PrecisionContext(unsigned bits_, unsigned guard_ = 32) : bits(bits_), guard(guard_) {
        if (bits < 64 || guard < 16)
            throw InputError("precision context invalid: need bits >= 64, guard >= 16");
    }

    unsigned working_bits() const { return bits + guard; }
};

inline unsigned digits10_for_bits(unsigned bits) {
    return static_cast<unsigned>(bits * 0.30103) + 3;
}

// Sets the thread's default mpfr precision for the lifetime of the object.
class ScopedPrecision {
  public:
    explicit ScopedPrecision(unsigned bits)
        : saved_(Real::default_precision()) {
        Real::default_precision(digits10_for_bits(bits));
    }
    ~ScopedPrecision() { Real::default_precision(saved_); }
    ScopedPrecision(const ScopedPrecision&) = delete;
    ScopedPrecision& operator=(const ScopedPrecision&) = delete;

  private:
    unsigned saved_;
};

Real const_pi();

// Minimal complex type over Real. std::complex is not usable with a
// variable-precision backend, and we only need field ops plus e(z).
struct Complex {
    Real re, im;

    Complex() : re(0), im(0) {}
    Complex(Real r, Real i) : re(std::move(r)), im(std::move(i)) {}
    explicit Complex(const Real& r) : re(r), im(0) {}
    explicit Complex(long v) : re(v), im(0) {}

    Complex operator-() const { return {-re, -im}; }
    Complex& operator+=(const Complex& o) { re += o.re; im += o.im; return *this; }
    Complex& operator-=(const Complex& o) { re -= o.re; im -= o.im; return *this; }
};

inline Complex operator+(const Complex& a, const Complex& b) { return {a.re + b.re, a.im + b.im}; }
inline Complex operator-(const Complex& a, const Complex& b) { return {a.re - b.re, a.im - b.im}; }
inline Complex operator*(const Complex& a, const Complex& b) {
    return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
}
inline Complex operator*(const Real& s, const Complex& a) { return {s * a.re, s * a.im}; }
inline Complex operator/(const Complex& a, const Complex& b) {
    Real n = b.re * b.re + b.im * b.im;
    return {(a.re * b.re + a.im * b.im) / n, (a.im * b.re - a.re * b.im) / n};
}
inline Complex operator/(const Complex& a, const Real& s) { return {a.re / s, a.im / s}; }
inline Real norm(const Complex& a) { return a.re * a.re + a.im * a.im; }
inline Real abs(const Complex& a) { return sqrt(norm(a)); }
inline Complex conj(const Complex& a) { return {a.re, -a.im}; }

Complex cpow(const Complex& base, long long e);

// e(z) = exp(2*pi*i*z) for complex z in the upper half plane (or anywhere).
Complex e_of(const Complex& z);

// e(x) for real x.
Complex e_of(const Real& x);

}  // namespace smtrace
