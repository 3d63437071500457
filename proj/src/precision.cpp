#include "smtrace/precision.hpp"

namespace smtrace {

Real const_pi() {
    Real pi;
    mpfr_const_pi(pi.backend().data(), MPFR_RNDN);
    return pi;
}

Complex cpow(const Complex& base, long long e) {
    if (e < 0) {
        Complex inv = Complex(Real(1)) / base;
        return cpow(inv, -e);
    }
    Complex acc(Real(1));
    Complex b = base;
    unsigned long long n = static_cast<unsigned long long>(e);
    while (n) {
        if (n & 1) acc = acc * b;
        b = b * b;
        n >>= 1;
    }
    return acc;
}

Complex e_of(const Complex& z) {
    Real two_pi = 2 * const_pi();
    Real r = exp(-two_pi * z.im);
    Real c = cos(two_pi * z.re), s = sin(two_pi * z.re);
    return {r * c, r * s};
}

Complex e_of(const Real& x) {
    Real two_pi = 2 * const_pi();
    return {cos(two_pi * x), sin(two_pi * x)};
}

}  // namespace smtrace
