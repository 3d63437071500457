#pragma once

#include <cstdint>
#include <vector>

#include "smtrace/expr.hpp"
#include "smtrace/precision.hpp"
#include "smtrace/qseries.hpp"
#include "smtrace/types.hpp"

namespace smtrace {

// Lowest Im z at which plain pentagonal-series evaluation of eta is accepted.
// No multiplier-system transformations are implemented; callers below this
// height get a PrecisionError instead of silently degraded output.
inline const double kEtaMinImag = 0.05;

// Dedekind eta via the pentagonal-number series, relative error ~2^-bits.
Complex eta(const Complex& z, const PrecisionContext& ctx);

// Gamma(1) fundamental-domain reduction of z (|Re| <= 1/2, |z| >= 1).
Complex gamma1_reduce(const Complex& z);

// j = E4^3 / Delta after fundamental-domain reduction.
Complex j_invariant(const Complex& z, const PrecisionContext& ctx);

// J = j - 744.
Complex j_normalized(const Complex& z, const PrecisionContext& ctx);

Complex eval_expr(const Expr& f, const Complex& z, const PrecisionContext& ctx);

// Exact q-expansion of an expression through O(q^terms); the coefficient of
// q^n is available for n < terms. Throws when fractional q-powers survive.
struct QExpansion {
    long long lead = 0;   // leading exponent in q units
    long long terms = 0;  // coefficients known for exponents < terms
    LaurentSeries series; // internal 1/24-unit series

    Rational coefficient(long long q_exponent) const {
        return series.coefficient(24 * q_exponent);
    }
};

QExpansion q_expansion(const Expr& f, long long terms);

struct PrincipalPart {
    long long N = 0;                   // pole order, a_N != 0
    std::vector<Rational> a;           // a[m-1] = a_m for m = 1..N
    Rational a0;                       // constant term

    Rational coefficient(long long m) const { return a.at(static_cast<std::size_t>(m - 1)); }
};

// Negative-exponent coefficients plus constant term; error when there is no
// pole at i-infinity (the exact-formula input needs N >= 1).
PrincipalPart principal_part(const Expr& f);

}  // namespace smtrace
