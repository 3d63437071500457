#pragma once

#include <cstdint>
#include <vector>

#include "smtrace/types.hpp"

namespace smtrace {

// Exact Laurent series in x = q^(1/24). Exponents are kept in 1/24 units so
// that eta prefactors q^(k/24) stay exact; a final result is only accepted
// when every surviving exponent is divisible by 24.
//
// Truncation semantics: coefficients at exponents >= trunc() are unknown
// (the series is correct modulo O(x^trunc)).
class LaurentSeries {
  public:
    LaurentSeries() = default;

    // The zero series, known up to O(x^trunc).
    static LaurentSeries zero(long long trunc);
    // c * x^exponent, known up to O(x^trunc).
    static LaurentSeries monomial(const Rational& c, long long exponent, long long trunc);
    // Series of eta(k z) in x units: x^k * prod(1 - q^(kn)), truncated.
    static LaurentSeries eta(long long k, long long trunc);

    bool is_zero() const { return coef_.empty(); }
    long long trunc() const { return trunc_; }
    // Exponent of the first nonzero known coefficient; requires !is_zero().
    long long leading_exponent() const { return lead_; }
    Rational coefficient(long long exponent) const;

    LaurentSeries& operator+=(const LaurentSeries& o);
    LaurentSeries& operator-=(const LaurentSeries& o);
    friend LaurentSeries operator+(LaurentSeries a, const LaurentSeries& b) { return a += b; }
    friend LaurentSeries operator-(LaurentSeries a, const LaurentSeries& b) { return a -= b; }
    friend LaurentSeries operator*(const LaurentSeries& a, const LaurentSeries& b);

    // Multiplicative inverse; requires a nonzero leading coefficient.
    LaurentSeries inverse() const;
    LaurentSeries pow(long long e) const;

    // True when every nonzero coefficient sits at an exponent divisible by 24.
    bool q_integral() const;

  private:
    void normalize();

    long long lead_ = 0;
    long long trunc_ = 0;
    std::vector<Rational> coef_;  // coef_[i] is the coefficient of x^(lead_ + i)
};

}  // namespace smtrace
