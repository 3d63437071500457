#include "smtrace/qseries.hpp"

#include <algorithm>

namespace smtrace {

void LaurentSeries::normalize() {
    std::size_t lo = 0;
    while (lo < coef_.size() && coef_[lo] == 0) ++lo;
    if (lo) {
        coef_.erase(coef_.begin(), coef_.begin() + static_cast<long>(lo));
        lead_ += static_cast<long long>(lo);
    }
    while (!coef_.empty() && coef_.back() == 0) coef_.pop_back();
    if (lead_ + static_cast<long long>(coef_.size()) > trunc_)
        coef_.resize(static_cast<std::size_t>(trunc_ - lead_));
    if (coef_.empty()) lead_ = 0;
}

LaurentSeries LaurentSeries::zero(long long trunc) {
    LaurentSeries s;
    s.trunc_ = trunc;
    return s;
}

LaurentSeries LaurentSeries::monomial(const Rational& c, long long exponent, long long trunc) {
    LaurentSeries s;
    s.trunc_ = trunc;
    if (c != 0 && exponent < trunc) {
        s.lead_ = exponent;
        s.coef_.push_back(c);
    }
    return s;
}

LaurentSeries LaurentSeries::eta(long long k, long long trunc) {
    // x^k * sum_j (-1)^j q^(k j(3j-1)/2), generalized pentagonal exponents
    LaurentSeries s;
    s.trunc_ = trunc;
    s.lead_ = k;
    if (k >= trunc) return s;
    s.coef_.assign(static_cast<std::size_t>(trunc - k), Rational(0));
    s.coef_[0] = 1;
    for (long long j = 1;; ++j) {
        long long g1 = j * (3 * j - 1) / 2, g2 = j * (3 * j + 1) / 2;
        long long e1 = 24 * k * g1, e2 = 24 * k * g2;
        if (k + e1 >= trunc && k + e2 >= trunc) break;
        Rational sign((j % 2) ? -1 : 1);
        if (k + e1 < trunc) s.coef_[static_cast<std::size_t>(e1)] = sign;
        if (k + e2 < trunc) s.coef_[static_cast<std::size_t>(e2)] = sign;
    }
    s.normalize();
    return s;
}

Rational LaurentSeries::coefficient(long long exponent) const {
    if (exponent >= trunc_)
        throw InputError("LaurentSeries: coefficient beyond truncation order");
    long long i = exponent - lead_;
    if (is_zero() || i < 0 || i >= static_cast<long long>(coef_.size())) return 0;
    return coef_[static_cast<std::size_t>(i)];
}

LaurentSeries& LaurentSeries::operator+=(const LaurentSeries& o) {
    long long trunc = std::min(trunc_, o.trunc_);
    long long lead = std::min(is_zero() ? trunc : lead_, o.is_zero() ? trunc : o.lead_);
    long long hi = std::max(is_zero() ? lead : lead_ + static_cast<long long>(coef_.size()),
                            o.is_zero() ? lead : o.lead_ + static_cast<long long>(o.coef_.size()));
    hi = std::min(hi, trunc);
    std::vector<Rational> out;
    if (lead < hi) {
        out.assign(static_cast<std::size_t>(hi - lead), Rational(0));
        for (std::size_t i = 0; i < coef_.size(); ++i) {
            long long e = lead_ + static_cast<long long>(i);
            if (e < trunc) out[static_cast<std::size_t>(e - lead)] = coef_[i];
        }
        for (std::size_t i = 0; i < o.coef_.size(); ++i) {
            long long e = o.lead_ + static_cast<long long>(i);
            if (e < trunc) out[static_cast<std::size_t>(e - lead)] += o.coef_[i];
        }
    }
    lead_ = lead;
    trunc_ = trunc;
    coef_ = std::move(out);
    normalize();
    return *this;
}

LaurentSeries& LaurentSeries::operator-=(const LaurentSeries& o) {
    LaurentSeries neg = o;
    for (auto& c : neg.coef_) c = -c;
    return *this += neg;
}

LaurentSeries operator*(const LaurentSeries& a, const LaurentSeries& b) {
    if (a.is_zero() || b.is_zero()) {
        // 0 * (series with a pole) is only known modulo the shifted order
        long long trunc;
        if (a.is_zero() && b.is_zero()) trunc = std::min(a.trunc_, b.trunc_);
        else if (a.is_zero()) trunc = a.trunc_ + b.lead_;
        else trunc = b.trunc_ + a.lead_;
        return LaurentSeries::zero(trunc);
    }
    long long lead = a.lead_ + b.lead_;
    long long trunc = std::min(a.trunc_ + b.lead_, b.trunc_ + a.lead_);
    long long hi = std::min(trunc, lead + static_cast<long long>(a.coef_.size())
                                        + static_cast<long long>(b.coef_.size()) - 1);
    LaurentSeries s;
    s.lead_ = lead;
    s.trunc_ = trunc;
    if (lead < hi) {
        s.coef_.assign(static_cast<std::size_t>(hi - lead), Rational(0));
        for (std::size_t i = 0; i < a.coef_.size(); ++i) {
            if (a.coef_[i] == 0) continue;
            for (std::size_t j = 0; j < b.coef_.size(); ++j) {
                std::size_t k = i + j;
                if (static_cast<long long>(k) >= hi - lead) break;
                s.coef_[k] += a.coef_[i] * b.coef_[j];
            }
        }
    }
    s.normalize();
    return s;
}

LaurentSeries LaurentSeries::inverse() const {
    if (is_zero())
        throw InputError("LaurentSeries: cannot invert the zero series");
    long long n = trunc_ - lead_;  // relative precision carries over
    if (coef_.size() == 1)         // exact monomial
        return monomial(1 / coef_[0], -lead_, trunc_ - 2 * lead_);
    if (n > (1LL << 22)) throw InputError("LaurentSeries: inverse precision too large");
    LaurentSeries s;
    s.lead_ = -lead_;
    s.trunc_ = -lead_ + n;
    s.coef_.assign(static_cast<std::size_t>(n), Rational(0));
    const Rational& a0 = coef_[0];
    s.coef_[0] = 1 / a0;
    for (long long i = 1; i < n; ++i) {
        Rational acc = 0;
        for (long long j = 1; j <= i; ++j) {
            if (j < static_cast<long long>(coef_.size()))
                acc += coef_[static_cast<std::size_t>(j)] * s.coef_[static_cast<std::size_t>(i - j)];
        }
        s.coef_[static_cast<std::size_t>(i)] = -acc / a0;
    }
    s.normalize();
    return s;
}

LaurentSeries LaurentSeries::pow(long long e) const {
    if (e < 0) return inverse().pow(-e);
    if (e == 0) return monomial(1, 0, is_zero() ? trunc_ : trunc_ - lead_);
    LaurentSeries base = *this;
    LaurentSeries result;
    bool have = false;
    long long n = e;
    while (n) {
        if (n & 1) {
            result = have ? result * base : base;
            have = true;
        }
        n >>= 1;
        if (n) base = base * base;
    }
    return result;
}

bool LaurentSeries::q_integral() const {
    for (std::size_t i = 0; i < coef_.size(); ++i)
        if (coef_[i] != 0 && (((lead_ + static_cast<long long>(i)) % 24) + 24) % 24 != 0)
            return false;
    return true;
}

}  // namespace smtrace
