#include "smtrace/modeval.hpp"

#include <cmath>

namespace smtrace {
namespace {

// Smallest J with pentagonal exponent j(3j-1)/2 exceeding the cutoff.
long long pentagonal_limit(double y, unsigned bits) {
    double cutoff = (bits + 8) * 0.6931471805599453 / (2 * 3.141592653589793 * y);
    return static_cast<long long>(std::sqrt(2.0 * cutoff / 3.0)) + 2;
}

Complex scale(const Complex& z, long long k) { return {Real(k) * z.re, Real(k) * z.im}; }

}  // namespace

Complex eta(const Complex& z, const PrecisionContext& ctx) {
    if (z.im <= 0) throw InputError("eta: Im z must be positive");
    double y = z.im.convert_to<double>();
    if (y < kEtaMinImag)
        throw PrecisionError("eta: Im z below 0.05, precision not guaranteed");
    ScopedPrecision sp(ctx.working_bits());
    long long jmax = pentagonal_limit(y, ctx.working_bits());
    Complex s(Real(1));
    for (long long j = 1; j <= jmax; ++j) {
        long long g1 = j * (3 * j - 1) / 2, g2 = j * (3 * j + 1) / 2;
        Complex t = e_of(scale(z, g1)) + e_of(scale(z, g2));
        if (j % 2) s -= t;
        else s += t;
    }
    Complex prefactor = e_of(Complex(z.re / 24, z.im / 24));
    return prefactor * s;
}

Complex gamma1_reduce(const Complex& z) {
    if (z.im <= 0) throw InputError("gamma1_reduce: Im z must be positive");
    Complex w = z;
    for (int iter = 0; iter < 10000; ++iter) {
        Real n = round(w.re);
        w.re -= n;
        Real nn = norm(w);
        if (nn < Real("0.999999")) {
            w = Complex(-w.re, w.im) / nn;  // -1/w
        } else {
            return w;
        }
    }
    throw PrecisionError("gamma1_reduce: did not converge");
}

Complex j_invariant(const Complex& z, const PrecisionContext& ctx) {
    if (z.im <= 0) throw InputError("j_invariant: Im z must be positive");
    ScopedPrecision sp(ctx.working_bits());
    Complex w = gamma1_reduce(z);
    Complex q = e_of(w);
    Real qa = abs(q);
    Real cutoff = ldexp(Real(1), -static_cast<int>(ctx.working_bits() + 8));
    // E4 = 1 + 240 sum sigma_3(n) q^n
    Complex e4(Real(1));
    Complex qn(Real(1));
    Real qan = 1;
    for (long long n = 1;; ++n) {
        qn = qn * q;
        qan *= qa;
        Real s3 = 0;
        for (long long d = 1; d * d <= n; ++d) {
            if (n % d) continue;
            s3 += Real(d * d * d);
            long long e = n / d;
            if (e != d) s3 += Real(e * e * e);
        }
        e4 += (240 * s3) * qn;
        if (s3 * qan < cutoff) break;
    }
    Complex delta = cpow(eta(w, ctx), 24);
    return cpow(e4, 3) / delta;
}

Complex j_normalized(const Complex& z, const PrecisionContext& ctx) {
    Complex j = j_invariant(z, ctx);
    return {j.re - 744, j.im};
}

Complex eval_expr(const Expr& f, const Complex& z, const PrecisionContext& ctx) {
    ScopedPrecision sp(ctx.working_bits());
    switch (f->op) {
        case ExprOp::Constant:
            return Complex(Real(f->value));
        case ExprOp::Q:
            return cpow(e_of(z), f->k);
        case ExprOp::Eta:
            return eta(scale(z, f->k), ctx);
        case ExprOp::Add:
            return eval_expr(f->lhs, z, ctx) + eval_expr(f->rhs, z, ctx);
        case ExprOp::Sub:
            return eval_expr(f->lhs, z, ctx) - eval_expr(f->rhs, z, ctx);
        case ExprOp::Mul:
            return eval_expr(f->lhs, z, ctx) * eval_expr(f->rhs, z, ctx);
        case ExprOp::Div: {
            Complex den = eval_expr(f->rhs, z, ctx);
            if (norm(den) == 0) throw PrecisionError("eval_expr: division by zero");
            return eval_expr(f->lhs, z, ctx) / den;
        }
        case ExprOp::Pow:
            return cpow(eval_expr(f->lhs, z, ctx), f->k);
        case ExprOp::Neg:
            return -eval_expr(f->lhs, z, ctx);
    }
    throw InputError("eval_expr: unknown node");
}

namespace {

constexpr long long kExactTrunc = 1LL << 40;  // monomials are known everywhere

LaurentSeries build_series(const Expr& f, long long trunc) {
    switch (f->op) {
        case ExprOp::Constant:
            return LaurentSeries::monomial(f->value, 0, kExactTrunc);
        case ExprOp::Q:
            return LaurentSeries::monomial(1, 24 * f->k, kExactTrunc);
        case ExprOp::Eta:
            return LaurentSeries::eta(f->k, trunc);
        case ExprOp::Add:
            return build_series(f->lhs, trunc) + build_series(f->rhs, trunc);
        case ExprOp::Sub:
            return build_series(f->lhs, trunc) - build_series(f->rhs, trunc);
        case ExprOp::Mul:
            return build_series(f->lhs, trunc) * build_series(f->rhs, trunc);
        case ExprOp::Div:
            return build_series(f->lhs, trunc) * build_series(f->rhs, trunc).inverse();
        case ExprOp::Pow:
            return build_series(f->lhs, trunc).pow(f->k);
        case ExprOp::Neg:
            return LaurentSeries::monomial(-1, 0, kExactTrunc) * build_series(f->lhs, trunc);
    }
    throw InputError("q_expansion: unknown node");
}

}  // namespace

QExpansion q_expansion(const Expr& f, long long terms) {
    if (terms < 1) throw InputError("q_expansion: terms must be >= 1");
    long long need = 24 * (terms - 1) + 1;  // coefficient of q^(terms-1) must be known
    for (long long slack = 512; slack <= (1 << 16); slack *= 4) {
        LaurentSeries s = build_series(f, 24 * terms + slack);
        if (s.trunc() < need) continue;
        if (!s.q_integral())
            throw InputError("q_expansion: non-integral q-exponents remain");
        QExpansion out;
        out.terms = terms;
        out.series = s;
        out.lead = s.is_zero() ? 0 : s.leading_exponent() / 24;
        return out;
    }
    throw PrecisionError("q_expansion: truncation slack exhausted");
}

PrincipalPart principal_part(const Expr& f) {
    QExpansion x = q_expansion(f, 1);
    if (x.series.is_zero() || x.series.leading_exponent() >= 0)
        throw InputError("principal_part: no pole at i-infinity (N >= 1 required)");
    PrincipalPart pp;
    pp.N = -x.series.leading_exponent() / 24;
    for (long long m = 1; m <= pp.N; ++m) pp.a.push_back(x.series.coefficient(-24 * m));
    pp.a0 = x.series.coefficient(0);
    return pp;
}

}  // namespace smtrace
