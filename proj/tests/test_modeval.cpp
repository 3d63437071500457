#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>

#include "smtrace/modeval.hpp"

using namespace smtrace;

namespace {

std::mt19937_64 rng(987654321);

Real urand() {
    return Real(static_cast<double>(rng()) / static_cast<double>(std::mt19937_64::max()));
}

Real tol_bits(int bits) { return ldexp(Real(1), -bits); }

}  // namespace

TEST_CASE("eta at i matches the gamma closed form") {
    PrecisionContext ctx(256);
    ScopedPrecision sp(ctx.working_bits());
    Complex v = eta(Complex(Real(0), Real(1)), ctx);
    // Gamma(1/4) / (2 pi^(3/4))
    Real g;
    {
        Real quarter = Real(1) / 4;
        mpfr_gamma(g.backend().data(), quarter.backend().data(), MPFR_RNDN);
    }
    Real expect = g / (2 * pow(const_pi(), Real(3) / 4));
    CHECK(abs(v.im) < tol_bits(250));
    CHECK(abs(v.re - expect) < tol_bits(250));
    // and the decimal anchor
    CHECK(abs(v.re - Real("0.768225422326")) < Real("1e-11"));
}

TEST_CASE("eta translation law") {
    PrecisionContext ctx(192);
    ScopedPrecision sp(ctx.working_bits());
    Complex z(Real(3) / 10, Real(8) / 10);
    Complex lhs = eta(Complex(z.re + 1, z.im), ctx);
    Complex rhs = e_of(Real(1) / 24) * eta(z, ctx);
    CHECK(abs(lhs - rhs) < tol_bits(185));
}

TEST_CASE("eta self-consistency at doubled precision") {
    PrecisionContext lo(192), hi(384);
    ScopedPrecision sp(hi.working_bits());
    Complex zi(Real(0), Real(1));
    Complex z2i(Real(0), Real(2));
    Complex a = eta(z2i, lo) / eta(zi, lo);
    Complex b = eta(z2i, hi) / eta(zi, hi);
    CHECK(abs(a - b) < tol_bits(185));
}

TEST_CASE("eta domain checks") {
    PrecisionContext ctx(128);
    CHECK_THROWS_AS(eta(Complex(Real(0), Real(-1)), ctx), InputError);
    CHECK_THROWS_AS(eta(Complex(Real(0), Real(1) / 100), ctx), PrecisionError);
}

TEST_CASE("j anchors") {
    PrecisionContext ctx(256);
    ScopedPrecision sp(ctx.working_bits());
    Complex ji = j_invariant(Complex(Real(0), Real(1)), ctx);
    CHECK(abs(ji.re - 1728) < tol_bits(240));
    CHECK(abs(ji.im) < tol_bits(240));
    CHECK(abs(j_normalized(Complex(Real(0), Real(1)), ctx).re - 984) < tol_bits(240));

    Complex rho(Real(1) / 2, sqrt(Real(3)) / 2);
    CHECK(abs(j_invariant(rho, ctx)) < tol_bits(230));
    CHECK(abs(j_normalized(rho, ctx).re / 3 + 248) < tol_bits(228));

    Complex j2i = j_invariant(Complex(Real(0), Real(2)), ctx);
    CHECK(abs(j2i.re - 287496) < tol_bits(230));
}

TEST_CASE("j is Gamma(1)-invariant at random equivalent pairs") {
    PrecisionContext ctx(192);
    ScopedPrecision sp(ctx.working_bits());
    for (int i = 0; i < 20; ++i) {
        Complex z(urand() - Real(1) / 2, Real(6) / 10 + urand());
        // random word in T, S
        Complex w = z;
        for (int k = 0; k < 4; ++k) {
            long long n = static_cast<long long>(rng() % 5) - 2;
            w.re += n;
            Real nn = norm(w);
            w = Complex(-w.re, w.im) / nn;
        }
        Complex a = j_invariant(z, ctx), b = j_invariant(w, ctx);
        CHECK(abs(a - b) / (1 + abs(a)) < tol_bits(static_cast<int>(ctx.bits / 2)));
    }
}

TEST_CASE("precision scaling of eta / j / eval_expr") {
    for (int i = 0; i < 10; ++i) {
        Complex z(urand() - Real(1) / 2, Real(2) / 10 + urand());
        PrecisionContext lo(128), hi(256);
        ScopedPrecision sp(hi.working_bits());
        Complex a = eta(z, lo), b = eta(z, hi);
        CHECK(abs(a - b) / abs(b) < tol_bits(126));
        a = j_invariant(z, lo);
        b = j_invariant(z, hi);
        CHECK(abs(a - b) / (1 + abs(b)) < tol_bits(120));
        a = eval_expr(builtin_f37(), z, lo);
        b = eval_expr(builtin_f37(), z, hi);
        CHECK(abs(a - b) / (1 + abs(b)) < tol_bits(120));
    }
}

TEST_CASE("worked example: average of f37 over the two CM points is -2") {
    PrecisionContext ctx(256);
    ScopedPrecision sp(ctx.working_bits());
    Real s37 = sqrt(Real(37));
    Complex z1(Real(0), s37 / 37);
    Complex z2(Real(1) / 2, s37 / 74);  // (37 + i sqrt(37)) / 74
    Complex avg = (eval_expr(builtin_f37(), z1, ctx) + eval_expr(builtin_f37(), z2, ctx)) / Real(2);
    CHECK(abs(avg.re + 2) < Real("1e-40"));
    CHECK(abs(avg.im) < Real("1e-40"));
}

TEST_CASE("constant expression evaluates to itself") {
    PrecisionContext ctx(128);
    Complex v = eval_expr(parse_expr("5"), Complex(Real(1) / 3, Real(2)), ctx);
    CHECK(v.re == 5);
    CHECK(v.im == 0);
}

TEST_CASE("f37 is Fricke-invariant at random points") {
    PrecisionContext ctx(192);
    ScopedPrecision sp(ctx.working_bits());
    for (int i = 0; i < 10; ++i) {
        // points near the Fricke circle |z| = 1/sqrt(37), where both z and
        // W_37 z stay above the eta height floor
        Real r = (Real(12) + 10 * urand()) / 100;
        Real theta = const_pi() * (Real(70) + 40 * urand()) / 180;
        Complex z(r * cos(theta), r * sin(theta));
        Complex wz = Complex(-z.re, z.im) / (37 * norm(z));  // -1/(37 z)
        REQUIRE(wz.im >= Real(5) / 100);
        Complex a = eval_expr(builtin_f37(), z, ctx);
        Complex b = eval_expr(builtin_f37(), wz, ctx);
        CHECK(abs(a - b) < tol_bits(static_cast<int>(ctx.bits / 2)));
    }
}

TEST_CASE("q-expansion coefficients match Fourier inversion of eval_expr") {
    PrecisionContext ctx(256);
    ScopedPrecision sp(ctx.working_bits());
    auto x = q_expansion(builtin_f37(), 6);
    const int M = 64;
    Real y = Real(1) / 2;
    std::vector<Complex> samples;
    for (int k = 0; k < M; ++k)
        samples.push_back(eval_expr(builtin_f37(), Complex(Real(k) / M, y), ctx));
    for (long long n = 0; n <= 5; ++n) {
        Complex acc(Real(0));
        for (int k = 0; k < M; ++k) {
            // e(-n z_k) = e(-n k / M) * exp(2 pi n y)
            Complex w = e_of(Real(-n * k) / M);
            acc += samples[static_cast<std::size_t>(k)] * w;
        }
        acc = acc / Real(M);
        Real scalefac = exp(2 * const_pi() * n * y);
        acc = scalefac * acc;
        Real expect(x.coefficient(n));
        CHECK(abs(acc.re - expect) < Real("1e-20"));
        CHECK(abs(acc.im) < Real("1e-20"));
    }
}
