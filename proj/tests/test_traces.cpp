#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>
#include <vector>

#include "smtrace/traces.hpp"

using namespace smtrace;

namespace {

std::mt19937_64 rng(271828182845904523ULL);

Real tol_bits(int bits) { return ldexp(Real(1), -bits); }

// Random word in the generators T = [1,1;0,1] and V_p = [1,0;p,1]; with
// p = 1 this samples Gamma(1), otherwise Gamma0(p).
UnimodularMatrix random_word(long long p) {
    UnimodularMatrix m;
    for (int i = 0; i < 4; ++i) {
        long long s = static_cast<long long>(rng() % 3) - 1;
        long long t = static_cast<long long>(rng() % 3) - 1;
        m = m * UnimodularMatrix{1, s, 0, 1} * UnimodularMatrix{1, 0, p * t, 1};
    }
    return m;
}

// Recompute the weighted J-sum after replacing each representative by a
// random group-translate; stabilizer weights are class invariants.
Real translated_j_sum(const ClassSet& cs, long long p, const PrecisionContext& ctx) {
    Complex acc(Real(0));
    for (std::size_t i = 0; i < cs.reps.size(); ++i) {
        QuadForm moved = apply(cs.reps[i], random_word(p));
        REQUIRE(moved.a > 0);
        acc += Real(cs.weights[i]) * j_normalized(cm_point(moved, ctx), ctx);
    }
    CHECK(abs(acc.im) < tol_bits(static_cast<int>(ctx.bits / 2)));
    return acc.re;
}

// Gamma0(p)- and Fricke-invariant eta quotient
// (eta(z)/eta(pz))^k + p^(k/2) (eta(pz)/eta(z))^k with k = 24/(p-1).
Expr fricke_invariant_function(long long p) {
    long long k = 24 / (p - 1);
    REQUIRE(k * (p - 1) == 24);
    std::string s = "(eta(1)/eta(" + std::to_string(p) + "))^" + std::to_string(k) + " + "
                    + std::to_string(static_cast<long long>(std::pow(double(p), k / 2.0) + 0.5))
                    + "*(eta(" + std::to_string(p) + ")/eta(1))^" + std::to_string(k);
    return parse_expr(s);
}

}  // namespace

TEST_CASE("t_J anchors and integrality across small discriminants") {
    PrecisionContext lo(192), hi(384);
    for (std::uint64_t D : {3ULL, 4ULL, 7ULL, 8ULL, 11ULL, 12ULL, 15ULL, 16ULL, 19ULL, 20ULL, 23ULL}) {
        TraceQuery q;
        q.D = D;
        q.level = Level::gamma1();
        q.prec = lo;
        DirectTrace t = trace_direct(q);
        REQUIRE(t.rounded.has_value());
        CHECK(denominator(*t.rounded) == 1);
        if (D == 3) CHECK(*t.rounded == -248);
        if (D == 4) CHECK(*t.rounded == 492);
        // independent oracle: same sum at doubled precision
        q.prec = hi;
        DirectTrace t2 = trace_direct(q);
        REQUIRE(t2.rounded.has_value());
        CHECK(*t.rounded == *t2.rounded);
        ScopedPrecision sp(hi.working_bits());
        CHECK(abs(t.value - t2.value) < tol_bits(180));
    }
}

TEST_CASE("trace_direct is invariant under re-choosing class representatives") {
    PrecisionContext ctx(192);
    ScopedPrecision sp(ctx.working_bits());
    for (std::uint64_t D : {23ULL, 31ULL, 47ULL}) {
        TraceQuery q;
        q.D = D;
        q.level = Level::gamma1();
        q.prec = ctx;
        DirectTrace t = trace_direct(q);
        CHECK(abs(t.value - translated_j_sum(t.classes, 1, ctx)) < tol_bits(90));
    }
    // level case, J over Gamma0(p)-classes
    for (long long p : {3LL, 5LL}) {
        std::uint64_t D = (p == 3) ? 23 : 31;  // -D square mod 4p
        TraceQuery q;
        q.D = D;
        q.level = Level::gamma0(p);
        q.prec = ctx;
        DirectTrace t = trace_direct(q);
        CHECK(abs(t.value - translated_j_sum(t.classes, p, ctx)) < tol_bits(90));
    }
}

TEST_CASE("worked example: level-37 traces of f37 at D=148") {
    PrecisionContext ctx(256);
    TraceQuery q;
    q.D = 148;
    q.level = Level::gamma0(37, 0);
    q.f = builtin_f37();
    q.prec = ctx;
    DirectTrace t = trace_direct(q);
    REQUIRE(t.rounded.has_value());
    CHECK(*t.rounded == -4);
    CHECK(t.classes.reps.size() == 2);

    TraceQuery qs = q;
    qs.level = Level::star(37);
    DirectTrace ts = trace_direct(qs);
    REQUIRE(ts.rounded.has_value());
    CHECK(*ts.rounded == -2);

    // Eq-style halving rule agrees with the direct star-orbit sum
    CHECK(trace_star_from_beta(*t.rounded, 148, 37, 0) == *ts.rounded);
    ScopedPrecision sp(ctx.working_bits());
    CHECK(abs(trace_star_from_beta(t.value, 148, 37, 0) - ts.value) < tol_bits(120));
}

TEST_CASE("beta-halving rule vs direct star-orbit sums across levels") {
    PrecisionContext ctx(192);
    ScopedPrecision sp(ctx.working_bits());
    int sampled = 0;
    for (long long p : {3LL, 5LL, 7LL, 13LL}) {
        Expr f = fricke_invariant_function(p);
        for (std::uint64_t D = 3; D <= 60 && sampled < 24; ++D) {
            if (D % 4 != 0 && D % 4 != 3) continue;
            auto beta = find_beta(D, p);
            if (!beta) continue;
            TraceQuery q;
            q.D = D;
            q.level = Level::gamma0(p, *beta);
            q.f = f;
            q.prec = ctx;
            Real t_beta, t_star;
            try {
                t_beta = trace_direct(q).value;
                q.level = Level::star(p);
                t_star = trace_direct(q).value;
            } catch (const PrecisionError&) {
                continue;  // CM point below the eta height floor
            }
            CHECK(abs(trace_star_from_beta(t_beta, D, p, *beta) - t_star)
                  < tol_bits(90) * (1 + abs(t_star)));
            ++sampled;
        }
    }
    CHECK(sampled >= 20);
}

TEST_CASE("trace_star_from_beta branches") {
    CHECK(trace_star_from_beta(Rational(-4), 148, 37, 0) == -2);
    CHECK(trace_star_from_beta(Rational(7), 3, 3, 3) == Rational(7, 2));
    CHECK(trace_star_from_beta(Rational(7), 11, 3, 1) == 7);
    ScopedPrecision sp(128);
    CHECK(trace_star_from_beta(Real(6), 148, 37, 0) == 3);
}

TEST_CASE("duke_series leading structure for D=3") {
    PrecisionContext ctx(192);
    ScopedPrecision sp(ctx.working_bits());
    auto report = duke_series(3, 8, {4, 8}, ctx);
    CHECK(report.class_term == Rational(-8));
    // first term: S_3(4) = -2, argument pi sqrt(3)
    Real expect = Real(-8) - 2 * sinh(const_pi() * sqrt(Real(3)));
    CHECK(abs(report.checkpoints[0].raw - expect) < tol_bits(180));
    CHECK(abs(expect + Real(8) + Real("231.84")) < 2);
}

TEST_CASE("duke_series windowed error is non-increasing toward -248") {
    PrecisionContext ctx(128);
    ScopedPrecision sp(ctx.working_bits());
    auto report = duke_series(3, 100000, {1000, 10000, 100000}, ctx);
    auto cmp = compare(Real(-248), report);
    REQUIRE(cmp.at_checkpoints.size() == 3);
    // Errors decay to a small oscillation floor; near the floor the sign of
    // the windowed error crosses zero, so monotonicity is only required down
    // to the floor.
    Real floor("0.005");
    for (std::size_t i = 1; i < 3; ++i) {
        Real prev = cmp.at_checkpoints[i - 1].windowed_abs;
        CHECK(cmp.at_checkpoints[i].windowed_abs <= (prev > floor ? prev : floor));
    }
    CHECK(cmp.at_checkpoints[2].windowed_abs < Real("0.01"));
}

TEST_CASE("theorem1_series exact class terms") {
    PrecisionContext ctx(128);
    auto pp = principal_part(builtin_f37());
    auto report = theorem1_series(pp, 148, 37, 0, 148, {}, ctx);
    CHECK(report.class_term == Rational(36, 19));

    // N=1, a_1=1, p=5: class term is c_1 * H_5*(D)
    auto qpp = principal_part(parse_expr("q^-1"));
    auto r2 = theorem1_series(qpp, 4, 5, 4, 20, {20}, ctx);
    CHECK(r2.class_term == c_m_constant(1, 5) * class_number_star(4, 5));
    CHECK(c_m_constant(1, 5) == -4);  // -24(1 - 5/6)
}

TEST_CASE("theorem1_series converges to the known star trace") {
    PrecisionContext ctx(128);
    ScopedPrecision sp(ctx.working_bits());
    auto pp = principal_part(builtin_f37());
    auto report = theorem1_series(pp, 148, 37, 0, 400000, {10000, 100000, 400000}, ctx);
    auto cmp = compare(Real(-2), report);
    CHECK(cmp.at_checkpoints[1].windowed_abs <= cmp.at_checkpoints[0].windowed_abs);
    CHECK(cmp.at_checkpoints[2].windowed_abs <= cmp.at_checkpoints[1].windowed_abs);
    CHECK(cmp.at_checkpoints[2].windowed_abs < Real("0.05"));
}

TEST_CASE("theorem1_series rejects a nonzero constant term") {
    PrecisionContext ctx(128);
    auto pp = principal_part(parse_expr("q^-1 + 5"));
    CHECK_THROWS_AS(theorem1_series(pp, 4, 5, 4, 100, {}, ctx), InputError);
}

TEST_CASE("series checkpoints are bit-identical across re-runs and job counts") {
    PrecisionContext ctx(128);
    auto a = duke_series(3, 4000, {400, 4000}, ctx, 1);
    auto b = duke_series(3, 4000, {400, 4000}, ctx, 1);
    auto c = duke_series(3, 4000, {400, 4000}, ctx, 4);
    REQUIRE(a.checkpoints.size() == 2);
    for (std::size_t i = 0; i < a.checkpoints.size(); ++i) {
        CHECK(a.checkpoints[i].raw == b.checkpoints[i].raw);
        CHECK(a.checkpoints[i].windowed == b.checkpoints[i].windowed);
        CHECK(a.checkpoints[i].raw == c.checkpoints[i].raw);
        CHECK(a.checkpoints[i].windowed == c.checkpoints[i].windowed);
    }
    auto pp = principal_part(builtin_f37());
    auto t1 = theorem1_series(pp, 148, 37, 0, 10000, {10000}, ctx, 1);
    auto t2 = theorem1_series(pp, 148, 37, 0, 10000, {10000}, ctx, 3);
    CHECK(t1.checkpoints[0].raw == t2.checkpoints[0].raw);
    CHECK(t1.class_term == t2.class_term);
}

TEST_CASE("compare reports zero discrepancy on matching synthetic input") {
    ScopedPrecision sp(128);
    ConvergenceReport r;
    r.class_term = 1;
    r.checkpoints = {{10, Real(5), Real(5)}, {20, Real(5), Real(5)}};
    auto cmp = compare(Real(5), r);
    CHECK(cmp.windowed_monotone);
    for (const auto& d : cmp.at_checkpoints) {
        CHECK(d.raw_abs == 0);
        CHECK(d.windowed_rel == 0);
    }
}

TEST_CASE("query validation") {
    PrecisionContext ctx(128);
    TraceQuery q;
    q.D = 5;  // 5 mod 4 -> not a discriminant
    q.prec = ctx;
    CHECK_THROWS_AS(trace_direct(q), InputError);
    q.D = 11;
    q.level = Level::gamma0(4);  // not prime
    CHECK_THROWS_AS(trace_direct(q), InputError);
    q.level = Level::gamma0(5, 1);  // 1 != -11 mod 20
    CHECK_THROWS_AS(trace_direct(q), InputError);
    CHECK_THROWS_AS(duke_series(3, 100, {200}, ctx), InputError);   // checkpoint > C_max
    CHECK_THROWS_AS(duke_series(3, 100, {8, 4}, ctx), InputError);  // unsorted
}
