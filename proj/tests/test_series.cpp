#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "smtrace/expr.hpp"
#include "smtrace/modeval.hpp"
#include "smtrace/qseries.hpp"

using namespace smtrace;

TEST_CASE("eta series leading terms") {
    // eta(z)/q^(1/24) = 1 - q - q^2 + q^5 + q^7 - ...
    auto s = LaurentSeries::eta(1, 24 * 9);
    CHECK(s.leading_exponent() == 1);
    CHECK(s.coefficient(1) == 1);
    CHECK(s.coefficient(1 + 24) == -1);
    CHECK(s.coefficient(1 + 48) == -1);
    CHECK(s.coefficient(1 + 72) == 0);
    CHECK(s.coefficient(1 + 120) == 1);
    CHECK(s.coefficient(1 + 168) == 1);
}

TEST_CASE("series ring ops") {
    long long T = 200;
    auto a = LaurentSeries::monomial(Rational(2), -24, T);
    auto b = LaurentSeries::monomial(Rational(1, 3), 24, T);
    auto p = a * b;
    CHECK(p.coefficient(0) == Rational(2, 3));
    auto sum = a + b;
    CHECK(sum.coefficient(-24) == 2);
    CHECK(sum.coefficient(24) == Rational(1, 3));
    CHECK((a - a).is_zero());
}

TEST_CASE("inverse is a two-sided inverse") {
    auto s = LaurentSeries::eta(2, 24 * 12);
    auto inv = s.inverse();
    auto one = s * inv;
    CHECK(one.coefficient(0) == 1);
    for (long long e = 1; e < one.trunc(); ++e) CHECK(one.coefficient(e) == 0);
}

TEST_CASE("pow including negative exponents") {
    auto s = LaurentSeries::eta(1, 24 * 14);
    auto p = s.pow(24);          // Delta * (series units)
    CHECK(p.leading_exponent() == 24);
    CHECK(p.coefficient(48) == -24);  // tau(2) = -24
    CHECK(p.coefficient(72) == 252);
    auto r = s.pow(3) * s.pow(-3);
    CHECK(r.coefficient(0) == 1);
    CHECK(s.pow(0).coefficient(0) == 1);
}

TEST_CASE("q_expansion of the level-37 function") {
    auto x = q_expansion(builtin_f37(), 6);
    CHECK(x.lead == -3);
    CHECK(x.coefficient(-3) == 1);
    CHECK(x.coefficient(-2) == -2);
    CHECK(x.coefficient(-1) == -1);
    CHECK(x.coefficient(0) == 0);
}

TEST_CASE("q_expansion trivial quotient") {
    auto f = parse_expr("eta(1)^24 / eta(1)^24");
    auto x = q_expansion(f, 4);
    CHECK(x.coefficient(0) == 1);
    for (long long n = 1; n < 4; ++n) CHECK(x.coefficient(n) == 0);
}

TEST_CASE("q_expansion of (eta(1)/eta(2))^24") {
    auto f = parse_expr("(eta(1)/eta(2))^24");
    auto x = q_expansion(f, 3);
    CHECK(x.lead == -1);
    CHECK(x.coefficient(-1) == 1);
    CHECK(x.coefficient(0) == -24);  // 1/q - 24 + 276 q - ...
    CHECK(x.coefficient(1) == 276);
}

TEST_CASE("non-q-integral expressions are rejected") {
    CHECK_THROWS_AS(q_expansion(parse_expr("eta(1)^1"), 3), InputError);
    CHECK_THROWS_AS(q_expansion(parse_expr("eta(1)^2"), 3), InputError);
    CHECK_NOTHROW(q_expansion(parse_expr("eta(1)^24"), 3));
}

TEST_CASE("principal part extraction") {
    auto pp = principal_part(builtin_f37());
    CHECK(pp.N == 3);
    CHECK(pp.coefficient(1) == -1);
    CHECK(pp.coefficient(2) == -2);
    CHECK(pp.coefficient(3) == 1);
    CHECK(pp.a0 == 0);

    auto qinv = principal_part(parse_expr("q^-1"));
    CHECK(qinv.N == 1);
    CHECK(qinv.coefficient(1) == 1);
    CHECK(qinv.a0 == 0);

    // constant term is reported, not hidden
    auto shifted = principal_part(parse_expr("q^-1 + 5"));
    CHECK(shifted.a0 == 5);

    CHECK_THROWS_AS(principal_part(parse_expr("5")), InputError);
    CHECK_THROWS_AS(principal_part(parse_expr("eta(1)^24")), InputError);
}

TEST_CASE("parser errors carry position") {
    try {
        parse_expr("eta(1) +\n* 2");
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        CHECK(e.line == 2);
        CHECK(e.column == 1);
    }
    CHECK_THROWS_AS(parse_expr("eta(0)"), ParseError);
    CHECK_THROWS_AS(parse_expr("eta(1"), ParseError);
    CHECK_THROWS_AS(parse_expr("2 +"), ParseError);
}

TEST_CASE("parser round trips the worked example") {
    auto f = parse_expr("(eta(1)/eta(37))^2 - 2 + 37*(eta(37)/eta(1))^2");
    auto x = q_expansion(f, 2);
    CHECK(x.coefficient(-3) == 1);
    CHECK(x.coefficient(0) == 0);
}
