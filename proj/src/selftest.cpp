#include "smtrace/selftest.hpp"

#include <chrono>
#include <functional>
#include <sstream>

#include "smtrace/arith.hpp"
#include "smtrace/quadform.hpp"
#include "smtrace/traces.hpp"

namespace smtrace {
namespace {

struct Check {
    int run = 0;
    std::string first_failure;

    void expect(bool ok, const std::string& what) {
        ++run;
        if (!ok && first_failure.empty()) first_failure = what;
    }
};

void suite_arith(Check& ck) {
    for (std::uint64_t D : {3ULL, 4ULL, 20ULL, 148ULL}) {
        for (std::uint64_t c = 1; c <= 300; ++c) {
            auto fast = solve_quadratic_congruence(D, c);
            auto slow = solve_quadratic_congruence_bruteforce(D, c);
            ck.expect(fast.roots == slow.roots, "congruence roots mismatch");
        }
    }
    PrecisionContext ctx(128);
    ck.expect(salie_sum(3, 1, 4, ctx) == -2, "S_3(4) != -2");
    Rational combo = c_m_constant(3, 37) - 2 * c_m_constant(2, 37) - c_m_constant(1, 37);
    ck.expect(combo == Rational(36, 19), "c_m combination != 36/19");
    for (std::uint64_t n = 1; n <= 60; ++n) {
        long long direct = 0;
        for (std::uint64_t d = 1; d <= n; ++d)
            if (n % d == 0) direct += static_cast<long long>(d) * moebius(n / d);
        ck.expect(ramanujan_sum(n, n) == direct, "u_n(n) divisor identity");
    }
}

void suite_quadforms(Check& ck) {
    for (std::uint64_t D = 3; D <= 200; ++D) {
        if (D % 4 != 0 && D % 4 != 3) continue;
        auto cs = enumerate_gamma1_classes(D);
        ck.expect(cs.weight_sum() == hurwitz_class_number(D), "H(D) != class weight sum");
        for (const auto& q : cs.reps) {
            auto [r, m] = reduce(apply(q, UnimodularMatrix{1, 3, 1, 4}));
            ck.expect(r == q, "reduction not class-invariant");
        }
    }
    for (std::uint64_t D = 3; D <= 100; ++D) {
        if (D % 4 != 0 && D % 4 != 3) continue;
        for (long long p : {3LL, 5LL}) {
            if (!find_beta(D, p)) continue;
            try {
                class_number_star(D, p);  // throws if the two routes disagree
                ck.expect(true, "");
            } catch (const PrecisionError&) {
                ck.expect(false, "H_p*(D) dual-route disagreement");
            }
        }
    }
    ck.expect(class_number_star(148, 37) == 1, "H_37*(148) != 1");
    auto lvl = enumerate_level_classes(148, 37, 0);
    ck.expect(lvl.reps.size() == 2, "level class count at (148,37,0)");
}

void suite_modeval(Check& ck) {
    PrecisionContext ctx(192);
    ScopedPrecision sp(ctx.working_bits());
    Complex ei = eta(Complex(Real(0), Real(1)), ctx);
    ck.expect(abs(ei.re - Real("0.768225422326")) < Real("1e-11"), "eta(i) anchor");
    Complex ji = j_invariant(Complex(Real(0), Real(1)), ctx);
    ck.expect(abs(ji.re - 1728) < Real("1e-40"), "j(i) != 1728");
    auto pp = principal_part(builtin_f37());
    ck.expect(pp.N == 3 && pp.coefficient(3) == 1 && pp.coefficient(2) == -2
                  && pp.coefficient(1) == -1 && pp.a0 == 0,
              "f37 principal part");
    Real s37 = sqrt(Real(37));
    Complex avg = (eval_expr(builtin_f37(), Complex(Real(0), s37 / 37), ctx)
                   + eval_expr(builtin_f37(), Complex(Real(1) / 2, s37 / 74), ctx))
                  / Real(2);
    ck.expect(abs(avg.re + 2) < Real("1e-30"), "f37 CM average != -2");
}

void suite_traces(Check& ck) {
    PrecisionContext ctx(128);
    ScopedPrecision sp(ctx.working_bits());
    TraceQuery q;
    q.D = 3;
    q.prec = ctx;
    auto t3 = trace_direct(q);
    ck.expect(t3.rounded && *t3.rounded == -248, "t_J(3) != -248");
    q.D = 4;
    ck.expect(*trace_direct(q).rounded == 492, "t_J(4) != 492");

    auto a = duke_series(3, 2000, {2000}, ctx);
    auto b = duke_series(3, 2000, {2000}, ctx, 2);
    ck.expect(a.checkpoints[0].raw == b.checkpoints[0].raw, "duke determinism");
    ck.expect(abs(a.checkpoints[0].raw + 248) < 1, "duke partial sum far from -248");

    auto pp = principal_part(builtin_f37());
    auto r = theorem1_series(pp, 148, 37, 0, 4 * 37, {}, ctx);
    ck.expect(r.class_term == Rational(36, 19), "exact class term != 36/19");
}

}  // namespace

std::vector<SuiteResult> run_selftest(const std::string& inject_fault) {
    using Suite = std::pair<const char*, std::function<void(Check&)>>;
    const Suite suites[] = {
        {"arith", suite_arith},
        {"quadforms", suite_quadforms},
        {"modeval", suite_modeval},
        {"traces", suite_traces},
    };
    std::vector<SuiteResult> out;
    for (const auto& [name, fn] : suites) {
        SuiteResult r;
        r.name = name;
        Check ck;
        auto t0 = std::chrono::steady_clock::now();
        try {
            fn(ck);
            if (name == inject_fault) ck.expect(false, "injected fault");
            r.passed = ck.first_failure.empty();
            if (r.passed) {
                std::ostringstream os;
                os << ck.run << " checks";
                r.detail = os.str();
            } else {
                r.detail = ck.first_failure;
            }
        } catch (const std::exception& e) {
            r.passed = false;
            r.detail = std::string("exception: ") + e.what();
        }
        r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        out.push_back(std::move(r));
    }
    return out;
}

bool all_passed(const std::vector<SuiteResult>& results) {
    for (const auto& r : results)
        if (!r.passed) return false;
    return true;
}

}  // namespace smtrace
