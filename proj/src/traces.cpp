#include "smtrace/traces.hpp"

#include <algorithm>
#include <cmath>
#include <thread>
#include <utility>

namespace smtrace {
namespace {

bool is_prime_small(long long p) {
    if (p < 2) return false;
    for (long long d = 2; d * d <= p; ++d)
        if (p % d == 0) return false;
    return true;
}

void validate_level_prime(long long p) {
    if (!is_prime_small(p)) throw InputError("level p must be prime");
}

long long resolve_beta(std::uint64_t D, long long p, std::optional<long long> beta) {
    if (beta) {
        Int lhs = Int(*beta) * *beta + D;
        if (*beta < 0 || *beta >= 2 * p || lhs % (4 * p) != 0)
            throw InputError("beta^2 = -D (mod 4p) fails for the given beta");
        return *beta;
    }
    auto b = find_beta(D, p);
    if (!b) throw InputError("no beta with beta^2 = -D (mod 4p) exists; the level class set is empty");
    return *b;
}

bool beta_halves(long long p, long long beta) {
    long long r = ((beta % (2 * p)) + 2 * p) % (2 * p);
    return r == 0 || r == p;
}

// One series term a_m * S_D(m, c) * sinh(4 pi m sqrt(D) / c).
struct TermSpec {
    std::uint64_t m;
    Rational coeff;
};

void validate_checkpoints(const std::vector<std::uint64_t>& checkpoints, std::uint64_t c_max) {
    for (std::size_t i = 0; i < checkpoints.size(); ++i) {
        if (checkpoints[i] == 0 || checkpoints[i] > c_max)
            throw InputError("checkpoints must lie in [1, C_max]");
        if (i && checkpoints[i] <= checkpoints[i - 1])
            throw InputError("checkpoints must be strictly increasing");
    }
}

// Shared driver for both exact formulas: sums, in strictly increasing c with
// c = step, 2*step, ..., <= c_max, the terms
//   sum_m coeff_m * S_D(m, c) * sinh(4 pi m sqrt(D) / c)
// on top of the exact rational class term. Workers may compute disjoint
// contiguous c-chunks concurrently; every term is a pure function of (D, c),
// and the reduction is a single ordered pass, so results are bit-identical
// to a sequential run.
ConvergenceReport run_series(std::uint64_t D, std::uint64_t step, const std::vector<TermSpec>& specs,
                             const Rational& class_term, std::uint64_t c_max,
                             const std::vector<std::uint64_t>& checkpoints,
                             const PrecisionContext& ctx, unsigned jobs) {
    validate_checkpoints(checkpoints, c_max);
    std::uint64_t m_max = 1;
    for (const auto& s : specs) m_max = std::max(m_max, s.m);
    PrecisionContext work(ctx.bits + sinh_guard_bits(D, m_max, step), ctx.guard);
    // All storage is allocated at the elevated precision so assignments from
    // the workers do not round.
    ScopedPrecision sp(work.working_bits());

    std::vector<std::uint64_t> cs;
    for (std::uint64_t c = step; c <= c_max; c += step) cs.push_back(c);
    std::vector<Real> terms(cs.size());

    SpfSieve sieve(static_cast<std::uint32_t>(std::max<std::uint64_t>(c_max, 2)));

    auto worker = [&](std::size_t lo, std::size_t hi) {
        ScopedPrecision sp(work.working_bits());
        Real pi4_sqrtD = 4 * const_pi() * sqrt(Real(D));
        for (std::size_t i = lo; i < hi; ++i) {
            std::uint64_t c = cs[i];
            CongruenceRootSet rs = solve_quadratic_congruence(D, c, sieve);
            Real t(0);
            if (!rs.roots.empty()) {
                for (const auto& s : specs) {
                    Real sal = salie_sum_from_roots(rs, s.m, work);
                    if (sal == 0) continue;
                    t += Real(s.coeff) * sal * sinh(Real(s.m) * pi4_sqrtD / Real(c));
                }
            }
            terms[i] = t;
        }
    };

    unsigned nthreads = std::max(1u, jobs);
    if (nthreads <= 1 || cs.size() < 64) {
        worker(0, cs.size());
    } else {
        nthreads = std::min<unsigned>(nthreads, static_cast<unsigned>(cs.size()));
        std::vector<std::thread> pool;
        std::size_t chunk = (cs.size() + nthreads - 1) / nthreads;
        for (unsigned t = 0; t < nthreads; ++t) {
            std::size_t lo = t * chunk, hi = std::min(cs.size(), lo + chunk);
            if (lo < hi) pool.emplace_back(worker, lo, hi);
        }
        for (auto& th : pool) th.join();
    }

    Real class_real(class_term);
    std::vector<Real> partials(cs.size());
    {
        Real acc = class_real;
        for (std::size_t i = 0; i < cs.size(); ++i) {
            acc += terms[i];
            partials[i] = acc;
        }
    }

    auto window_mean = [&](std::size_t k) -> Real {  // over partials[0..k)
        if (k == 0) return class_real;
        std::size_t w = std::max<std::size_t>(1, k / 4);  // trailing 25% of terms
        Real s(0);
        for (std::size_t j = k - w; j < k; ++j) s += partials[j];
        return s / Real(static_cast<unsigned long>(w));
    };

    ConvergenceReport report;
    report.class_term = class_term;
    for (std::uint64_t C : checkpoints) {
        std::size_t k = static_cast<std::size_t>(
            std::upper_bound(cs.begin(), cs.end(), C) - cs.begin());
        Checkpoint cp;
        cp.c = C;
        cp.raw = k ? partials[k - 1] : class_real;
        cp.windowed = window_mean(k);
        report.checkpoints.push_back(std::move(cp));
    }
    report.final_raw = cs.empty() ? class_real : partials.back();
    report.final_windowed = window_mean(cs.size());
    return report;
}

}  // namespace

unsigned sinh_guard_bits(std::uint64_t D, std::uint64_t m, std::uint64_t c_min) {
    double arg = 4.0 * 3.141592653589793 * static_cast<double>(m)
                 * std::sqrt(static_cast<double>(D)) / static_cast<double>(c_min);
    return static_cast<unsigned>(std::ceil(arg / 0.6931471805599453));
}

DirectTrace trace_direct(const TraceQuery& q) {
    validate_discriminant(q.D);
    DirectTrace out;
    switch (q.level.kind) {
        case GroupKind::Gamma1:
            out.classes = enumerate_gamma1_classes(q.D);
            break;
        case GroupKind::Gamma0: {
            validate_level_prime(q.level.p);
            long long beta = resolve_beta(q.D, q.level.p, q.level.beta);
            out.classes = enumerate_level_classes(q.D, q.level.p, beta);
            break;
        }
        case GroupKind::Gamma0Star:
            validate_level_prime(q.level.p);
            resolve_beta(q.D, q.level.p, std::nullopt);  // ensure the set is non-empty
            out.classes = enumerate_star_classes(q.D, q.level.p);
            break;
    }

    ScopedPrecision sp(q.prec.working_bits());
    Complex acc(Real(0));
    for (std::size_t i = 0; i < out.classes.reps.size(); ++i) {
        Complex z = cm_point(out.classes.reps[i], q.prec);
        Complex v = q.f ? eval_expr(*q.f, z, q.prec) : j_normalized(z, q.prec);
        acc += Real(out.classes.weights[i]) * v;
    }

    Real tol = ldexp(Real(1), -static_cast<int>(q.prec.bits / 2));
    if (abs(acc.im) >= tol * (1 + abs(acc.re)))
        throw PrecisionError("trace_direct: imaginary part failed to cancel");
    out.value = acc.re;

    Real sixth = round(6 * acc.re);
    if (abs(acc.re - sixth / 6) < Real("1e-15") * (1 + abs(acc.re)))
        out.rounded = Rational(sixth.convert_to<Int>(), 6);
    return out;
}

Real trace_star_from_beta(const Real& t, std::uint64_t D, long long p, long long beta) {
    validate_discriminant(D);
    validate_level_prime(p);
    return beta_halves(p, beta) ? Real(t / 2) : t;
}

Rational trace_star_from_beta(const Rational& t, std::uint64_t D, long long p, long long beta) {
    validate_discriminant(D);
    validate_level_prime(p);
    return beta_halves(p, beta) ? t / 2 : t;
}

ConvergenceReport duke_series(std::uint64_t D, std::uint64_t c_max,
                              const std::vector<std::uint64_t>& checkpoints,
                              const PrecisionContext& ctx, unsigned jobs) {
    validate_discriminant(D);
    Rational class_term = -24 * hurwitz_class_number(D);
    return run_series(D, 4, {{1, Rational(1)}}, class_term, c_max, checkpoints, ctx, jobs);
}

ConvergenceReport theorem1_series(const PrincipalPart& pp, std::uint64_t D, long long p,
                                  long long beta, std::uint64_t c_max,
                                  const std::vector<std::uint64_t>& checkpoints,
                                  const PrecisionContext& ctx, unsigned jobs) {
    validate_discriminant(D);
    validate_level_prime(p);
    resolve_beta(D, p, beta);
    if (pp.N < 1) throw InputError("theorem1_series: principal part must have a pole (N >= 1)");
    if (pp.a0 != 0)
        throw InputError("theorem1_series: nonzero constant term at i-infinity; the exact "
                         "formula is only applied with a0 = 0 -- shift f by -a0 first and "
                         "add a0 * H_p*(D) to the result");

    Rational h_star = class_number_star(D, p);
    Rational class_term = 0;
    std::vector<TermSpec> specs;
    for (long long m = 1; m <= pp.N; ++m) {
        Rational am = pp.coefficient(m);
        if (am == 0) continue;
        class_term += am * c_m_constant(static_cast<std::uint64_t>(m), static_cast<std::uint64_t>(p))
                      * h_star;
        specs.push_back({static_cast<std::uint64_t>(m), am});
    }
    return run_series(D, 4 * static_cast<std::uint64_t>(p), specs, class_term, c_max, checkpoints,
                      ctx, jobs);
}

Comparison compare(const Real& direct, const ConvergenceReport& report) {
    Comparison out;
    Real denom = abs(direct);
    bool have_prev = false;
    Real prev;
    for (const Checkpoint& cp : report.checkpoints) {
        CheckpointDiscrepancy d;
        d.c = cp.c;
        d.raw_abs = abs(cp.raw - direct);
        d.windowed_abs = abs(cp.windowed - direct);
        d.raw_rel = denom > 0 ? Real(d.raw_abs / denom) : d.raw_abs;
        d.windowed_rel = denom > 0 ? Real(d.windowed_abs / denom) : d.windowed_abs;
        if (have_prev && d.windowed_abs > prev) out.windowed_monotone = false;
        prev = d.windowed_abs;
        have_prev = true;
        out.at_checkpoints.push_back(std::move(d));
    }
    return out;
}

}  // namespace smtrace
