#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "smtrace/arith.hpp"
#include "smtrace/modeval.hpp"
#include "smtrace/precision.hpp"
#include "smtrace/quadform.hpp"

namespace smtrace {

struct Level {
    GroupKind kind = GroupKind::Gamma1;
    long long p = 0;
    std::optional<long long> beta;  // nullopt = auto-select smallest valid

    static Level gamma1() { return {GroupKind::Gamma1, 0, std::nullopt}; }
    static Level gamma0(long long p, std::optional<long long> beta = std::nullopt) {
        return {GroupKind::Gamma0, p, beta};
    }
    static Level star(long long p) { return {GroupKind::Gamma0Star, p, std::nullopt}; }
};

struct TraceQuery {
    std::uint64_t D = 3;
    Level level;
    std::optional<Expr> f;  // nullopt = builtin J
    PrecisionContext prec;
    std::uint64_t c_max = 100000;
    std::vector<std::uint64_t> checkpoints;  // sorted, <= c_max
    unsigned jobs = 1;
};

struct DirectTrace {
    Real value;
    std::optional<Rational> rounded;  // nearest rational with denominator | 6, when within 1e-15
    ClassSet classes;
};

// Weighted sum of f (or J) over the CM points of the query's class set.
DirectTrace trace_direct(const TraceQuery& q);

// The beta-halving rule mapping t_f(D) to t_f*(D).
Real trace_star_from_beta(const Real& t, std::uint64_t D, long long p, long long beta);
Rational trace_star_from_beta(const Rational& t, std::uint64_t D, long long p, long long beta);

struct Checkpoint {
    std::uint64_t c = 0;
    Real raw;       // class term + series partial sum through this c
    Real windowed;  // class term + mean of the trailing 25% of partial sums
};

struct ConvergenceReport {
    Rational class_term;
    std::vector<Checkpoint> checkpoints;
    Real final_raw;
    Real final_windowed;
    std::optional<Real> direct;
    std::optional<Real> discrepancy;  // |final_windowed - direct|
};

// Level-1 exact formula: -24 H(D) + sum over c = 0 mod 4 of
// S_D(c) sinh(4 pi sqrt(D) / c), summed in strictly increasing c.
ConvergenceReport duke_series(std::uint64_t D, std::uint64_t c_max,
                              const std::vector<std::uint64_t>& checkpoints,
                              const PrecisionContext& ctx, unsigned jobs = 1);

// Prime-level exact formula: sum_m a_m [ c_m H_p*(D) +
// sum over c = 0 mod 4p of S_D(m,c) sinh(4 pi m sqrt(D) / c) ].
ConvergenceReport theorem1_series(const PrincipalPart& pp, std::uint64_t D, long long p,
                                  long long beta, std::uint64_t c_max,
                                  const std::vector<std::uint64_t>& checkpoints,
                                  const PrecisionContext& ctx, unsigned jobs = 1);

struct CheckpointDiscrepancy {
    std::uint64_t c = 0;
    Real raw_abs, windowed_abs;
    Real raw_rel, windowed_rel;
};

struct Comparison {
    std::vector<CheckpointDiscrepancy> at_checkpoints;
    bool windowed_monotone = true;  // windowed abs error non-increasing
};

Comparison compare(const Real& direct, const ConvergenceReport& report);

// Extra working bits so that the large leading sinh terms cannot swamp the
// target precision (argument up to 4 pi m sqrt(D) / c_min).
unsigned sinh_guard_bits(std::uint64_t D, std::uint64_t m, std::uint64_t c_min);

}  // namespace smtrace
