#pragma once

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "smtrace/precision.hpp"
#include "smtrace/types.hpp"

namespace smtrace {

// Positive definite integral binary quadratic form a x^2 + b xy + c y^2,
// discriminant b^2 - 4ac = -D with D > 0.
struct QuadForm {
    long long a = 1, b = 0, c = 1;

    long long D() const { return 4 * a * c - b * b; }
    bool positive_definite() const { return a > 0 && D() > 0; }
    long long content() const;
    QuadForm primitive_part() const;

    friend bool operator==(const QuadForm&, const QuadForm&) = default;
    friend auto operator<=>(const QuadForm&, const QuadForm&) = default;
};

// Element of SL2(Z), row-major.
struct UnimodularMatrix {
    long long m00 = 1, m01 = 0, m10 = 0, m11 = 1;

    long long det() const { return m00 * m11 - m01 * m10; }
    UnimodularMatrix inverse() const { return {m11, -m01, -m10, m00}; }
    bool in_gamma0(long long p) const { return m10 % p == 0; }

    friend bool operator==(const UnimodularMatrix&, const UnimodularMatrix&) = default;
};

UnimodularMatrix operator*(const UnimodularMatrix& a, const UnimodularMatrix& b);

// Right action: (Q.M)(x, y) = Q(m00 x + m01 y, m10 x + m11 y).
QuadForm apply(const QuadForm& q, const UnimodularMatrix& m);

enum class GroupKind { Gamma1, Gamma0, Gamma0Star };

struct Group {
    GroupKind kind = GroupKind::Gamma1;
    long long p = 0;  // level, unused for Gamma1

    static Group gamma1() { return {GroupKind::Gamma1, 0}; }
    static Group gamma0(long long p) { return {GroupKind::Gamma0, p}; }
    static Group gamma0_star(long long p) { return {GroupKind::Gamma0Star, p}; }
};

// Gauss reduction with transformation certificate: returns (R, M) with
// apply(Q, M) == R and R reduced (|b| <= a <= c, b >= 0 when |b| = a or a = c).
std::pair<QuadForm, UnimodularMatrix> reduce(const QuadForm& q);

bool is_reduced(const QuadForm& q);

// PSL2(Z)-automorphs of Q (matrices M with apply(Q, M) == Q), one
// representative per projective class, identity included. Size 1, 2 or 3.
std::vector<UnimodularMatrix> gamma1_automorphs(const QuadForm& q);

unsigned stabilizer_order(const QuadForm& q, const Group& g);

// Equivalence certificate: M with apply(q1, M) == q2 and M in the group,
// or nullopt. Certificates are re-verified by applying them.
std::optional<UnimodularMatrix> equivalent_under(const QuadForm& q1, const QuadForm& q2,
                                                 const Group& g);

// Fricke involution on forms with p | a: [a,b,c] -> [pc, -b, a/p].
QuadForm fricke(const QuadForm& q, long long p);

struct ClassSet {
    Group group;
    std::uint64_t D = 0;
    long long beta = 0;  // only meaningful for Gamma0
    std::vector<QuadForm> reps;
    std::vector<Rational> weights;  // 1 / |stabilizer|

    Rational weight_sum() const;
};

// Reduced representatives of Q_D / Gamma(1) with Hurwitz weights.
ClassSet enumerate_gamma1_classes(std::uint64_t D);

Rational hurwitz_class_number(std::uint64_t D);

// Smallest beta in [0, 2p) with beta^2 = -D (mod 4p), if any.
std::optional<long long> find_beta(std::uint64_t D, long long p);

// Representatives of Q_{D,p,beta} / Gamma0(p) (forms with p | a,
// b = beta mod 2p) with 1/|Gamma0(p)_Q| weights.
// scan_factor widens the a-bound for the bound-invariance property test.
ClassSet enumerate_level_classes(std::uint64_t D, long long p, long long beta,
                                 int scan_factor = 1);

// Representatives of Q_{D,p} / Gamma0*(p) with 1/|Gamma0*(p)_Q| weights.
ClassSet enumerate_star_classes(std::uint64_t D, long long p);

Rational class_number_level(std::uint64_t D, long long p, long long beta);

// H_p*(D), computed both from the beta-halving relation and by direct
// Fricke-orbit merging; throws PrecisionError if the two routes disagree.
Rational class_number_star(std::uint64_t D, long long p);

// CM point z_Q = (-b + i sqrt(D)) / (2a).
Complex cm_point(const QuadForm& q, const PrecisionContext& ctx);

void validate_discriminant(std::uint64_t D);

}  // namespace smtrace
