#include "smtrace/quadform.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace smtrace {
namespace {

long long floordiv(long long a, long long b) {
    long long q = a / b, r = a % b;
    return (r != 0 && ((r < 0) != (b < 0))) ? q - 1 : q;
}

bool is_prime_ll(long long n) {
    if (n < 2) return false;
    for (long long d = 2; d * d <= n; ++d)
        if (n % d == 0) return false;
    return true;
}

void require_odd_prime(long long p) {
    if (p == 2) throw InputError("p = 2 is unsupported");
    if (!is_prime_ll(p)) throw InputError("p must be an odd prime");
}

const UnimodularMatrix kS{0, -1, 1, 0};

UnimodularMatrix translation(long long k) { return {1, k, 0, 1}; }

}  // namespace

long long QuadForm::content() const {
    return std::gcd(std::gcd(std::llabs(a), std::llabs(b)), std::llabs(c));
}

QuadForm QuadForm::primitive_part() const {
    long long k = content();
    return {a / k, b / k, c / k};
}

UnimodularMatrix operator*(const UnimodularMatrix& a, const UnimodularMatrix& b) {
    return {a.m00 * b.m00 + a.m01 * b.m10, a.m00 * b.m01 + a.m01 * b.m11,
            a.m10 * b.m00 + a.m11 * b.m10, a.m10 * b.m01 + a.m11 * b.m11};
}

QuadForm apply(const QuadForm& q, const UnimodularMatrix& m) {
    long long na = q.a * m.m00 * m.m00 + q.b * m.m00 * m.m10 + q.c * m.m10 * m.m10;
    long long nc = q.a * m.m01 * m.m01 + q.b * m.m01 * m.m11 + q.c * m.m11 * m.m11;
    long long nb = 2 * q.a * m.m00 * m.m01 + q.b * (m.m00 * m.m11 + m.m01 * m.m10)
                 + 2 * q.c * m.m10 * m.m11;
    return {na, nb, nc};
}

bool is_reduced(const QuadForm& q) {
    if (!(std::llabs(q.b) <= q.a && q.a <= q.c)) return false;
    if ((std::llabs(q.b) == q.a || q.a == q.c) && q.b < 0) return false;
    return true;
}

std::pair<QuadForm, UnimodularMatrix> reduce(const QuadForm& q) {
    if (!q.positive_definite()) throw InputError("reduce: form is not positive definite");
    QuadForm f = q;
    UnimodularMatrix m;
    for (;;) {
        // translate b into (-a, a]
        if (f.b > f.a || f.b <= -f.a) {
            long long k = floordiv(f.a - f.b, 2 * f.a);
            UnimodularMatrix t = translation(k);
            f = apply(f, t);
            m = m * t;
        }
        if (f.a > f.c || (f.a == f.c && f.b < 0)) {
            f = apply(f, kS);
            m = m * kS;
            continue;
        }
        break;
    }
    return {f, m};
}

std::vector<UnimodularMatrix> gamma1_automorphs(const QuadForm& q) {
    QuadForm q0 = q.primitive_part();
    long long d0 = q0.D();
    std::vector<std::pair<long long, long long>> tu{{2, 0}};
    if (d0 == 3) {
        tu.push_back({1, 1});
        tu.push_back({-1, 1});
    } else if (d0 == 4) {
        tu.push_back({0, 1});
    }
    std::vector<UnimodularMatrix> out;
    for (auto [t, u] : tu) {
        UnimodularMatrix m{(t - q0.b * u) / 2, -q0.c * u, q0.a * u, (t + q0.b * u) / 2};
        if (m.det() != 1 || apply(q, m) != q)
            throw PrecisionError("gamma1_automorphs: automorph verification failed");
        out.push_back(m);
    }
    return out;
}

unsigned stabilizer_order(const QuadForm& q, const Group& g) {
    switch (g.kind) {
        case GroupKind::Gamma1:
            return static_cast<unsigned>(gamma1_automorphs(q).size());
        case GroupKind::Gamma0: {
            if (q.a % g.p != 0)
                throw InputError("stabilizer_order: p must divide a for Gamma0(p)");
            unsigned n = 0;
            for (const auto& m : gamma1_automorphs(q))
                if (m.in_gamma0(g.p)) ++n;
            return n;
        }
        case GroupKind::Gamma0Star: {
            unsigned n = stabilizer_order(q, Group::gamma0(g.p));
            if (equivalent_under(fricke(q, g.p), q, Group::gamma0(g.p)))
                return 2 * n;
            return n;
        }
    }
    throw InputError("stabilizer_order: unknown group");
}

std::optional<UnimodularMatrix> equivalent_under(const QuadForm& q1, const QuadForm& q2,
                                                 const Group& g) {
    if (q1.D() != q2.D()) throw InputError("equivalent_under: discriminant mismatch");
    auto try_direct = [&](const QuadForm& lhs, bool need_gamma0) -> std::optional<UnimodularMatrix> {
        auto [r1, m1] = reduce(lhs);
        auto [r2, m2] = reduce(q2);
        if (r1 != r2) return std::nullopt;
        for (const auto& s : gamma1_automorphs(r1)) {
            UnimodularMatrix cand = m1 * s * m2.inverse();
            if (apply(lhs, cand) != q2)
                throw PrecisionError("equivalent_under: certificate verification failed");
            if (!need_gamma0 || cand.in_gamma0(g.p)) return cand;
        }
        return std::nullopt;
    };
    switch (g.kind) {
        case GroupKind::Gamma1:
            return try_direct(q1, false);
        case GroupKind::Gamma0:
            return try_direct(q1, true);
        case GroupKind::Gamma0Star: {
            if (auto m = try_direct(q1, true)) return m;
            // Fricke coset: certificate carries W_p(q1) to q2 within Gamma0(p).
            return try_direct(fricke(q1, g.p), true);
        }
    }
    return std::nullopt;
}

QuadForm fricke(const QuadForm& q, long long p) {
    if (q.a % p != 0) throw InputError("fricke: p must divide a");
    return {p * q.c, -q.b, q.a / p};
}

Rational ClassSet::weight_sum() const {
    Rational s = 0;
    for (const auto& w : weights) s += w;
    return s;
}

void validate_discriminant(std::uint64_t D) {
    if (D == 0 || (D % 4 != 0 && D % 4 != 3))
        throw InputError("D must be positive and congruent to 0 or 3 mod 4");
}

ClassSet enumerate_gamma1_classes(std::uint64_t D) {
    validate_discriminant(D);
    long long d = static_cast<long long>(D);
    ClassSet cs;
    cs.group = Group::gamma1();
    cs.D = D;
    for (long long a = 1; 3 * a * a <= d; ++a) {
        for (long long b = -a + 1; b <= a; ++b) {
            if ((b * b + d) % (4 * a) != 0) continue;
            long long c = (b * b + d) / (4 * a);
            if (c < a) continue;
            if (a == c && b < 0) continue;
            QuadForm q{a, b, c};
            cs.reps.push_back(q);
            cs.weights.push_back(Rational(1, stabilizer_order(q, Group::gamma1())));
        }
    }
    return cs;
}

Rational hurwitz_class_number(std::uint64_t D) {
    return enumerate_gamma1_classes(D).weight_sum();
}

std::optional<long long> find_beta(std::uint64_t D, long long p) {
    for (long long beta = 0; beta < 2 * p; ++beta)
        if ((beta * beta + static_cast<long long>(D)) % (4 * p) == 0) return beta;
    return std::nullopt;
}

ClassSet enumerate_level_classes(std::uint64_t D, long long p, long long beta,
                                 int scan_factor) {
    validate_discriminant(D);
    require_odd_prime(p);
    long long d = static_cast<long long>(D);
    beta = ((beta % (2 * p)) + 2 * p) % (2 * p);
    if ((beta * beta + d) % (4 * p) != 0)
        throw InputError("D not a square mod 4p for the given beta");

    // a <= p * ceil(sqrt(D/3)); every Gamma0(p)-orbit of CM points meets
    // Im z >= sqrt(3)/(2p), i.e. a <= p sqrt(D/3) for some representative.
    long long root = static_cast<long long>(std::ceil(std::sqrt(static_cast<double>(D) / 3.0)));
    while (3 * (root - 1) * (root - 1) >= d) --root;  // tighten float error
    while (3 * root * root < d) ++root;
    long long abound = p * root * scan_factor;

    // Scan a <= abound in one b-residue family. The a-bound catches a
    // representative of every Gamma0*(p)-orbit, but a Gamma0(p)-class may
    // only have a low-a representative in its Fricke partner (mirror beta)
    // family, so candidates are the direct scan plus Fricke images of the
    // mirror scan.
    auto scan = [&](long long b_res) {
        std::vector<QuadForm> out;
        for (long long a = p; a <= abound; a += p) {
            long long k = floordiv(b_res + a - 1, 2 * p);
            for (long long b = b_res - 2 * p * k; b <= a; b += 2 * p) {
                if ((b * b + d) % (4 * a) != 0) continue;
                out.push_back({a, b, (b * b + d) / (4 * a)});
            }
        }
        return out;
    };
    std::vector<QuadForm> candidates = scan(beta);
    for (const QuadForm& q : scan((2 * p - beta) % (2 * p)))
        candidates.push_back(fricke(q, p));

    ClassSet cs;
    cs.group = Group::gamma0(p);
    cs.D = D;
    cs.beta = beta;
    for (const QuadForm& q : candidates) {
        bool seen = false;
        for (const auto& rep : cs.reps)
            if (equivalent_under(q, rep, Group::gamma0(p))) { seen = true; break; }
        if (seen) continue;
        cs.reps.push_back(q);
        cs.weights.push_back(Rational(1, stabilizer_order(q, Group::gamma0(p))));
    }
    return cs;
}

ClassSet enumerate_star_classes(std::uint64_t D, long long p) {
    require_odd_prime(p);
    auto beta = find_beta(D, p);
    if (!beta) throw InputError("D not a square mod 4p");
    ClassSet s1 = enumerate_level_classes(D, p, *beta);
    std::vector<QuadForm> all = s1.reps;
    long long beta2 = (2 * p - *beta) % (2 * p);
    if (beta2 != *beta) {
        ClassSet s2 = enumerate_level_classes(D, p, beta2);
        all.insert(all.end(), s2.reps.begin(), s2.reps.end());
    }

    // Merge Gamma0(p)-classes into Gamma0*(p)-orbits via the Fricke involution.
    ClassSet cs;
    cs.group = Group::gamma0_star(p);
    cs.D = D;
    std::vector<bool> used(all.size(), false);
    for (std::size_t i = 0; i < all.size(); ++i) {
        if (used[i]) continue;
        used[i] = true;
        QuadForm w = fricke(all[i], p);
        for (std::size_t j = i + 1; j < all.size(); ++j) {
            if (used[j]) continue;
            if (equivalent_under(w, all[j], Group::gamma0(p))) used[j] = true;
        }
        cs.reps.push_back(all[i]);
        cs.weights.push_back(Rational(1, stabilizer_order(all[i], Group::gamma0_star(p))));
    }
    return cs;
}

Rational class_number_level(std::uint64_t D, long long p, long long beta) {
    return enumerate_level_classes(D, p, beta).weight_sum();
}

Rational class_number_star(std::uint64_t D, long long p) {
    auto beta = find_beta(D, p);
    if (!beta) throw InputError("D not a square mod 4p");
    Rational hp = class_number_level(D, p, *beta);
    bool halved = (*beta % p == 0);  // beta = 0 or p (mod 2p)
    Rational from_relation = halved ? hp / 2 : hp;
    Rational direct = enumerate_star_classes(D, p).weight_sum();
    if (from_relation != direct)
        throw PrecisionError("class_number_star: halving relation and Fricke-orbit sum disagree");
    return direct;
}

Complex cm_point(const QuadForm& q, const PrecisionContext& ctx) {
    if (!q.positive_definite()) throw InputError("cm_point: form is not positive definite");
    ScopedPrecision sp(ctx.working_bits());
    Real two_a = Real(2 * q.a);
    return {Real(-q.b) / two_a, sqrt(Real(q.D())) / two_a};
}

}  // namespace smtrace
