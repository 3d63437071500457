#include "smtrace/arith.hpp"

#include <algorithm>
#include <numeric>

namespace smtrace {
namespace {

using u64 = std::uint64_t;
using u128 = unsigned __int128;

u64 mulmod(u64 a, u64 b, u64 m) { return static_cast<u64>(static_cast<u128>(a) * b % m); }

u64 powmod(u64 b, u64 e, u64 m) {
    u64 r = 1 % m;
    b %= m;
    while (e) {
        if (e & 1) r = mulmod(r, b, m);
        b = mulmod(b, b, m);
        e >>= 1;
    }
    return r;
}

u64 ipow(u64 b, unsigned e) {
    u64 r = 1;
    while (e--) r *= b;
    return r;
}

u64 inv_mod(u64 a, u64 m) {
    long long t = 0, nt = 1;
    long long r = static_cast<long long>(m), nr = static_cast<long long>(a % m);
    while (nr) {
        long long q = r / nr;
        std::swap(t -= q * nt, nt);
        std::swap(r -= q * nr, nr);
    }
    if (t < 0) t += static_cast<long long>(m);
    return static_cast<u64>(t);
}

// Tonelli-Shanks square root of a mod odd prime q; a assumed coprime to q.
std::optional<u64> sqrt_mod_prime(u64 a, u64 q) {
    a %= q;
    if (a == 0) return 0;
    if (powmod(a, (q - 1) / 2, q) != 1) return std::nullopt;
    if (q % 4 == 3) return powmod(a, (q + 1) / 4, q);
    // write q-1 = s * 2^e
    u64 s = q - 1;
    unsigned e = 0;
    while (s % 2 == 0) { s /= 2; ++e; }
    // find a non-residue
    u64 n = 2;
    while (powmod(n, (q - 1) / 2, q) != q - 1) ++n;
    u64 x = powmod(a, (s + 1) / 2, q);
    u64 b = powmod(a, s, q);
    u64 g = powmod(n, s, q);
    unsigned r = e;
    for (;;) {
        u64 t = b;
        unsigned m = 0;
        while (t != 1 && m < r) { t = mulmod(t, t, q); ++m; }
        if (m == 0) return x;
        u64 gs = powmod(g, u64(1) << (r - m - 1), q);
        g = mulmod(gs, gs, q);
        x = mulmod(x, gs, q);
        b = mulmod(b, g, q);
        r = m;
    }
}

// Roots of y^2 = u (mod q^f) for odd prime q, q coprime to u (Hensel lift).
std::vector<u64> unit_roots_odd(u64 u, u64 q, unsigned f, u64 qf) {
    auto r0 = sqrt_mod_prime(u % q, q);
    if (!r0) return {};
    u64 y = *r0;
    u64 mod = q;
    for (unsigned k = 1; k < f; ++k) {
        u64 next = mod * q;
        u64 d = (mulmod(y, y, next) + next - u % next) % next;
        // d is divisible by mod; correct y by d/(2y) mod next
        u64 corr = mulmod(d % next, inv_mod(2 * y % next, next), next);
        y = (y + next - corr) % next;
        mod = next;
    }
    if (y == 0) return {0};
    return {std::min(y, qf - y), std::max(y, qf - y)};
}

// Roots of y^2 = u (mod 2^f), u odd. Hensel fails at 2; explicit case analysis.
std::vector<u64> unit_roots_two(u64 u, unsigned f, u64 qf) {
    u %= qf;
    if (f == 1) return {1};
    if (f == 2) return (u % 4 == 1) ? std::vector<u64>{1, 3} : std::vector<u64>{};
    if (u % 8 != 1) return {};
    u64 y = 1;
    for (unsigned k = 3; k < f; ++k) {
        u64 d = (mulmod(y, y, qf) + qf - u) % qf;
        if ((d >> k) & 1) y += u64(1) << (k - 1);
    }
    u64 h = qf >> 1;
    std::vector<u64> out{y % qf, (qf - y) % qf, (y + h) % qf, (qf - y + h) % qf};
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

// All x mod q^e with x^2 = a (mod q^e).
std::vector<u64> prime_power_roots(u64 q, unsigned e, u64 a) {
    u64 pe = ipow(q, e);
    a %= pe;
    if (a == 0) {
        u64 step = ipow(q, (e + 1) / 2);
        std::vector<u64> out;
        for (u64 x = 0; x < pe; x += step) out.push_back(x);
        return out;
    }
    unsigned j = 0;
    u64 u = a;
    while (u % q == 0) { u /= q; ++j; }
    if (j & 1) return {};
    unsigned f = e - j;
    u64 qf = ipow(q, f);
    std::vector<u64> base = (q == 2) ? unit_roots_two(u % qf, f, qf)
                                     : unit_roots_odd(u % qf, q, f, qf);
    if (base.empty()) return {};
    u64 half = ipow(q, j / 2);
    u64 ymod = pe / half;  // y ranges mod q^(e - j/2)
    std::vector<u64> out;
    for (u64 y : base)
        for (u64 s = 0; s * qf < ymod; ++s)
            out.push_back(half * ((y + s * qf) % ymod) % pe);
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

CongruenceRootSet combine_crt(u64 c, u64 D,
                              const std::vector<std::pair<u64, unsigned>>& factors) {
    CongruenceRootSet rs;
    rs.modulus = c;
    std::vector<u64> roots{0};
    u64 mod = 1;
    for (auto [q, e] : factors) {
        u64 pe = ipow(q, e);
        u64 a = (pe - D % pe) % pe;
        std::vector<u64> rr = prime_power_roots(q, e, a);
        if (rr.empty()) return rs;  // no solution
        std::vector<u64> next;
        next.reserve(roots.size() * rr.size());
        u64 minv = inv_mod(mod % pe, pe);
        for (u64 x : roots)
            for (u64 y : rr) {
                u64 k = mulmod((y + pe - x % pe) % pe, minv, pe);
                next.push_back(x + mod * k);
            }
        roots = std::move(next);
        mod *= pe;
    }
    std::sort(roots.begin(), roots.end());
    rs.roots = std::move(roots);
    return rs;
}

}  // namespace

Factorization factorize(u64 n) {
    if (n == 0) throw InputError("factorize: n must be positive");
    Factorization f;
    f.n = n;
    for (u64 d = 2; d * d <= n; d += (d == 2) ? 1 : 2) {
        if (n % d == 0) {
            unsigned e = 0;
            while (n % d == 0) { n /= d; ++e; }
            f.factors.emplace_back(d, e);
        }
    }
    if (n > 1) f.factors.emplace_back(n, 1);
    return f;
}

SpfSieve::SpfSieve(std::uint32_t limit) : limit_(limit), spf_(limit + 1, 0) {
    for (std::uint32_t i = 2; i <= limit; ++i) {
        if (spf_[i] == 0)
            for (std::uint64_t j = i; j <= limit; j += i)
                if (spf_[j] == 0) spf_[j] = i;
    }
}

Factorization SpfSieve::factorize(std::uint32_t n) const {
    if (n == 0 || n > limit_) throw InputError("SpfSieve: n out of range");
    Factorization f;
    f.n = n;
    while (n > 1) {
        std::uint32_t p = spf_[n];
        unsigned e = 0;
        while (n % p == 0) { n /= p; ++e; }
        f.factors.emplace_back(p, e);
    }
    return f;
}

Int sigma(const Factorization& f, unsigned k) {
    Int s = 1;
    for (auto [p, e] : f.factors) {
        Int pk = pow(Int(p), k ? k : 0);
        if (k == 0) {
            s *= e + 1;
        } else {
            Int term = 1, pw = 1;
            for (unsigned i = 0; i < e; ++i) { pw *= pk; term += pw; }
            s *= term;
        }
    }
    return s;
}

Int sigma(u64 n, unsigned k) { return sigma(factorize(n), k); }

int moebius(u64 n) {
    Factorization f = factorize(n);
    for (auto [p, e] : f.factors)
        if (e > 1) return 0;
    return (f.factors.size() % 2 == 0) ? 1 : -1;
}

std::vector<u64> divisors(u64 n) {
    std::vector<u64> ds{1};
    for (auto [p, e] : factorize(n).factors) {
        std::size_t sz = ds.size();
        u64 pw = 1;
        for (unsigned i = 1; i <= e; ++i) {
            pw *= p;
            for (std::size_t j = 0; j < sz; ++j) ds.push_back(ds[j] * pw);
        }
    }
    std::sort(ds.begin(), ds.end());
    return ds;
}

unsigned valuation(u64 n, u64 p) {
    unsigned v = 0;
    while (n % p == 0) { n /= p; ++v; }
    return v;
}

long long ramanujan_sum(u64 m, u64 n) {
    if (m == 0 || n == 0) throw InputError("ramanujan_sum: m, n must be positive");
    u64 g = std::gcd(m, n);
    long long s = 0;
    for (u64 d : divisors(g)) s += static_cast<long long>(d) * moebius(n / d);
    return s;
}

Rational um_star(u64 m, u64 n, u64 p, const Rational& t) {
    if (t <= 0) throw InputError("um_star: t must be positive");
    Rational u(ramanujan_sum(m, n));
    return (n % p == 0) ? u : u / t;
}

CongruenceRootSet solve_quadratic_congruence(u64 D, const Factorization& c_fact) {
    if (c_fact.n == 1) return {1, {0}};
    return combine_crt(c_fact.n, D, c_fact.factors);
}

CongruenceRootSet solve_quadratic_congruence(u64 D, u64 c) {
    if (c == 0) throw InputError("solve_quadratic_congruence: c must be positive");
    return solve_quadratic_congruence(D, factorize(c));
}

CongruenceRootSet solve_quadratic_congruence(u64 D, u64 c, const SpfSieve& sieve) {
    if (c == 0) throw InputError("solve_quadratic_congruence: c must be positive");
    return solve_quadratic_congruence(D, sieve.factorize(static_cast<std::uint32_t>(c)));
}

CongruenceRootSet solve_quadratic_congruence_bruteforce(u64 D, u64 c) {
    CongruenceRootSet rs;
    rs.modulus = c;
    u64 target = (c - D % c) % c;
    for (u64 x = 0; x < c; ++x)
        if (mulmod(x, x, c) == target) rs.roots.push_back(x);
    return rs;
}

Real salie_sum_from_roots(const CongruenceRootSet& rs, u64 m, const PrecisionContext& ctx) {
    if (ctx.bits < 64 || ctx.guard < 16) throw InputError("salie_sum: precision context invalid");
    ScopedPrecision sp(ctx.working_bits());
    u64 c = rs.modulus;
    Real two_pi = 2 * const_pi();
    Real re = 0, im = 0;
    for (u64 x : rs.roots) {
        u64 num = (2 * m % c) * x % c;  // e(2mx/c) depends on 2mx mod c
        Real theta = two_pi * Real(num) / Real(c);
        re += cos(theta);
        im += sin(theta);
    }
    Real tol = ldexp(Real(1), -static_cast<int>(ctx.bits / 2));
    if (abs(im) >= tol)
        throw PrecisionError("salie_sum: imaginary part failed to cancel");
    return re;
}

Real salie_sum(u64 D, u64 m, u64 c, const PrecisionContext& ctx) {
    return salie_sum_from_roots(solve_quadratic_congruence(D, c), m, ctx);
}

Rational c_m_constant(u64 m, u64 p) {
    if (m == 0) throw InputError("c_m_constant: m must be positive");
    unsigned a = valuation(m, p);
    Int pa1 = pow(Int(p), a + 1);
    Rational inner = Rational(-pa1, Int(p) + 1) * Rational(sigma(m / ipow(p, a)))
                   + Rational(sigma(m));
    return -24 * inner;
}

}  // namespace smtrace
