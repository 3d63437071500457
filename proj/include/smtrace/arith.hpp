#pragma once

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "smtrace/precision.hpp"
#include "smtrace/types.hpp"

namespace smtrace {

struct Factorization {
    std::uint64_t n = 1;
    // (prime, exponent) pairs, primes strictly increasing, exponents >= 1.
    std::vector<std::pair<std::uint64_t, unsigned>> factors;
};

Factorization factorize(std::uint64_t n);

// Smallest-prime-factor sieve for bulk factorization of n <= limit.
class SpfSieve {
  public:
    explicit SpfSieve(std::uint32_t limit);
    std::uint32_t limit() const { return limit_; }
    Factorization factorize(std::uint32_t n) const;

  private:
    std::uint32_t limit_;
    std::vector<std::uint32_t> spf_;
};

// sigma_k(n) = sum of k-th powers of divisors of n.
Int sigma(std::uint64_t n, unsigned k = 1);
Int sigma(const Factorization& f, unsigned k = 1);

int moebius(std::uint64_t n);

std::vector<std::uint64_t> divisors(std::uint64_t n);

// p-adic valuation: largest a with p^a | n.
unsigned valuation(std::uint64_t n, std::uint64_t p);

// u_m(n): sum of m-th powers of the primitive n-th roots of unity,
// computed as sum_{d | gcd(m,n)} d * mu(n/d).
long long ramanujan_sum(std::uint64_t m, std::uint64_t n);

// u_m^*(n) with the prime power p^s carried as an exact formal value t:
// u_m(n) when p | n, u_m(n)/t otherwise.
Rational um_star(std::uint64_t m, std::uint64_t n, std::uint64_t p, const Rational& t);

struct CongruenceRootSet {
    std::uint64_t modulus = 1;
    std::vector<std::uint64_t> roots;  // sorted, complete, duplicate-free
};

// All x in [0, c) with x^2 = -D (mod c). Empty set when no solution exists.
CongruenceRootSet solve_quadratic_congruence(std::uint64_t D, std::uint64_t c);
CongruenceRootSet solve_quadratic_congruence(std::uint64_t D, std::uint64_t c,
                                             const SpfSieve& sieve);
CongruenceRootSet solve_quadratic_congruence(std::uint64_t D, const Factorization& c_fact);

// Brute-force reference, O(c).
CongruenceRootSet solve_quadratic_congruence_bruteforce(std::uint64_t D, std::uint64_t c);

// S_D(m,c) = sum over the root set of e(2mx/c). Always real; the residual
// imaginary part of the literal complex sum is checked against 2^-(bits/2).
Real salie_sum(std::uint64_t D, std::uint64_t m, std::uint64_t c, const PrecisionContext& ctx);
Real salie_sum_from_roots(const CongruenceRootSet& rs, std::uint64_t m,
                          const PrecisionContext& ctx);

// c_m = -24(-p^(a+1)/(p+1) * sigma(m/p^a) + sigma(m)), p^a || m.
Rational c_m_constant(std::uint64_t m, std::uint64_t p);

}  // namespace smtrace
