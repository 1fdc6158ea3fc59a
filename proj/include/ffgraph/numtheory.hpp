// Integer utilities consumed by the closed-form census machinery: Moebius,
// Euler phi, p-adic valuations, multiplicative orders, the geometric-sum
// sequence u(j) = (n^j - 1)/(n - 1) (exact and modular), the valuation
// shortcut for u(j), and the coprime split q-1 = s*r.
#pragma once

#include <cstdint>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace ffgraph {

using bigint = boost::multiprecision::cpp_int;

// Moebius function. Throws std::invalid_argument on m = 0.
int mobius(std::uint64_t m);

// Euler totient. Throws std::invalid_argument on m = 0.
std::uint64_t euler_phi(std::uint64_t m);

// nu_p(a): exponent of the prime p in a. Throws on a = 0 (infinite) or p < 2.
unsigned valuation(std::uint64_t p, const bigint& a);

// Least k >= 1 with base^k = 1 (mod modulus). Throws when gcd(base, modulus)
// != 1 or modulus < 2. Plain successive powering; moduli here are small.
std::uint64_t mult_order(std::uint64_t base, std::uint64_t modulus);

// u(j) = (n^j - 1)/(n - 1) computed exactly.
bigint u_of(std::uint64_t n, unsigned j);

// u(j) mod m via recursive doubling, no big integers.
std::uint64_t geom_sum_mod(std::uint64_t n, std::uint64_t j, std::uint64_t m);

// nu_p(u(j)) for odd n via the lifting-the-exponent cases; odd p not dividing
// n-1 falls back to the direct valuation. Throws on j = 0 or even n.
unsigned lte_valuation(std::uint64_t n, unsigned j, std::uint64_t p);

struct CoprimeSplit {
    std::uint64_t s_part;  // product of the prime powers of q-1 whose primes divide n
    std::uint64_t r_part;  // maximal divisor of q-1 coprime to n
};

CoprimeSplit coprime_split(std::uint64_t qm1, std::uint64_t n);

// All divisors of m, ascending.
std::vector<std::uint64_t> divisors_of(std::uint64_t m);

// base^e mod m (m >= 1); uses 128-bit intermediates.
std::uint64_t pow_mod(std::uint64_t base, std::uint64_t e, std::uint64_t m);

}  // namespace ffgraph
