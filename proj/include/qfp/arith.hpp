#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <string>
#include <vector>

namespace qfp {

using Int = mpz_class;
using Rat = mpq_class;

bool fits_i64(const Int& x);
std::int64_t to_i64(const Int& x);
Int pow_int(const Int& base, unsigned long e);
Int pow_int(long base, unsigned long e);
std::int64_t ipow64(std::int64_t base, int e);  // throws on overflow
std::string to_string(const Int& x);
std::string to_string(const Rat& x);
double to_double(const Rat& x);

inline std::int64_t mod(std::int64_t a, std::int64_t m) {
  std::int64_t r = a % m;
  return r < 0 ? r + m : r;
}
inline std::int64_t mulmod(std::int64_t a, std::int64_t b, std::int64_t m) {
  return static_cast<std::int64_t>(static_cast<__int128>(a) * b % m);
}
std::int64_t powmod(std::int64_t b, std::uint64_t e, std::int64_t m);
std::int64_t invmod(std::int64_t a, std::int64_t m);
// Legendre symbol (a/p) for odd prime p.
int legendre(std::int64_t a, std::int64_t p);
// Square roots of a mod odd prime p (0, 1 or 2 values).
std::vector<std::int64_t> sqrt_mod_p(std::int64_t a, std::int64_t p);

// p-adic valuation; returns INT32_MAX for zero.
int valuation(const Int& x, long p);
int valuation(std::int64_t x, std::int64_t p);

bool is_prime_u64(std::uint64_t n);  // deterministic Miller-Rabin
bool is_prime(const Int& n);         // deterministic below 2^64, 40 rounds above
std::vector<std::int64_t> primes_up_to(std::int64_t n);
// Distinct prime divisors of |n| in ascending order (n != 0).
std::vector<Int> prime_divisors(const Int& n);
bool is_square(const Int& n);

}  // namespace qfp
