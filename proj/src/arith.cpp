#include "qfp/arith.hpp"

#include <algorithm>
#include <climits>
#include <stdexcept>

#include "qfp/common.hpp"

namespace qfp {

bool fits_i64(const Int& x) { return mpz_fits_slong_p(x.get_mpz_t()) != 0; }

std::int64_t to_i64(const Int& x) {
  if (!fits_i64(x)) throw BudgetError("integer exceeds 64-bit kernel range: " + x.get_str());
  return x.get_si();
}

Int pow_int(const Int& base, unsigned long e) {
  Int r;
  mpz_pow_ui(r.get_mpz_t(), base.get_mpz_t(), e);
  return r;
}

Int pow_int(long base, unsigned long e) { return pow_int(Int(base), e); }

std::int64_t ipow64(std::int64_t base, int e) {
  __int128 r = 1;
  for (int i = 0; i < e; ++i) {
    r *= base;
    if (r > INT64_MAX || r < INT64_MIN) throw BudgetError("modulus exceeds 64-bit range");
  }
  return static_cast<std::int64_t>(r);
}

std::string to_string(const Int& x) { return x.get_str(); }

std::string to_string(const Rat& x) { return x.get_str(); }

double to_double(const Rat& x) { return mpq_get_d(x.get_mpq_t()); }

std::int64_t powmod(std::int64_t b, std::uint64_t e, std::int64_t m) {
  std::int64_t r = 1 % m;
  b = mod(b, m);
  while (e) {
    if (e & 1) r = mulmod(r, b, m);
    b = mulmod(b, b, m);
    e >>= 1;
  }
  return r;
}

std::int64_t invmod(std::int64_t a, std::int64_t m) {
  std::int64_t g = m, x = 0, x1 = 1, a1 = mod(a, m);
  while (a1) {
    std::int64_t q = g / a1;
    std::int64_t t = g - q * a1;
    g = a1;
    a1 = t;
    t = x - q * x1;
    x = x1;
    x1 = t;
  }
  if (g != 1) throw std::domain_error("invmod: not invertible");
  return mod(x, m);
}

int legendre(std::int64_t a, std::int64_t p) {
  a = mod(a, p);
  if (a == 0) return 0;
  return powmod(a, static_cast<std::uint64_t>((p - 1) / 2), p) == 1 ? 1 : -1;
}

std::vector<std::int64_t> sqrt_mod_p(std::int64_t a, std::int64_t p) {
  a = mod(a, p);
  if (a == 0) return {0};
  if (legendre(a, p) != 1) return {};
  std::int64_t r;
  if (p % 4 == 3) {
    r = powmod(a, static_cast<std::uint64_t>((p + 1) / 4), p);
  } else {
    // Tonelli-Shanks
    std::int64_t q = p - 1;
    int s = 0;
    while (q % 2 == 0) {
      q /= 2;
      ++s;
    }
    std::int64_t z = 2;
    while (legendre(z, p) != -1) ++z;
    std::int64_t c = powmod(z, q, p), t = powmod(a, q, p);
    r = powmod(a, (q + 1) / 2, p);
    int m = s;
    while (t != 1) {
      int i = 0;
      std::int64_t tt = t;
      while (tt != 1) {
        tt = mulmod(tt, tt, p);
        ++i;
      }
      std::int64_t b = c;
      for (int j = 0; j < m - i - 1; ++j) b = mulmod(b, b, p);
      m = i;
      c = mulmod(b, b, p);
      t = mulmod(t, c, p);
      r = mulmod(r, b, p);
    }
  }
  if (r == p - r) return {r};
  return {std::min(r, p - r), std::max(r, p - r)};
}

int valuation(const Int& x, long p) {
  if (x == 0) return INT32_MAX;
  Int y = abs(x);
  int v = 0;
  while (mpz_divisible_ui_p(y.get_mpz_t(), static_cast<unsigned long>(p))) {
    mpz_divexact_ui(y.get_mpz_t(), y.get_mpz_t(), static_cast<unsigned long>(p));
    ++v;
  }
  return v;
}

int valuation(std::int64_t x, std::int64_t p) {
  if (x == 0) return INT32_MAX;
  int v = 0;
  while (x % p == 0) {
    x /= p;
    ++v;
  }
  return v;
}

namespace {

std::uint64_t mulmod_u(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
  return static_cast<std::uint64_t>(static_cast<unsigned __int128>(a) * b % m);
}

std::uint64_t powmod_u(std::uint64_t b, std::uint64_t e, std::uint64_t m) {
  std::uint64_t r = 1 % m;
  b %= m;
  while (e) {
    if (e & 1) r = mulmod_u(r, b, m);
    b = mulmod_u(b, b, m);
    e >>= 1;
  }
  return r;
}

Int pollard_brent(const Int& n, unsigned long seed) {
  if (mpz_even_p(n.get_mpz_t())) return 2;
  Int y = seed % n, c = (seed * 7 + 1) % n, m = 128, g = 1, r = 1, q = 1, x, ys;
  auto f = [&](const Int& v) { return Int((v * v + c) % n); };
  while (g == 1) {
    x = y;
    for (Int i = 0; i < r; ++i) y = f(y);
    Int kk = 0;
    while (kk < r && g == 1) {
      ys = y;
      Int lim = std::min(m, Int(r - kk));
      for (Int i = 0; i < lim; ++i) {
        y = f(y);
        q = (q * abs(Int(x - y))) % n;
      }
      mpz_gcd(g.get_mpz_t(), q.get_mpz_t(), n.get_mpz_t());
      kk += m;
    }
    r *= 2;
  }
  if (g == n) {
    do {
      ys = f(ys);
      Int d = abs(Int(x - ys));
      mpz_gcd(g.get_mpz_t(), d.get_mpz_t(), n.get_mpz_t());
    } while (g == 1);
  }
  return g;
}

void factor_into(const Int& n, std::vector<Int>& out) {
  if (n == 1) return;
  if (is_prime(n)) {
    out.push_back(n);
    return;
  }
  for (unsigned long seed = 2;; ++seed) {
    Int d = pollard_brent(n, seed);
    if (d != n && d != 1) {
      factor_into(d, out);
      factor_into(Int(n / d), out);
      return;
    }
  }
}

}  // namespace

bool is_prime_u64(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t p : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
    if (n % p == 0) return n == p;
  }
  std::uint64_t d = n - 1;
  int s = 0;
  while ((d & 1) == 0) {
    d >>= 1;
    ++s;
  }
  for (std::uint64_t a : {2ULL, 325ULL, 9375ULL, 28178ULL, 450775ULL, 9780504ULL, 1795265022ULL}) {
    std::uint64_t x = powmod_u(a % n, d, n);
    if (a % n == 0 || x == 1 || x == n - 1) continue;
    bool composite = true;
    for (int r = 1; r < s; ++r) {
      x = mulmod_u(x, x, n);
      if (x == n - 1) {
        composite = false;
        break;
      }
    }
    if (composite) return false;
  }
  return true;
}

bool is_prime(const Int& n) {
  if (n < 2) return false;
  if (mpz_fits_ulong_p(n.get_mpz_t())) return is_prime_u64(n.get_ui());
  return mpz_probab_prime_p(n.get_mpz_t(), 40) > 0;
}

std::vector<std::int64_t> primes_up_to(std::int64_t n) {
  std::vector<std::int64_t> out;
  if (n < 2) return out;
  std::vector<bool> sieve(static_cast<std::size_t>(n + 1), true);
  for (std::int64_t i = 2; i <= n; ++i) {
    if (!sieve[static_cast<std::size_t>(i)]) continue;
    out.push_back(i);
    for (std::int64_t j = i * i; j <= n; j += i) sieve[static_cast<std::size_t>(j)] = false;
  }
  return out;
}

std::vector<Int> prime_divisors(const Int& n0) {
  if (n0 == 0) throw std::domain_error("prime_divisors of zero");
  Int n = abs(n0);
  std::vector<Int> out;
  for (unsigned long p = 2; p < 100000 && n > 1; ++p) {
    if (Int(p) * p > n) break;
    if (mpz_divisible_ui_p(n.get_mpz_t(), p)) {
      out.push_back(p);
      while (mpz_divisible_ui_p(n.get_mpz_t(), p)) mpz_divexact_ui(n.get_mpz_t(), n.get_mpz_t(), p);
    }
  }
  if (n > 1) factor_into(n, out);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

bool is_square(const Int& n) {
  if (n < 0) return false;
  return mpz_perfect_square_p(n.get_mpz_t()) != 0;
}

}  // namespace qfp
