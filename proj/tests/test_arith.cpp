#include <gtest/gtest.h>

#include <random>

#include "qfp/arith.hpp"
#include "qfp/matrix.hpp"

using namespace qfp;

namespace {

bool trial_prime(std::int64_t n) {
  if (n < 2) return false;
  for (std::int64_t d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

// Cofactor expansion; independent of the Bareiss route.
Int laplace_det(const std::vector<std::vector<long>>& m) {
  const std::size_t n = m.size();
  if (n == 1) return m[0][0];
  Int s = 0;
  for (std::size_t c = 0; c < n; ++c) {
    std::vector<std::vector<long>> minor;
    for (std::size_t r = 1; r < n; ++r) {
      std::vector<long> row;
      for (std::size_t j = 0; j < n; ++j)
        if (j != c) row.push_back(m[r][j]);
      minor.push_back(row);
    }
    Int t = Int(m[0][c]) * laplace_det(minor);
    s += (c % 2 == 0) ? t : Int(-t);
  }
  return s;
}

}  // namespace

TEST(Arith, PowmodAndInverse) {
  EXPECT_EQ(powmod(3, 200, 1000003), powmod(9, 100, 1000003));
  for (std::int64_t a = 1; a < 97; ++a) EXPECT_EQ(mulmod(a, invmod(a, 97), 97), 1);
  EXPECT_EQ(mod(-7, 5), 3);
}

TEST(Arith, LegendreMatchesEulerCriterion) {
  for (std::int64_t p : {3, 5, 7, 11, 13, 101})
    for (std::int64_t a = 0; a < p; ++a) {
      const std::int64_t e = powmod(a, static_cast<std::uint64_t>((p - 1) / 2), p);
      const int want = a == 0 ? 0 : (e == 1 ? 1 : -1);
      EXPECT_EQ(legendre(a, p), want) << a << " mod " << p;
    }
}

TEST(Arith, SquareRootsModP) {
  for (std::int64_t p : {3, 5, 13, 17, 1009})
    for (std::int64_t a = 0; a < std::min<std::int64_t>(p, 50); ++a) {
      auto roots = sqrt_mod_p(a, p);
      std::size_t want = 0;
      for (std::int64_t x = 0; x < p; ++x)
        if (mulmod(x, x, p) == a) ++want;
      EXPECT_EQ(roots.size(), want);
      for (auto r : roots) EXPECT_EQ(mulmod(r, r, p), a);
    }
}

TEST(Arith, Valuation) {
  EXPECT_EQ(valuation(Int(82944), 2), 10);
  EXPECT_EQ(valuation(Int(82944), 3), 4);
  EXPECT_EQ(valuation(std::int64_t{4}, 2), 2);
  EXPECT_EQ(valuation(Int(0), 5), INT32_MAX);
}

TEST(Arith, PrimalityAgainstTrialDivision) {
  for (std::int64_t n = 0; n < 5000; ++n) EXPECT_EQ(is_prime_u64(static_cast<std::uint64_t>(n)), trial_prime(n)) << n;
  EXPECT_TRUE(is_prime(Int("18446744073709551557")));
  EXPECT_FALSE(is_prime(Int("18446744073709551559")));
  EXPECT_EQ(primes_up_to(100).size(), 25u);
}

TEST(Arith, PrimeDivisors) {
  auto d = prime_divisors(Int(82944));
  ASSERT_EQ(d.size(), 2u);
  EXPECT_EQ(d[0], 2);
  EXPECT_EQ(d[1], 3);
  auto e = prime_divisors(Int(-2 * 996 * 997));
  EXPECT_EQ(e, (std::vector<Int>{2, 3, 83, 997}));
}

TEST(Arith, SquaresAndPowers) {
  EXPECT_TRUE(is_square(Int(0)));
  EXPECT_TRUE(is_square(Int(144)));
  EXPECT_FALSE(is_square(Int(-4)));
  EXPECT_EQ(ipow64(7, 5), 16807);
  EXPECT_THROW(ipow64(10, 30), std::exception);
  EXPECT_EQ(pow_int(2L, 100), Int("1267650600228229401496703205376"));
}

TEST(Matrix, BareissMatchesLaplace) {
  std::mt19937_64 rng(3);
  std::uniform_int_distribution<long> d(-9, 9);
  for (int t = 0; t < 100; ++t) {
    const int n = 1 + t % 5;
    std::vector<std::vector<long>> rows(static_cast<std::size_t>(n), std::vector<long>(static_cast<std::size_t>(n)));
    for (auto& r : rows)
      for (auto& v : r) v = d(rng);
    EXPECT_EQ(det_bareiss(IntMatrix::from_rows(rows)), laplace_det(rows));
  }
}

TEST(Matrix, RankAndDefiniteness) {
  EXPECT_EQ(rank_bareiss(IntMatrix::diag({0, -1, -2, -3, -4})), 4);
  EXPECT_TRUE(is_pd_exact(IntMatrix::diag({1, 2, 3})));
  EXPECT_FALSE(is_pd_exact(IntMatrix::diag({1, 0, 3})));
  EXPECT_TRUE(is_psd_exact(IntMatrix::diag({1, 0, 3})));
  EXPECT_FALSE(is_psd_exact(IntMatrix::from_rows({{0, 1}, {1, 0}})));
}

TEST(Matrix, KernelAndSolveModP) {
  auto m = reduce_mod(IntMatrix::from_rows({{1, 2, 3}, {2, 4, 6}, {0, 1, 1}}), 7);
  EXPECT_EQ(rank_mod_p(m, 7), 2);
  auto ker = kernel_mod_p(m, 7);
  ASSERT_EQ(ker.size(), 1u);
  for (const auto& row : m) {
    std::int64_t s = 0;
    for (std::size_t j = 0; j < 3; ++j) s += row[j] * ker[0][j];
    EXPECT_EQ(mod(s, 7), 0);
  }
  auto x = solve_mod_p(m, {1, 2, 3}, 7);
  ASSERT_TRUE(x.has_value());
  EXPECT_FALSE(solve_mod_p(m, {1, 3, 0}, 7).has_value());
}

TEST(Matrix, LinearCountAgainstEnumeration) {
  std::mt19937_64 rng(9);
  for (std::int64_t p : {2, 3, 5})
    for (int m = 1; m <= 2; ++m) {
      const std::int64_t M = ipow64(p, m);
      for (int t = 0; t < 10; ++t) {
        std::vector<std::vector<std::int64_t>> A(2, std::vector<std::int64_t>(3));
        for (auto& r : A)
          for (auto& v : r) v = static_cast<std::int64_t>(rng() % static_cast<std::uint64_t>(M));
        std::vector<std::int64_t> b = {static_cast<std::int64_t>(rng() % static_cast<std::uint64_t>(M)),
                                       static_cast<std::int64_t>(rng() % static_cast<std::uint64_t>(M))};
        long want = 0;
        for (std::int64_t y0 = 0; y0 < M; ++y0)
          for (std::int64_t y1 = 0; y1 < M; ++y1)
            for (std::int64_t y2 = 0; y2 < M; ++y2) {
              bool ok = true;
              for (int r = 0; r < 2; ++r)
                if (mod(A[r][0] * y0 + A[r][1] * y1 + A[r][2] * y2 - b[r], M) != 0) ok = false;
              if (ok) ++want;
            }
        EXPECT_EQ(count_linear_mod_pm(A, b, p, m), want);
      }
    }
}
