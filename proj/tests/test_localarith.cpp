#include <gtest/gtest.h>

#include <random>

#include "qfp/counting.hpp"
#include "qfp/localarith.hpp"
#include "qfp/verify.hpp"

using namespace qfp;

namespace {

Pencil P5() { return standard_pencil("p5"); }
Pencil toy() { return standard_pencil("toy2"); }

LocalOptions serial() {
  LocalOptions o;
  o.exec = Exec::Serial;
  return o;
}

// Odometer enumeration of x mod M; independent of the library counters.
long brute_count(const Pencil& p, const Target& n, std::int64_t M) {
  const int k = p.k();
  std::vector<std::int64_t> x(static_cast<std::size_t>(k), 0);
  const std::int64_t t1 = mod(n[0].get_si(), M), t2 = mod(n[1].get_si(), M);
  long count = 0;
  for (;;) {
    std::int64_t v1 = 0, v2 = 0;
    for (int i = 0; i < k; ++i)
      for (int j = 0; j < k; ++j) {
        v1 += p.q1.matrix(i, j).get_si() * x[i] * x[j];
        v2 += p.q2.matrix(i, j).get_si() * x[i] * x[j];
      }
    if (mod(v1, M) == t1 && mod(v2, M) == t2) ++count;
    int i = 0;
    while (i < k && ++x[static_cast<std::size_t>(i)] == M) x[static_cast<std::size_t>(i++)] = 0;
    if (i == k) break;
  }
  return count;
}

Pencil random_pencil(std::mt19937_64& rng, int k) {
  std::uniform_int_distribution<long> d(-3, 3);
  for (;;) {
    IntMatrix a(k, k), b(k, k);
    for (int i = 0; i < k; ++i)
      for (int j = i; j < k; ++j) {
        a(i, j) = a(j, i) = d(rng);
        b(i, j) = b(j, i) = d(rng);
      }
    Pencil p = make_pencil(QuadraticForm(a), QuadraticForm(b));
    if (check_condition2(p)) return p;
  }
}

}  // namespace

TEST(BadPrimes, Examples) {
  EXPECT_EQ(bad_primes(P5()), (std::vector<Int>{2, 3}));
  // 2 D_F with D_F = (997 * 996)^2 for F = x y (x+y)(x+997y)
  EXPECT_EQ(bad_primes(qpair1(997)), (std::vector<Int>{2, 3, 83, 997}));
  // 2 disc((x+4y) 4x y) = 2 (16 * 1 * 4)^2
  EXPECT_EQ(bad_primes(standard_pencil("fi")), (std::vector<Int>{2}));
}

TEST(Classify, Examples) {
  const Target n{2, 3};
  auto c7 = classify_prime(P5(), n, 7);
  EXPECT_EQ(c7.kind, PrimeKind::GoodTypeII);
  ASSERT_TRUE(c7.evidence.has_value());
  EXPECT_EQ(classify_prime(P5(), n, 11).kind, PrimeKind::GoodTypeI);
  EXPECT_EQ(classify_prime(P5(), n, 3).kind, PrimeKind::Bad);
  EXPECT_EQ(classify_prime(P5(), {5, 9}, 3).kind, PrimeKind::Bad);
}

TEST(Classify, TypeIIDividesF) {
  std::mt19937_64 rng(21);
  for (int t = 0; t < 40; ++t) {
    Target n{Int(static_cast<long>(rng() % 200) - 100), Int(static_cast<long>(rng() % 200) - 100)};
    const Int fv = P5().f(n[1], Int(-n[0]));
    for (long q : {5L, 7L, 11L, 13L})
      if (classify_prime(P5(), n, q).kind == PrimeKind::GoodTypeII) EXPECT_TRUE(mpz_divisible_ui_p(fv.get_mpz_t(), q));
  }
}

TEST(Counts, ToyExamples) {
  EXPECT_EQ(count_points_naive(toy(), {0, 0}, 3, 1), 1);
  EXPECT_EQ(count_points_lifted(toy(), {0, 0}, 3, 1), 1);
  EXPECT_EQ(count_points_lifted(toy(), {0, 0}, 3, 2), brute_count(toy(), {0, 0}, 9));
  EXPECT_EQ(count_points_lifted(P5(), {2, 3}, 7, 0), 1);
}

TEST(Counts, P5GaussSumsAgainstEnumeration) {
  for (long q : {5L, 7L}) EXPECT_EQ(count_points_prime(P5(), {2, 3}, q), brute_count(P5(), {2, 3}, q));
}

TEST(Counts, RegularLiftingAtTypeIPrime) {
  const Int n1 = count_points_naive(P5(), {2, 3}, 11, 1);
  EXPECT_EQ(count_points_lifted(P5(), {2, 3}, 11, 3), n1 * pow_int(11L, 6));
}

TEST(Counts, LiftedMatchesBruteForce) {
  std::mt19937_64 rng(22);
  for (int t = 0; t < 30; ++t) {
    const int k = 2 + t % 3;
    Pencil p = random_pencil(rng, k);
    Target n = t % 3 == 0 ? Target{0, 0} : Target{Int(static_cast<long>(rng() % 21) - 10), Int(static_cast<long>(rng() % 21) - 10)};
    for (long q : {2L, 3L, 5L})
      for (int e = 1; e <= 2; ++e) {
        const std::int64_t M = ipow64(q, e);
        if (std::pow(static_cast<double>(M), k) > 2e5) continue;
        EXPECT_EQ(count_points_lifted(p, n, q, e, serial()), brute_count(p, n, M)) << "k=" << k << " q=" << q << " e=" << e;
      }
  }
}

TEST(Counts, TowerMatchesNaiveAtTwo) {
  for (int e = 1; e <= 4; ++e)
    EXPECT_EQ(count_points_tower(P5(), {2, 3}, 2, e, serial()), count_points_naive(P5(), {2, 3}, 2, e, serial()));
}

TEST(Counts, BoundedByResidueCount) {
  auto r = local_counts(P5(), {2, 3}, 5, 3, serial());
  EXPECT_EQ(r.counts[0], 1);
  for (int e = 1; e <= 3; ++e) EXPECT_LE(r.counts[e], pow_int(5L, 5 * e));
}

TEST(Tq, Examples) {
  auto r = local_counts(toy(), {0, 0}, 3, 1, serial());
  EXPECT_EQ(t_from_counts(r, 1), 0);
  LocalReport fake;
  fake.p = 7;
  fake.k = 5;
  fake.counts = {1, pow_int(7L, 3)};
  EXPECT_EQ(t_from_counts(fake, 1), 0);
}

TEST(Tq, VanishesAtTypeIPrimes) {
  std::mt19937_64 rng(23);
  int seen = 0;
  for (int t = 0; t < 15; ++t) {
    Target n{Int(static_cast<long>(rng() % 100) - 50), Int(static_cast<long>(rng() % 100) - 50)};
    for (long q : {5L, 7L}) {
      if (classify_prime(P5(), n, q).kind != PrimeKind::GoodTypeI) continue;
      ++seen;
      auto r = local_counts(P5(), n, q, 3, serial());
      EXPECT_EQ(t_from_counts(r, 2), 0);
      EXPECT_EQ(t_from_counts(r, 3), 0);
    }
  }
  EXPECT_GT(seen, 0);
}

TEST(Telescoping, ExactRationalIdentity) {
  std::mt19937_64 rng(24);
  for (int t = 0; t < 25; ++t) {
    const int k = 2 + t % 4;
    Pencil p = random_pencil(rng, k);
    const long q = std::array<long, 4>{2, 3, 5, 7}[t % 4];
    const int E = 1 + t % 3;
    if (std::pow(static_cast<double>(q), E * k) > 1e7) continue;
    Target n{Int(static_cast<long>(rng() % 21) - 10), Int(static_cast<long>(rng() % 21) - 10)};
    auto r = local_counts(p, n, q, E, serial());
    Rat lhs = 1;
    for (int e = 1; e <= E; ++e) lhs += t_from_counts(r, e) / Rat(pow_int(Int(q), static_cast<unsigned long>(e * k)));
    // independent right-hand side from the brute-force counter
    Rat rhs(Int(brute_count(p, n, ipow64(q, E))), pow_int(Int(q), static_cast<unsigned long>(E * (k - 2))));
    lhs.canonicalize();
    rhs.canonicalize();
    EXPECT_EQ(lhs, rhs);
  }
}

TEST(Sigma, ExactAtTypeI) {
  auto r = sigma_p(P5(), {2, 3}, 11);
  EXPECT_EQ(r.status, LocalStatus::Exact);
  Rat want(Int(brute_count(P5(), {2, 3}, 11)), Int(1331));
  want.canonicalize();
  EXPECT_EQ(r.sigma, want);
}

TEST(Sigma, StabilisesAtTwo) {
  auto r = sigma_p(P5(), {2, 3}, 2);
  EXPECT_EQ(r.status, LocalStatus::StabilizedAt);
  EXPECT_LE(r.status_e, 6);
  EXPECT_GT(r.sigma, 0);
}

TEST(Sigma, LowerBoundExamples) {
  const std::vector<Int> x0 = {1, 1, 0, 0, 0};
  EXPECT_EQ(sigma_lower_bound(P5(), {2, 3}, 7, x0, 0), Rat(1, 343));
  EXPECT_EQ(sigma_lower_bound(P5(), {2, 3}, 2, x0, 0), Rat(1, 32768));
  for (long q : {2L, 5L, 7L, 11L})
    EXPECT_LE(sigma_lower_bound(P5(), {2, 3}, q, x0, 0), sigma_p(P5(), {2, 3}, q).sigma);
}

TEST(Series, PositiveAndConverging) {
  auto s20 = singular_series(P5(), {2, 3}, 20);
  auto s50 = singular_series(P5(), {2, 3}, 50);
  auto s100 = singular_series(P5(), {2, 3}, 100);
  EXPECT_GT(s50.value, 0);
  EXPECT_FALSE(s50.not_locally_solvable);
  EXPECT_LT(std::abs(s50.value / s20.value - 1), 0.05);
  EXPECT_LT(std::abs(s100.value / s50.value - 1), 0.05);
}

TEST(Series, LocalObstructionGivesZero) {
  // x1^2 + x3^2 + x4^2 = 7 has no 2-adic solution
  auto s = singular_series(qpair1(5), {7, 1}, 10);
  EXPECT_TRUE(s.not_locally_solvable);
  EXPECT_EQ(s.value, 0);
  EXPECT_EQ(s.obstructed_prime, 2);
}

TEST(Solvability, ZpExamples) {
  auto r = local_solvable_zp(P5(), {2, 3}, 5);
  EXPECT_EQ(r.status, Solvability::Solvable);
  EXPECT_TRUE(r.henselian);
  EXPECT_EQ(local_solvable_zp(toy(), {1, 1}, 3).status, Solvability::Solvable);
  EXPECT_EQ(local_solvable_zp(qpair1(10001), {-1, 1}, 5).status, Solvability::Solvable);
  EXPECT_EQ(local_solvable_zp(qpair1(5), {7, 1}, 2).status, Solvability::Unsolvable);
}

TEST(Solvability, RealExamples) {
  auto w = local_solvable_real(P5(), 2, 3);
  ASSERT_EQ(w.status, Solvability::Solvable);
  EXPECT_LT(w.residual, 1e-8);
  auto r = local_solvable_real(P5(), -1, 1);
  EXPECT_EQ(r.status, Solvability::Unsolvable);
  EXPECT_EQ(local_solvable_real(qpair1(10001), -1, 1).status, Solvability::Unsolvable);
  std::mt19937_64 rng(25);
  Pencil p = random_pencil(rng, 4);
  std::vector<Int> x0 = {2, -1, 1, 3};
  auto v = local_solvable_real(p, evaluate(p.q1, x0).get_d(), evaluate(p.q2, x0).get_d());
  EXPECT_EQ(v.status, Solvability::Solvable);
}
