#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <set>

#include "qfp/counting.hpp"
#include "qfp/verify.hpp"

using namespace qfp;

namespace {

Pencil P5() { return standard_pencil("p5"); }

// Brute-force weighted count of x in the support box with Q(x) = n.
double brute_R(const Pencil& p, std::int64_t n1, std::int64_t n2, double B, const WeightSpec& w) {
  const int k = p.k();
  const long r = support_radius(B, w);
  std::vector<long> x(static_cast<std::size_t>(k), -r);
  double total = 0;
  for (;;) {
    long v1 = 0, v2 = 0;
    std::vector<double> u;
    for (int i = 0; i < k; ++i) {
      v1 += p.q1.matrix(i, i).get_si() * x[i] * x[i];
      v2 += p.q2.matrix(i, i).get_si() * x[i] * x[i];
      u.push_back(static_cast<double>(x[i]) / B);
    }
    if (v1 == n1 && v2 == n2) total += w.eval(u);
    int i = 0;
    while (i < k && ++x[static_cast<std::size_t>(i)] > r) x[static_cast<std::size_t>(i++)] = -r;
    if (i == k) break;
  }
  return total;
}

}  // namespace

TEST(Table, BucketFiveFifteenHasThirtyTwoPoints) {
  WeightSpec box = parse_weight("box:2");
  auto t = representation_table(P5(), 2, box);
  EXPECT_DOUBLE_EQ(t.at(5, 15), 32.0);
  EXPECT_DOUBLE_EQ(brute_R(P5(), 5, 15, 2, box), 32.0);
  EXPECT_GT(t.at(0, 0), 0);
}

TEST(Table, MassConservation) {
  WeightSpec w;
  auto t = representation_table(P5(), 3, w);
  double s = 0;
  for (const auto& [key, v] : t.table) s += v;
  EXPECT_NEAR(s, t.mass, 1e-9 * t.mass);
}

TEST(Table, AgreesWithPerTargetCounter) {
  WeightSpec w;
  auto t = representation_table(P5(), 3, w);
  RepresentationCounter rc(P5());
  ASSERT_TRUE(rc.has_definite_member());
  for (auto [n1, n2] : std::vector<std::pair<long, long>>{{2, 3}, {5, 15}, {7, 13}, {9, 30}, {4, 20}, {0, 0}, {11, 1}}) {
    const double want = brute_R(P5(), n1, n2, 3, w);
    EXPECT_NEAR(t.at(n1, n2), want, 1e-12);
    EXPECT_NEAR(rc.count({n1, n2}, 3, w), want, 1e-12);
  }
}

TEST(Table, WindowRestrictsBuckets) {
  WeightSpec w;
  Window win{0, 10, 0, 30};
  auto t = representation_table(P5(), 3, w, {}, Exec::Parallel, win);
  for (const auto& [key, v] : t.table) EXPECT_TRUE(win.contains(key.first, key.second));
  EXPECT_NEAR(t.at(5, 15), brute_R(P5(), 5, 15, 3, w), 1e-12);
}

TEST(Table, BudgetIsEnforced) {
  Budget b;
  b.lattice = 1000;
  EXPECT_THROW(representation_table(P5(), 8, WeightSpec{}, b), BudgetError);
}

TEST(Asymptotic, RatioNearOneForTwoThree) {
  auto rep = asymptotic_check(P5(), {2, 3}, {8, 12}, 50, WeightSpec{});
  ASSERT_EQ(rep.rows.size(), 2u);
  for (const auto& row : rep.rows) {
    EXPECT_GE(row.ratio, 0.5);
    EXPECT_LE(row.ratio, 2.0);
  }
}

TEST(Asymptotic, RealObstructionIsDegenerate) {
  auto rep = asymptotic_check(P5(), {-1, 1}, {8}, 20, WeightSpec{});
  EXPECT_TRUE(rep.degenerate);
  EXPECT_EQ(rep.rows[0].R, 0);
}

TEST(MeanSquare, SinglePairUnrollsDefinition) {
  const double B = 8;
  const double N = B * B;
  auto rep = asymptotic_check(P5(), {2, 3}, {B}, 50, WeightSpec{});
  auto row = mean_square_statistic(P5(), B, 0, {{2 / N, 3 / N}}, 1, 50, WeightSpec{});
  ASSERT_EQ(row.pairs, 1);
  const double d = rep.rows[0].R - rep.rows[0].main;
  EXPECT_NEAR(row.statistic, d * d / (B * B), 1e-9 * d * d / (B * B));
}

TEST(MeanSquare, SkipsDegenerateTargets) {
  // (1,1) lies on F = 0 for P5 since F(1,-1) = 0
  auto row = mean_square_statistic(P5(), 8, 64, {{1 / 64.0, 1 / 64.0}, {2 / 64.0, 3 / 64.0}}, 5, 20, WeightSpec{});
  EXPECT_EQ(row.pairs, 1);
}

TEST(Scan, ExceptionalPairsHaveNoRepresentation) {
  // B = 4 gives support radius 7, which covers every solution with Q1 <= 16
  const long N = 16;
  auto r = exceptional_scan(P5(), N, 4, 20, WeightSpec{});
  EXPECT_EQ(r.pairs, (2 * N + 1) * (2 * N + 1));
  EXPECT_GT(r.excluded_f_zero, 0);
  EXPECT_GT(r.represented, 0);
  // one pass over the box collects every represented pair
  std::set<std::pair<long, long>> seen;
  std::vector<long> x(5, -7);
  for (;;) {
    long v1 = 0, v2 = 0;
    for (int i = 0; i < 5; ++i) {
      v1 += x[i] * x[i];
      v2 += (i + 1) * x[i] * x[i];
    }
    if (v1 <= N && v2 <= N) seen.insert({v1, v2});
    int i = 0;
    while (i < 5 && ++x[static_cast<std::size_t>(i)] > 7) x[static_cast<std::size_t>(i++)] = -7;
    if (i == 5) break;
  }
  for (const auto& n : r.exceptional) EXPECT_FALSE(seen.count({n[0].get_si(), n[1].get_si()}));
  long represented = 0;
  for (const auto& [n1, n2] : seen)
    if (P5().f(Int(n2), Int(-n1)) != 0) ++represented;
  EXPECT_EQ(r.represented, represented);
  EXPECT_EQ(r.locally_solvable, r.represented + static_cast<long>(r.exceptional.size()));
}

TEST(Primes, Examples) {
  auto p5 = prime_pair_search(P5(), 2);
  bool seven_thirteen = false;
  for (const auto& h : p5.hits)
    if (h.x == std::vector<long>{2, 1, 1, 1, 0}) {
      EXPECT_EQ(h.r1, 7);
      EXPECT_EQ(h.r2, 13);
      seven_thirteen = true;
    }
  EXPECT_TRUE(seven_thirteen);
  auto fi = prime_pair_search(standard_pencil("fi"), 3);
  EXPECT_TRUE(std::any_of(fi.hits.begin(), fi.hits.end(), [](const PrimeHit& h) {
    return h.x == std::vector<long>{1, 1, 3} && h.r1 == 5 && h.r2 == 13;
  }));
  Pencil square = make_pencil(QuadraticForm::diag({1, 0, 0}), QuadraticForm::diag({1, 1, 1}));
  auto s = prime_pair_search(square, 3);
  EXPECT_TRUE(s.hits.empty());
}

TEST(K4, CongruenceClaimAndTrivialRepresentation) {
  auto rep = k4_experiment({5}, 2520);
  ASSERT_EQ(rep.rows.size(), 1u);
  EXPECT_GT(rep.rows[0].surveyed, 0);
  EXPECT_EQ(rep.rows[0].zp_pass, rep.rows[0].surveyed);
  RepresentationCounter rc(qpair1(10000));
  EXPECT_GE(rc.solutions({1, 1}, 1), 1u);
}

TEST(Lines, Examples) {
  auto r = line_polynomials(P5(), {1, 1, 1, 1, 1}, {2, 1, 1, 1, 0});
  const auto& c = r.coeffs[0];
  EXPECT_EQ(c[0], 7);
  EXPECT_EQ(c[0] + c[1] + c[2], 5);
  EXPECT_TRUE(r.qdisc_consistent[0]);
  EXPECT_TRUE(r.qdisc_consistent[1]);
  // q1(0)=7, q1(1)=5 and q2(0)=13, q2(1)=15 are odd: no fixed divisor 2
  EXPECT_TRUE(std::find(r.fixed_divisors[0].begin(), r.fixed_divisors[0].end(), 2) == r.fixed_divisors[0].end());

  Pencil sq = make_pencil(QuadraticForm::diag({1, 0, 0}), QuadraticForm::diag({1, 1, 1}));
  auto s = line_polynomials(sq, {3, 0, 0}, {1, 0, 0});
  EXPECT_TRUE(s.reducible[0]);
}
