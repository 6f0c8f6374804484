#include <gtest/gtest.h>

#include <cmath>
#include <numeric>
#include <random>

#include "qfp/analytic.hpp"
#include "qfp/expsums.hpp"
#include "qfp/verify.hpp"

using namespace qfp;

namespace {

const double kPi = std::acos(-1.0);

cd eq(double num, double q) { return std::polar(1.0, 2 * kPi * num / q); }

Pencil toy() { return standard_pencil("toy2"); }

long qv(const IntMatrix& m, const std::vector<long>& x) {
  long s = 0;
  for (int i = 0; i < m.rows; ++i)
    for (int j = 0; j < m.cols; ++j) s += m(i, j).get_si() * x[i] * x[j];
  return s;
}

// Direct sum of e_q(a.Q(x)) over the k=2 box.
cd direct_sq(const Pencil& p, long a1, long a2, long q) {
  cd s = 0;
  for (long x = 0; x < q; ++x)
    for (long y = 0; y < q; ++y) s += eq(static_cast<double>(mod(a1 * qv(p.q1.matrix, {x, y}) + a2 * qv(p.q2.matrix, {x, y}), q)), q);
  return s;
}

// S(l;q) for k=2 enumerated with the x and y loops outermost.
cd minor_arc_reference(const Pencil& p, const std::vector<long>& l, long q) {
  cd s = 0;
  for (long x1 = 0; x1 < q; ++x1)
    for (long x2 = 0; x2 < q; ++x2)
      for (long y1 = 0; y1 < q; ++y1)
        for (long y2 = 0; y2 < q; ++y2)
          for (long a1 = 0; a1 < q; ++a1)
            for (long a2 = 0; a2 < q; ++a2) {
              if (std::gcd(std::gcd(a1, a2), q) != 1) continue;
              const long f = a1 * (qv(p.q1.matrix, {x1, x2}) - qv(p.q1.matrix, {y1, y2})) +
                             a2 * (qv(p.q2.matrix, {x1, x2}) - qv(p.q2.matrix, {y1, y2})) + l[0] * x1 + l[1] * x2 +
                             l[2] * y1 + l[3] * y2;
              s += eq(static_cast<double>(mod(f, q)), q);
            }
  return s;
}

}  // namespace

TEST(CompleteSum, Examples) {
  EXPECT_NEAR(std::abs(complete_sum_sq(toy(), {0, 0}, 4) - cd(16, 0)), 0, 1e-9);
  EXPECT_NEAR(std::abs(complete_sum_sq(toy(), {3, 6}, 3) - cd(9, 0)), 0, 1e-9);
  const cd want = 3.0 * (1.0 + 2.0 * eq(2, 3));
  EXPECT_NEAR(std::abs(complete_sum_sq(toy(), {1, 1}, 3) - want), 0, 1e-9);
  for (long q : {5L, 6L, 8L})
    for (long a1 = 0; a1 < q; ++a1)
      EXPECT_NEAR(std::abs(complete_sum_sq(toy(), {Int(a1), Int(1)}, q) - direct_sq(toy(), a1, 1, q)), 0, 1e-9);
}

TEST(CompleteSum, GaussMagnitude) {
  Pencil p5 = standard_pencil("p5");
  for (long q : {7L, 11L}) EXPECT_NEAR(std::abs(complete_sum_sq(p5, {1, 0}, q)), std::pow(q, 2.5), 1e-6);
}

TEST(Tdirect, Examples) {
  EXPECT_NEAR(std::abs(t_direct(toy(), {0, 0}, 3)), 0, 1e-9);
  EXPECT_NEAR(std::abs(t_direct(toy(), {5, 7}, 1) - cd(1, 0)), 0, 1e-12);
}

TEST(Tdirect, Multiplicative) {
  for (const Target& n : {Target{0, 0}, Target{1, 2}, Target{3, -4}})
    for (auto [q1, q2] : std::vector<std::pair<long, long>>{{2, 3}, {3, 4}, {4, 5}, {5, 7}, {3, 8}, {2, 17}}) {
      const cd a = t_direct(toy(), n, q1 * q2), b = t_direct(toy(), n, q1) * t_direct(toy(), n, q2);
      EXPECT_LT(std::abs(a - b), 1e-6 * std::max(1.0, std::abs(a)));
    }
}

TEST(Smith, Examples) {
  EXPECT_EQ(smith_normal_form(IntMatrix::diag({2, 3})).d, (std::vector<Int>{1, 6}));
  EXPECT_EQ(smith_normal_form(IntMatrix::identity(4)).d, (std::vector<Int>{1, 1, 1, 1}));
  EXPECT_EQ(smith_normal_form(IntMatrix(3, 3)).d, (std::vector<Int>{0, 0, 0}));
}

TEST(Smith, RandomValidity) {
  std::mt19937_64 rng(31);
  std::uniform_int_distribution<long> d(-20, 20);
  for (int t = 0; t < 200; ++t) {
    const int n = 1 + t % 5;
    IntMatrix m(n, n);
    for (auto& v : m.a) v = d(rng);
    auto s = smith_normal_form(m);
    IntMatrix D(n, n);
    for (int i = 0; i < n; ++i) D(i, i) = s.d[i];
    EXPECT_EQ(s.left * m * s.right, D);
    EXPECT_EQ(abs(det_bareiss(s.left)), 1);
    EXPECT_EQ(abs(det_bareiss(s.right)), 1);
    for (int i = 0; i + 1 < n; ++i) {
      EXPECT_GE(s.d[i], 0);
      if (s.d[i] == 0)
        EXPECT_EQ(s.d[i + 1], 0);
      else
        EXPECT_TRUE(mpz_divisible_p(s.d[i + 1].get_mpz_t(), s.d[i].get_mpz_t()));
    }
  }
}

TEST(Zcount, Examples) {
  EXPECT_EQ(z_count(toy(), {1, 1}, 3, 1), 3);
  EXPECT_EQ(z_count_naive(toy(), {1, 1}, 3, 1), 3);
  EXPECT_LE(z_count(toy(), {1, 1}, 3, 1), 3);  // gcd(F(1,1), 3) = gcd(6, 3)
  for (int e = 1; e <= 3; ++e) EXPECT_EQ(z_count(toy(), {1, 0}, 5, e), 1);
}

TEST(Zcount, MatchesNaiveOnToySweep) {
  for (const char* name : {"toy2", "fi"}) {
    Pencil p = standard_pencil(name);
    for (long q : {2L, 3L, 5L})
      for (int e = 1; e <= 2; ++e) {
        const long M = ipow64(q, e);
        for (long a1 = 0; a1 < M; ++a1)
          for (long a2 = 0; a2 < M; ++a2) {
            if (std::gcd(std::gcd(a1, a2), q) != 1) continue;
            EXPECT_EQ(z_count(p, {a1, a2}, q, e), z_count_naive(p, {a1, a2}, q, e));
          }
      }
  }
}

TEST(MinorArc, ZeroShiftIsRealPositive) {
  const cd s = minor_arc_sum(toy(), {0, 0, 0, 0}, 3).value;
  EXPECT_GT(s.real(), 0);
  EXPECT_NEAR(s.imag(), 0, 1e-9);
  EXPECT_LE(std::abs(s), 1.0 * 2 * std::pow(3.0, 4));
}

TEST(MinorArc, MultiplicativeAtSix) {
  for (const std::vector<long>& l : {std::vector<long>{0, 0, 0, 0}, std::vector<long>{1, 0, 2, -1}}) {
    const cd a = minor_arc_sum(toy(), l, 6).value;
    const cd b = minor_arc_sum(toy(), l, 2).value * minor_arc_sum(toy(), l, 3).value;
    EXPECT_LT(std::abs(a - b), 1e-6 * std::max({1.0, std::abs(a), std::abs(b)}));
  }
}

TEST(MinorArc, AgreesWithIndependentEnumeration) {
  for (long q : {2L, 3L, 4L})
    for (const std::vector<long>& l : {std::vector<long>{1, 0, 0, 0}, std::vector<long>{0, 1, 1, 3}}) {
      const cd ref = minor_arc_reference(toy(), l, q);
      EXPECT_LT(std::abs(minor_arc_sum(toy(), l, q).value - ref), 1e-8 * std::max(1.0, std::abs(ref)));
      EXPECT_LT(std::abs(minor_arc_sum_direct(toy(), l, q) - ref), 1e-8 * std::max(1.0, std::abs(ref)));
    }
}

TEST(Generating, ZeroFrequencyIsWeightedVolume) {
  WeightSpec w;
  const double B = 20;
  const cd s = eval_generating(toy(), {0, 0}, B, w);
  EXPECT_NEAR(s.imag(), 0, 1e-9);
  const double vol = std::pow(B * w.mass1(), 2);
  EXPECT_LT(std::abs(s.real() / vol - 1), 0.05);
  EXPECT_LT(std::abs(eval_generating(toy(), {1, 0}, B, w) - s), 1e-9 * s.real());
}

TEST(Generating, RoutesAgree) {
  WeightSpec w;
  Pencil p5 = standard_pencil("p5");
  const std::array<double, 2> th{0.003, -0.001};
  const cd sep = eval_generating_separable(p5, {1, 2}, 3, th, 6, w);
  const cd rat = eval_generating(p5, {1, 2}, 3, th, 6, w);
  const cd real = eval_generating(p5, {1.0 / 3 + th[0], 2.0 / 3 + th[1]}, 6, w);
  EXPECT_LT(std::abs(sep - rat), 1e-9 * std::max(1.0, std::abs(rat)));
  EXPECT_LT(std::abs(real - rat), 1e-7 * std::max(1.0, std::abs(rat)));
}
