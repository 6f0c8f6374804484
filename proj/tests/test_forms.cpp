#include <gtest/gtest.h>

#include <algorithm>
#include <random>

#include "qfp/counting.hpp"
#include "qfp/forms.hpp"
#include "qfp/verify.hpp"

using namespace qfp;

namespace {

Pencil P5() { return standard_pencil("p5"); }

std::vector<Int> ints(std::initializer_list<long> v) { return {v.begin(), v.end()}; }

// Coefficients of prod_i (a_i x + b_i y), x^k first.
std::vector<Int> product_of_linear(const std::vector<std::pair<long, long>>& f) {
  std::vector<Int> c = {1};
  for (auto [a, b] : f) {
    std::vector<Int> n(c.size() + 1, 0);
    for (std::size_t j = 0; j < c.size(); ++j) {
      n[j] += a * c[j];
      n[j + 1] += b * c[j];
    }
    c = n;
  }
  return c;
}

// Discriminant of a product of linear forms: prod_{i<j} (a_i b_j - a_j b_i)^2.
Int linear_product_disc(const std::vector<std::pair<long, long>>& f) {
  Int d = 1;
  for (std::size_t i = 0; i < f.size(); ++i)
    for (std::size_t j = i + 1; j < f.size(); ++j) {
      Int m = f[i].first * f[j].second - f[j].first * f[i].second;
      d *= m * m;
    }
  return d;
}

}  // namespace

TEST(Forms, EvaluateExamples) {
  EXPECT_EQ(evaluate(QuadraticForm::diag({1, 1, 1, 1, 1}), ints({1, 1, 1, 1, 1})), 5);
  EXPECT_EQ(evaluate(QuadraticForm::diag({1, 2, 3, 4, 5}), ints({1, 1, 1, 1, 1})), 15);
  EXPECT_EQ(evaluate(QuadraticForm::diag({1, 4, 0}), ints({1, 1, 3})), 5);
  QuadraticForm off(IntMatrix::from_rows({{1, 2}, {2, 3}}));
  EXPECT_EQ(evaluate(off, ints({1, 1})), 1 + 4 + 3);  // cross coefficient 2*M12
}

TEST(Forms, SymmetryIsValidated) {
  EXPECT_THROW(QuadraticForm(IntMatrix::from_rows({{1, 2}, {0, 1}})), InvalidInput);
}

TEST(Forms, GradientExamples) {
  EXPECT_EQ(gradient(QuadraticForm::diag({1, 1}), ints({3, 0})), ints({6, 0}));
  EXPECT_EQ(gradient(QuadraticForm::diag({1, 2, 3, 4, 5}), ints({1, 1, 0, 0, 0})), ints({2, 4, 0, 0, 0}));
  EXPECT_EQ(gradient(QuadraticForm::diag({1, 2, 3}), ints({0, 0, 0})), ints({0, 0, 0}));
}

TEST(Forms, DeterminantFormExamples) {
  EXPECT_EQ(P5().f.coeffs, ints({1, 15, 85, 225, 274, 120}));
  EXPECT_EQ(P5().f.coeffs, product_of_linear({{1, 1}, {1, 2}, {1, 3}, {1, 4}, {1, 5}}));
  auto same = determinant_form(QuadraticForm::diag({1, 1}), QuadraticForm::diag({1, 1}));
  EXPECT_EQ(same.coeffs, ints({1, 2, 1}));
  auto fi = determinant_form(QuadraticForm::diag({1, 4, 0}), QuadraticForm::diag({4, 0, 1}));
  EXPECT_EQ(fi.coeffs, ints({0, 4, 16, 0}));
  EXPECT_EQ(fi.coeffs, product_of_linear({{1, 4}, {4, 0}, {0, 1}}));
}

TEST(Forms, DeterminantFormMatchesDirectDeterminants) {
  std::mt19937_64 rng(11);
  std::uniform_int_distribution<long> d(-5, 5);
  for (int t = 0; t < 50; ++t) {
    const int k = 2 + t % 4;
    IntMatrix a(k, k), b(k, k);
    for (int i = 0; i < k; ++i)
      for (int j = i; j < k; ++j) {
        a(i, j) = a(j, i) = d(rng);
        b(i, j) = b(j, i) = d(rng);
      }
    auto f = determinant_form(QuadraticForm(a), QuadraticForm(b));
    for (int s = 0; s < 5; ++s) {
      const Int x = d(rng), y = d(rng);
      EXPECT_EQ(f(x, y), det_bareiss(linear_combination(x, a, y, b)));
    }
  }
}

TEST(Forms, DiscriminantExamples) {
  EXPECT_EQ(discriminant(BinaryForm{2, ints({1, 2, 1})}), 0);
  EXPECT_EQ(P5().disc_f, 82944);
  EXPECT_EQ(P5().disc_f, linear_product_disc({{1, 1}, {1, 2}, {1, 3}, {1, 4}, {1, 5}}));
  EXPECT_EQ(abs(discriminant(BinaryForm{2, ints({0, 1, 0})})), 1);
}

TEST(Forms, DegenerateLeadingCoefficientUsesShift) {
  // F = (x+4y)(4x)(y) has zero x^3 coefficient; the substitution must move it.
  Pencil fi = standard_pencil("fi");
  EXPECT_NE(fi.disc_shift, 0);
  EXPECT_EQ(abs(fi.disc_f), linear_product_disc({{1, 4}, {4, 0}, {0, 1}}));
  Pencil q = qpair1(997);
  EXPECT_EQ(abs(q.disc_f), linear_product_disc({{1, 0}, {0, 1}, {1, 1}, {1, 997}}));
}

TEST(Forms, Condition2Examples) {
  EXPECT_TRUE(check_condition2(P5()));
  auto q = QuadraticForm::diag({1, 2, 3});
  EXPECT_FALSE(check_condition2(make_pencil(q, q)));
  EXPECT_TRUE(check_condition2(qpair1(997)));
}

TEST(Forms, DiagonalRatios) {
  EXPECT_TRUE(check_diagonal_ratios(P5()));
  EXPECT_FALSE(check_diagonal_ratios(make_pencil(QuadraticForm::diag({1, 1}), QuadraticForm::diag({2, 2}))));
  EXPECT_TRUE(check_diagonal_ratios(make_pencil(QuadraticForm::diag({1, 0}), QuadraticForm::diag({0, 1}))));
}

TEST(Forms, DiagonalRatiosAgreeWithDiscriminant) {
  std::mt19937_64 rng(12);
  std::uniform_int_distribution<long> d(-9, 9);
  int done = 0;
  while (done < 100) {
    const int k = 2 + static_cast<int>(rng() % 4);
    std::vector<long> a, b;
    bool zero = false;
    for (int i = 0; i < k; ++i) {
      a.push_back(d(rng));
      b.push_back(d(rng));
      if (a.back() == 0 && b.back() == 0) zero = true;
    }
    if (zero) continue;
    Pencil p = make_pencil(QuadraticForm::diag(a), QuadraticForm::diag(b));
    EXPECT_EQ(check_diagonal_ratios(p), check_condition2(p));
    ++done;
  }
}

TEST(Forms, Condition4Examples) {
  EXPECT_TRUE(check_condition4(P5(), {{Rat(1), Rat(-1)}}));
  EXPECT_TRUE(check_condition4(P5(), {{Rat(1), Rat(0)}}));
  auto q = QuadraticForm::diag({1, 2, 3});
  EXPECT_FALSE(check_condition4(make_pencil(q, q), {{Rat(1), Rat(-1)}}));
}

TEST(Forms, SimultaneousDiagonalisation) {
  auto d = simultaneous_diagonalize_real(P5());
  std::vector<double> lam;
  for (auto z : d.lambda) {
    EXPECT_NEAR(z.imag(), 0, 1e-9);
    lam.push_back(z.real());
  }
  std::sort(lam.begin(), lam.end());
  // with a pencil change Q2' = Q2 + t Q1 the eigenvalues map as 1/(1/lambda - t)
  std::vector<double> want;
  for (int i = 1; i <= 5; ++i) want.push_back(1.0 / (i + static_cast<double>(d.change_t)));
  std::sort(want.begin(), want.end());
  for (std::size_t i = 0; i < 5; ++i) EXPECT_NEAR(lam[i], want[i], 1e-9);

  auto e = simultaneous_diagonalize_real(make_pencil(QuadraticForm::diag({2, 3}), QuadraticForm::diag({1, 1})));
  EXPECT_EQ(e.change_t, 0);
  std::vector<double> l2 = {e.lambda[0].real(), e.lambda[1].real()};
  std::sort(l2.begin(), l2.end());
  EXPECT_NEAR(l2[0], 2, 1e-9);
  EXPECT_NEAR(l2[1], 3, 1e-9);
}

TEST(Forms, JacobianMinors) {
  auto d = jacobian_minors(P5(), ints({1, 1, 0, 0, 0}));
  EXPECT_EQ(d(0, 1), 4);
  EXPECT_EQ(d(1, 0), -4);
  auto z = jacobian_minors(P5(), ints({0, 0, 0, 0, 0}));
  for (const auto& v : z.a) EXPECT_EQ(v, 0);
  auto axis = jacobian_minors(P5(), ints({1, 0, 0, 0, 0}));
  for (const auto& v : axis.a) EXPECT_EQ(v, 0);
  // diagonal closed form 4 x_i x_j (j - i)
  auto x = ints({2, -1, 3, 1, -2});
  auto m = jacobian_minors(P5(), x);
  for (int i = 0; i < 5; ++i)
    for (int j = 0; j < 5; ++j) EXPECT_EQ(m(i, j), 4 * x[i] * x[j] * (j - i));
}

TEST(Forms, EigenvalueWindow) {
  auto id = eigenvalue_window(P5(), 1, 0);
  for (double r : id.rho) EXPECT_NEAR(r, 1, 1e-12);
  auto w = eigenvalue_window(P5(), 1, -1);
  std::vector<double> got = w.rho;
  std::sort(got.begin(), got.end());
  std::vector<double> want = {-4, -3, -2, -1, 0};
  for (std::size_t i = 0; i < 5; ++i) EXPECT_NEAR(got[i], want[i], 1e-12);
  EXPECT_NEAR(w.ratio, 1, 1e-12);
  auto q2 = eigenvalue_window(P5(), 0, 1);
  std::vector<double> g2 = q2.rho;
  std::sort(g2.begin(), g2.end());
  for (std::size_t i = 0; i < 5; ++i) EXPECT_NEAR(g2[i], static_cast<double>(i + 1), 1e-12);
}
