#include <gtest/gtest.h>

#include <cmath>
#include <functional>

#include "qfp/analytic.hpp"
#include "qfp/verify.hpp"

using namespace qfp;

namespace {

Pencil P5() { return standard_pencil("p5"); }

// Composite Simpson rule, independent of the Gauss-Legendre machinery.
double simpson(const std::function<double(double)>& f, double a, double b, int n) {
  const double h = (b - a) / n;
  double s = f(a) + f(b);
  for (int i = 1; i < n; ++i) s += f(a + i * h) * (i % 2 ? 4 : 2);
  return s * h / 3;
}

// Pencil with a nonsingular real zero: ratios inf, 2, -1/2, 1/3, 0 are distinct.
Pencil indefinite() { return make_pencil(QuadraticForm::diag({1, 2, -1, -1, 0}), QuadraticForm::diag({0, 1, 2, -3, 1})); }

}  // namespace

TEST(Weight, BumpClosedForms) {
  WeightSpec w;
  w.rho = 1;
  EXPECT_NEAR(w.eval({0, 0, 0}), std::exp(-3.0), 1e-15);
  EXPECT_EQ(w.eval({1, 0, 0}), 0);
  EXPECT_EQ(w.eval({0, -1, 0.2}), 0);
  WeightSpec w2;
  EXPECT_NEAR(w2.eval({1, 0, 0, 0}), std::exp(-1 / (1 - 0.25)) * std::exp(-3.0), 1e-15);
}

TEST(Weight, BoxMollifiedIsFlatInside) {
  WeightSpec w = parse_weight("box:2");
  EXPECT_EQ(w.kind, WeightKind::BoxMollified);
  EXPECT_EQ(w.eval1(0.99), 1);
  EXPECT_GT(w.eval1(1.5), 0);
  EXPECT_LT(w.eval1(1.5), 1);
  EXPECT_EQ(w.eval1(2.0), 0);
  EXPECT_THROW(parse_weight("triangle:2"), InvalidInput);
}

TEST(Weight, MassMatchesSimpson) {
  for (const char* spec : {"bump:1", "bump:2", "box:2"}) {
    WeightSpec w = parse_weight(spec);
    const double m = simpson([&](double u) { return w.eval1(u); }, -w.rho, w.rho, 20000);
    EXPECT_NEAR(w.mass1(), m, 1e-8) << spec;
  }
}

TEST(Quadrature, GaussLegendreIsExactOnPolynomials) {
  const auto& g = gauss_legendre(10);
  for (int d = 0; d < 20; ++d) {
    double s = 0;
    for (auto [x, w] : g) s += w * std::pow(x, d);
    const double want = d % 2 ? 0 : 2.0 / (d + 1);
    EXPECT_NEAR(s, want, 1e-13) << d;
  }
}

TEST(Oscillatory, NoOscillationGivesMass) {
  WeightSpec w;
  const cd I = oscillatory_i(P5(), 0, 0, {0, 0, 0, 0, 0}, w);
  EXPECT_NEAR(I.real(), std::pow(w.mass1(), 5), 1e-8);
  EXPECT_NEAR(I.imag(), 0, 1e-10);
}

TEST(Oscillatory, FourierTransformAgainstSimpson) {
  WeightSpec w;
  const double lam = 0.7, twopi = 2 * std::acos(-1.0);
  const double re = simpson([&](double u) { return std::cos(twopi * lam * u) * w.eval1(u); }, -2, 2, 20000);
  const double im = simpson([&](double u) { return -std::sin(twopi * lam * u) * w.eval1(u); }, -2, 2, 20000);
  const cd one(re, im);
  Eigen::MatrixXd zero = Eigen::MatrixXd::Zero(3, 3);
  const cd I = oscillatory_i(zero, {lam, lam, 0}, w);
  EXPECT_LT(std::abs(I - one * one * w.mass1()), 1e-8);
  // a non-diagonal matrix takes the tensor route; compare with the rotated diagonal value
  Eigen::MatrixXd q(2, 2);
  q << 0.3, 0.1, 0.1, 0.2;
  const cd tensor = oscillatory_i(q, {0.2, -0.4}, w, 1e-8);
  double sr = 0, si = 0;
  const int n = 400;
  for (int i = 0; i <= n; ++i)
    for (int j = 0; j <= n; ++j) {
      const double u = -2 + 4.0 * i / n, v = -2 + 4.0 * j / n;
      const double wt = (i == 0 || i == n ? 0.5 : 1) * (j == 0 || j == n ? 0.5 : 1) * w.eval1(u) * w.eval1(v);
      const double ph = twopi * (0.3 * u * u + 0.2 * u * v + 0.2 * v * v - 0.2 * u + 0.4 * v);
      sr += wt * std::cos(ph);
      si += wt * std::sin(ph);
    }
  const cd trap(sr * 16.0 / (n * n), si * 16.0 / (n * n));
  EXPECT_LT(std::abs(tensor - trap), 1e-6);
}

TEST(Oscillatory, DecaysInLambda) {
  WeightSpec w;
  Pencil fi = standard_pencil("fi");
  Eigen::MatrixXd q = to_eigen(fi.q1.matrix);
  const double at0 = std::abs(oscillatory_i(q, {0, 0, 0}, w));
  const double far = std::abs(oscillatory_i(q, {20 * q.norm(), 0, 0}, w));
  EXPECT_LE(far, 1e-6 * at0);
}

TEST(Oscillatory, EigenvalueEnvelope) {
  WeightSpec w;
  Pencil fi = standard_pencil("fi");
  const double I0 = std::abs(oscillatory_i(fi, 0, 0, {0, 0, 0}, w));
  for (double nu1 : {-4.0, 1.0, 6.0})
    for (double nu2 : {-3.0, 0.5, 5.0}) {
      Eigen::MatrixXd q = nu1 * to_eigen(fi.q1.matrix) + nu2 * to_eigen(fi.q2.matrix);
      EXPECT_LE(std::abs(oscillatory_i(q, {0.5, 0, -0.5}, w)) / I0, 5 * eigenvalue_decay_bound(q));
    }
}

TEST(SingularIntegral, EmptyLocusIsZero) {
  WeightSpec w;
  w.rho = 1;
  auto t = singular_integral_truncated(P5(), {-1, 1}, w);
  EXPECT_LE(std::abs(t.estimate), std::max(t.error_bar, 1e-3));
  auto h = singular_integral_thickened(P5(), {-1, 1}, WeightSpec{});
  EXPECT_EQ(h.estimate, 0);
}

TEST(SingularIntegral, MethodsAgreeAtReferencePoint) {
  WeightSpec w;
  auto t = singular_integral_truncated(P5(), {0.4, 1.2}, w);
  auto h = singular_integral_thickened(P5(), {0.4, 1.2}, w);
  EXPECT_GT(t.estimate, 0);
  EXPECT_LE(std::abs(t.estimate - h.estimate), t.error_bar + h.error_bar);
  ASSERT_EQ(t.values.size(), 3u);
  // successive radii: |J_8 - J_16| <= C 8^{-1/2} log 8 with the fitted tail constant
  EXPECT_LE(std::abs(t.values[1] - t.values[2]), t.fitted_constant * std::pow(8.0, -0.5) * std::log(8.0) + 1e-12);
}

TEST(SingularIntegral, PositiveAtOriginForIndefinitePencil) {
  ThickenedOptions th;
  th.directions = 1L << 12;
  auto h = singular_integral_thickened(indefinite(), {0, 0}, WeightSpec{}, th);
  EXPECT_GT(h.estimate, 0);
  EXPECT_GT(h.estimate, 3 * h.error_bar);
}
