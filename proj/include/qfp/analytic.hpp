#pragma once

#include <array>
#include <complex>
#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "qfp/common.hpp"
#include "qfp/forms.hpp"
#include "qfp/weight.hpp"

namespace qfp {

using cd = std::complex<double>;

struct QuadratureFailure : NumericalError {
  cd last, previous;
  QuadratureFailure(const std::string& what, cd l, cd p) : NumericalError(what), last(l), previous(p) {}
};

// Nodes and weights of Gauss-Legendre on [-1, 1], cached per order.
const std::vector<std::pair<double, double>>& gauss_legendre(int n);

// int e(c u^2 - lambda u) w1(u) du over the one-dimensional support.
cd oscillatory_1d(double c, double lambda, const WeightSpec& w);
// I(Q; lambda) = int e(u^T Q u - lambda.u) w(u) du.
cd oscillatory_i(const Eigen::MatrixXd& q, const std::vector<double>& lambda, const WeightSpec& w,
                 double rel_tol = 1e-6, int max_refinements = 8);
cd oscillatory_i(const Pencil& p, double nu1, double nu2, const std::vector<double>& lambda, const WeightSpec& w,
                 double rel_tol = 1e-6);
// prod_i min(1, |rho_i|^{-1/2}) over the eigenvalues of q.
double eigenvalue_decay_bound(const Eigen::MatrixXd& q);

enum class SingularMethod { TruncatedOscillatory, ThickenedVolume };
const char* to_string(SingularMethod m);

struct SingularIntegralValue {
  std::array<double, 2> mu{0, 0};
  double estimate = 0;
  SingularMethod method = SingularMethod::TruncatedOscillatory;
  double error_bar = 0;
  std::vector<double> scales;  // R values or epsilon values
  std::vector<double> values;  // estimate at each scale
  double fitted_constant = 0;  // truncated: tail constant C
  long hits = 0;               // thickened: directions meeting the locus at the smallest epsilon
  bool warning = false;        // k < 5: no convergence guarantee
};

struct TruncatedOptions {
  std::vector<double> radii{4, 8, 16};
  double panel = 0.5;     // theta panel width
  bool refine = true;     // recompute with a higher order and fold the change into the bar
  double table_step = 1.0 / 64;
};
SingularIntegralValue singular_integral_truncated(const Pencil& p, const std::array<double, 2>& mu,
                                                  const WeightSpec& w, const TruncatedOptions& opt = {},
                                                  Exec exec = Exec::Parallel);

struct ThickenedOptions {
  std::vector<double> eps{0.2, 0.1, 0.05};
  long directions = 1L << 14;  // per shift
  int shifts = 16;
  std::uint64_t seed = 20240601;
  long min_hits = 200;
  int order = 16;  // Gauss-Legendre order on each radial piece
};
SingularIntegralValue singular_integral_thickened(const Pencil& p, const std::array<double, 2>& mu,
                                                  const WeightSpec& w, const ThickenedOptions& opt = {},
                                                  Exec exec = Exec::Parallel);

}  // namespace qfp
