#pragma once

#include <complex>
#include <cstdint>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "qfp/arith.hpp"
#include "qfp/matrix.hpp"

namespace qfp {

struct QuadraticForm {
  int dim = 0;
  IntMatrix matrix;

  QuadraticForm() = default;
  explicit QuadraticForm(IntMatrix m);
  static QuadraticForm diag(const std::vector<long>& d) { return QuadraticForm(IntMatrix::diag(d)); }
};

Int evaluate(const QuadraticForm& q, const std::vector<Int>& x);
Int evaluate(const QuadraticForm& q, const std::vector<std::int64_t>& x);
// Bilinear form Q(x,y) = x^T Q y.
Int bilinear(const QuadraticForm& q, const std::vector<Int>& x, const std::vector<Int>& y);
std::vector<Int> gradient(const QuadraticForm& q, const std::vector<Int>& x);

// coeffs[j] is the coefficient of x^{degree-j} y^j.
struct BinaryForm {
  int degree = 0;
  std::vector<Int> coeffs;

  Int operator()(const Int& x, const Int& y) const;
};

// Discriminant with the binary-form normalisation; `shift` (optional) receives the t used
// in the substitution (x, y) -> (x, t x + y) that makes the leading coefficient nonzero.
Int discriminant(const BinaryForm& f, int* shift = nullptr);

struct Pencil {
  QuadraticForm q1, q2;
  BinaryForm f;
  Int disc_f;
  int disc_shift = 0;  // t with F(1,t) != 0 used for the discriminant

  int k() const { return q1.dim; }
  bool diagonal() const { return q1.matrix.is_diagonal() && q2.matrix.is_diagonal(); }
  QuadraticForm combination(const Int& a1, const Int& a2) const;
};

BinaryForm determinant_form(const QuadraticForm& q1, const QuadraticForm& q2);
Pencil make_pencil(const QuadraticForm& q1, const QuadraticForm& q2);

bool check_condition2(const Pencil& p);
bool check_diagonal_ratios(const Pencil& p);
bool check_condition4(const Pencil& p, const std::vector<std::pair<Rat, Rat>>& samples);

struct RealDiagonalization {
  std::vector<std::complex<double>> lambda;  // Q1 v = lambda Q2' v
  Eigen::MatrixXcd basis;                    // columns are the v
  long change_t = 0;                         // Q2' = Q2 + t Q1
  double max_residual = 0;                   // relative residual of the eigen equations
};
RealDiagonalization simultaneous_diagonalize_real(const Pencil& p);

using JacobianMinorMatrix = IntMatrix;
JacobianMinorMatrix jacobian_minors(const Pencil& p, const std::vector<Int>& x);

struct EigenWindow {
  std::vector<double> rho;  // ascending by absolute value
  double nu_star = 0;       // max(|nu1|, |nu2|)
  double ratio = 0;         // |rho_2| / nu_star
};
EigenWindow eigenvalue_window(const Pencil& p, double nu1, double nu2);

Eigen::MatrixXd to_eigen(const IntMatrix& m);

}  // namespace qfp
