#include "qfp/forms.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <Eigen/Eigenvalues>

#include "qfp/common.hpp"

namespace qfp {

QuadraticForm::QuadraticForm(IntMatrix m) : dim(m.rows), matrix(std::move(m)) {
  if (!matrix.is_square()) throw InvalidInput("quadratic form matrix is not square");
  if (!matrix.is_symmetric()) throw InvalidInput("quadratic form matrix is not symmetric");
}

namespace {

void check_dim(const QuadraticForm& q, std::size_t n) {
  if (static_cast<int>(n) != q.dim) throw InvalidInput("dimension mismatch");
}

}  // namespace

Int evaluate(const QuadraticForm& q, const std::vector<Int>& x) {
  check_dim(q, x.size());
  Int s = 0;
  for (int i = 0; i < q.dim; ++i) {
    if (x[static_cast<std::size_t>(i)] == 0) continue;
    Int row = q.matrix(i, i) * x[static_cast<std::size_t>(i)];
    for (int j = i + 1; j < q.dim; ++j) row += 2 * q.matrix(i, j) * x[static_cast<std::size_t>(j)];
    s += row * x[static_cast<std::size_t>(i)];
  }
  return s;
}

Int evaluate(const QuadraticForm& q, const std::vector<std::int64_t>& x) {
  std::vector<Int> xi(x.begin(), x.end());
  return evaluate(q, xi);
}

Int bilinear(const QuadraticForm& q, const std::vector<Int>& x, const std::vector<Int>& y) {
  check_dim(q, x.size());
  check_dim(q, y.size());
  Int s = 0;
  for (int i = 0; i < q.dim; ++i)
    for (int j = 0; j < q.dim; ++j) s += x[static_cast<std::size_t>(i)] * q.matrix(i, j) * y[static_cast<std::size_t>(j)];
  return s;
}

std::vector<Int> gradient(const QuadraticForm& q, const std::vector<Int>& x) {
  check_dim(q, x.size());
  std::vector<Int> g(static_cast<std::size_t>(q.dim), 0);
  for (int i = 0; i < q.dim; ++i) {
    for (int j = 0; j < q.dim; ++j) g[static_cast<std::size_t>(i)] += q.matrix(i, j) * x[static_cast<std::size_t>(j)];
    g[static_cast<std::size_t>(i)] *= 2;
  }
  return g;
}

Int BinaryForm::operator()(const Int& x, const Int& y) const {
  Int s = 0;
  for (int j = 0; j <= degree; ++j)
    s += coeffs[static_cast<std::size_t>(j)] * pow_int(x, static_cast<unsigned long>(degree - j)) *
         pow_int(y, static_cast<unsigned long>(j));
  return s;
}

BinaryForm determinant_form(const QuadraticForm& q1, const QuadraticForm& q2) {
  if (q1.dim != q2.dim) throw InvalidInput("pencil forms have different dimensions");
  const int k = q1.dim;
  // F(1,t) = sum_j c_j t^j; interpolate at t = 0..k with exact determinants.
  std::vector<Rat> dd(static_cast<std::size_t>(k + 1));
  for (int t = 0; t <= k; ++t) dd[static_cast<std::size_t>(t)] = Rat(det_bareiss(linear_combination(1, q1.matrix, t, q2.matrix)));
  for (int level = 1; level <= k; ++level)
    for (int i = k; i >= level; --i)
      dd[static_cast<std::size_t>(i)] = (dd[static_cast<std::size_t>(i)] - dd[static_cast<std::size_t>(i - 1)]) / level;
  // Newton form -> monomial coefficients
  std::vector<Rat> poly(static_cast<std::size_t>(k + 1), 0);
  for (int i = k; i >= 0; --i) {
    // poly = poly * (t - i) + dd[i]
    for (int j = k; j >= 1; --j) poly[static_cast<std::size_t>(j)] = poly[static_cast<std::size_t>(j - 1)] - i * poly[static_cast<std::size_t>(j)];
    poly[0] = -i * poly[0];
    poly[0] += dd[static_cast<std::size_t>(i)];
  }
  BinaryForm f;
  f.degree = k;
  f.coeffs.resize(static_cast<std::size_t>(k + 1));
  for (int j = 0; j <= k; ++j) {
    Rat c = poly[static_cast<std::size_t>(j)];
    c.canonicalize();
    if (c.get_den() != 1) throw std::logic_error("determinant form interpolation is not integral");
    f.coeffs[static_cast<std::size_t>(j)] = c.get_num();
  }
  return f;
}

Int discriminant(const BinaryForm& f, int* shift) {
  const int k = f.degree;
  if (k < 2) throw InvalidInput("discriminant needs degree >= 2");
  auto binom = [](int n, int r) {
    Int b;
    mpz_bin_uiui(b.get_mpz_t(), static_cast<unsigned long>(n), static_cast<unsigned long>(r));
    return b;
  };
  // G(x,y) = F(x, t x + y); G(1,0) = F(1,t).
  int t = -1;
  for (int c = 0; c <= k; ++c) {
    Int v = 0;
    for (int j = 0; j <= k; ++j) v += f.coeffs[static_cast<std::size_t>(j)] * pow_int(Int(c), static_cast<unsigned long>(j));
    if (v != 0) {
      t = c;
      break;
    }
  }
  if (shift) *shift = t < 0 ? 0 : t;
  if (t < 0) return 0;  // F identically zero
  std::vector<Int> g(static_cast<std::size_t>(k + 1), 0);  // descending in u = x/y
  for (int i = 0; i <= k; ++i)
    for (int j = i; j <= k; ++j)
      g[static_cast<std::size_t>(i)] += f.coeffs[static_cast<std::size_t>(j)] * binom(j, i) * pow_int(Int(t), static_cast<unsigned long>(j - i));
  std::vector<Int> dg(static_cast<std::size_t>(k));
  for (int i = 0; i < k; ++i) dg[static_cast<std::size_t>(i)] = g[static_cast<std::size_t>(i)] * (k - i);
  const int m = k, n = k - 1, size = m + n;
  IntMatrix syl(size, size);
  for (int r = 0; r < n; ++r)
    for (int i = 0; i <= m; ++i) syl(r, r + i) = g[static_cast<std::size_t>(i)];
  for (int r = 0; r < m; ++r)
    for (int i = 0; i <= n; ++i) syl(n + r, r + i) = dg[static_cast<std::size_t>(i)];
  Int res = det_bareiss(syl);
  Int d;
  mpz_divexact(d.get_mpz_t(), res.get_mpz_t(), g[0].get_mpz_t());
  if ((k * (k - 1) / 2) % 2 == 1) d = -d;
  return d;
}

QuadraticForm Pencil::combination(const Int& a1, const Int& a2) const {
  return QuadraticForm(linear_combination(a1, q1.matrix, a2, q2.matrix));
}

Pencil make_pencil(const QuadraticForm& q1, const QuadraticForm& q2) {
  if (q1.dim != q2.dim) throw InvalidInput("pencil forms have different dimensions");
  if (q1.dim < 1) throw InvalidInput("empty quadratic form");
  Pencil p;
  p.q1 = q1;
  p.q2 = q2;
  p.f = determinant_form(q1, q2);
  if (p.f.degree >= 2)
    p.disc_f = discriminant(p.f, &p.disc_shift);
  else
    p.disc_f = 0;
  return p;
}

bool check_condition2(const Pencil& p) { return p.disc_f != 0; }

bool check_diagonal_ratios(const Pencil& p) {
  if (!p.diagonal()) throw InvalidInput("check_diagonal_ratios needs diagonal forms");
  const int k = p.k();
  for (int i = 0; i < k; ++i)
    if (p.q1.matrix(i, i) == 0 && p.q2.matrix(i, i) == 0) throw InvalidInput("ratio undefined: a_i = b_i = 0");
  for (int i = 0; i < k; ++i)
    for (int j = i + 1; j < k; ++j)
      if (p.q1.matrix(i, i) * p.q2.matrix(j, j) == p.q1.matrix(j, j) * p.q2.matrix(i, i)) return false;
  return true;
}

bool check_condition4(const Pencil& p, const std::vector<std::pair<Rat, Rat>>& samples) {
  const int k = p.k();
  for (const auto& [n1, n2] : samples) {
    if (n1 == 0 && n2 == 0) throw InvalidInput("nu = (0,0) in condition 4 samples");
    Int l;
    mpz_lcm(l.get_mpz_t(), n1.get_den_mpz_t(), n2.get_den_mpz_t());
    Rat a = n1 * l, b = n2 * l;
    IntMatrix m = linear_combination(a.get_num(), p.q1.matrix, b.get_num(), p.q2.matrix);
    if (rank_bareiss(m) < k - 1) return false;
  }
  return true;
}

Eigen::MatrixXd to_eigen(const IntMatrix& m) {
  Eigen::MatrixXd e(m.rows, m.cols);
  for (int i = 0; i < m.rows; ++i)
    for (int j = 0; j < m.cols; ++j) e(i, j) = m(i, j).get_d();
  return e;
}

RealDiagonalization simultaneous_diagonalize_real(const Pencil& p) {
  if (!check_condition2(p)) throw ConditionFailure("simultaneous diagonalisation needs Condition 2");
  RealDiagonalization out;
  IntMatrix q2c;
  bool found = false;
  for (long step = 0; step <= 2L * p.k() + 2 && !found; ++step) {
    long t = (step % 2 == 0) ? step / 2 : -(step + 1) / 2;
    q2c = linear_combination(t, p.q1.matrix, 1, p.q2.matrix);
    if (det_bareiss(q2c) != 0) {
      out.change_t = t;
      found = true;
    }
  }
  if (!found) throw ConditionFailure("no nonsingular combination Q2 + t Q1 found");
  Eigen::MatrixXd a = to_eigen(p.q1.matrix), b = to_eigen(q2c);
  Eigen::MatrixXd m = b.partialPivLu().solve(a);
  Eigen::EigenSolver<Eigen::MatrixXd> es(m);
  if (es.info() != Eigen::Success) throw NumericalError("eigensolver failed");
  const int k = p.k();
  out.basis = es.eigenvectors();
  const double na = a.norm(), nb = b.norm();
  for (int i = 0; i < k; ++i) {
    std::complex<double> lam = es.eigenvalues()(i);
    Eigen::VectorXcd v = out.basis.col(i);
    Eigen::VectorXcd r = a.cast<std::complex<double>>() * v - lam * (b.cast<std::complex<double>>() * v);
    double rel = r.norm() / ((na + std::abs(lam) * nb) * v.norm());
    out.max_residual = std::max(out.max_residual, rel);
    out.lambda.push_back(lam);
  }
  if (out.max_residual > 1e-8) throw NumericalError("generalised eigenproblem residual above tolerance");
  return out;
}

JacobianMinorMatrix jacobian_minors(const Pencil& p, const std::vector<Int>& x) {
  auto g1 = gradient(p.q1, x), g2 = gradient(p.q2, x);
  const int k = p.k();
  IntMatrix d(k, k);
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < k; ++j)
      d(i, j) = g1[static_cast<std::size_t>(i)] * g2[static_cast<std::size_t>(j)] -
                g1[static_cast<std::size_t>(j)] * g2[static_cast<std::size_t>(i)];
  return d;
}

EigenWindow eigenvalue_window(const Pencil& p, double nu1, double nu2) {
  if (nu1 == 0 && nu2 == 0) throw InvalidInput("nu = (0,0)");
  Eigen::MatrixXd m = nu1 * to_eigen(p.q1.matrix) + nu2 * to_eigen(p.q2.matrix);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) throw NumericalError("symmetric eigensolve failed");
  EigenWindow w;
  for (int i = 0; i < m.rows(); ++i) w.rho.push_back(es.eigenvalues()(i));
  std::stable_sort(w.rho.begin(), w.rho.end(), [](double a, double b) { return std::abs(a) < std::abs(b); });
  w.nu_star = std::max(std::abs(nu1), std::abs(nu2));
  w.ratio = w.rho.size() >= 2 ? std::abs(w.rho[1]) / w.nu_star : 0.0;
  return w;
}

}  // namespace qfp
