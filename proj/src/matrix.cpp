#include "qfp/matrix.hpp"

#include <climits>
#include <numeric>
#include <stdexcept>

namespace qfp {

IntMatrix IntMatrix::identity(int n) {
  IntMatrix m(n, n);
  for (int i = 0; i < n; ++i) m(i, i) = 1;
  return m;
}

IntMatrix IntMatrix::diag(const std::vector<long>& d) {
  const int n = static_cast<int>(d.size());
  IntMatrix m(n, n);
  for (int i = 0; i < n; ++i) m(i, i) = d[static_cast<std::size_t>(i)];
  return m;
}

IntMatrix IntMatrix::from_rows(const std::vector<std::vector<long>>& rows) {
  const int r = static_cast<int>(rows.size());
  const int c = r ? static_cast<int>(rows[0].size()) : 0;
  IntMatrix m(r, c);
  for (int i = 0; i < r; ++i) {
    if (static_cast<int>(rows[static_cast<std::size_t>(i)].size()) != c)
      throw std::invalid_argument("ragged matrix");
    for (int j = 0; j < c; ++j) m(i, j) = rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
  }
  return m;
}

bool IntMatrix::is_symmetric() const {
  if (!is_square()) return false;
  for (int i = 0; i < rows; ++i)
    for (int j = i + 1; j < cols; ++j)
      if ((*this)(i, j) != (*this)(j, i)) return false;
  return true;
}

bool IntMatrix::is_diagonal() const {
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j)
      if (i != j && (*this)(i, j) != 0) return false;
  return true;
}

IntMatrix IntMatrix::operator*(const IntMatrix& o) const {
  if (cols != o.rows) throw std::invalid_argument("matrix product dimension mismatch");
  IntMatrix r(rows, o.cols);
  for (int i = 0; i < rows; ++i)
    for (int l = 0; l < cols; ++l) {
      if ((*this)(i, l) == 0) continue;
      for (int j = 0; j < o.cols; ++j) r(i, j) += (*this)(i, l) * o(l, j);
    }
  return r;
}

IntMatrix IntMatrix::operator+(const IntMatrix& o) const {
  if (rows != o.rows || cols != o.cols) throw std::invalid_argument("matrix sum dimension mismatch");
  IntMatrix r = *this;
  for (std::size_t i = 0; i < a.size(); ++i) r.a[i] += o.a[i];
  return r;
}

IntMatrix IntMatrix::scaled(const Int& s) const {
  IntMatrix r = *this;
  for (auto& v : r.a) v *= s;
  return r;
}

IntMatrix linear_combination(const Int& a, const IntMatrix& m1, const Int& b, const IntMatrix& m2) {
  return m1.scaled(a) + m2.scaled(b);
}

Int det_bareiss(IntMatrix m) {
  if (!m.is_square()) throw std::invalid_argument("determinant of non-square matrix");
  const int n = m.rows;
  if (n == 0) return 1;
  Int prev = 1;
  int sign = 1;
  for (int k = 0; k < n - 1; ++k) {
    if (m(k, k) == 0) {
      int piv = -1;
      for (int i = k + 1; i < n; ++i)
        if (m(i, k) != 0) {
          piv = i;
          break;
        }
      if (piv < 0) return 0;
      for (int j = 0; j < n; ++j) std::swap(m(k, j), m(piv, j));
      sign = -sign;
    }
    for (int i = k + 1; i < n; ++i) {
      for (int j = k + 1; j < n; ++j) {
        Int t = m(k, k) * m(i, j) - m(i, k) * m(k, j);
        mpz_divexact(m(i, j).get_mpz_t(), t.get_mpz_t(), prev.get_mpz_t());
      }
    }
    prev = m(k, k);
  }
  return sign * m(n - 1, n - 1);
}

int rank_bareiss(IntMatrix m) {
  int r = 0;
  for (int c = 0; c < m.cols && r < m.rows; ++c) {
    int piv = -1;
    for (int i = r; i < m.rows; ++i)
      if (m(i, c) != 0) {
        piv = i;
        break;
      }
    if (piv < 0) continue;
    for (int j = 0; j < m.cols; ++j) std::swap(m(r, j), m(piv, j));
    for (int i = r + 1; i < m.rows; ++i) {
      if (m(i, c) == 0) continue;
      Int g = 0;
      Int f = m(i, c), pv = m(r, c);
      for (int j = c; j < m.cols; ++j) {
        m(i, j) = pv * m(i, j) - f * m(r, j);
        mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), m(i, j).get_mpz_t());
      }
      if (g > 1)
        for (int j = c; j < m.cols; ++j) mpz_divexact(m(i, j).get_mpz_t(), m(i, j).get_mpz_t(), g.get_mpz_t());
    }
    ++r;
  }
  return r;
}

namespace {

Int principal_minor(const IntMatrix& m, const std::vector<int>& idx) {
  const int n = static_cast<int>(idx.size());
  IntMatrix s(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) s(i, j) = m(idx[static_cast<std::size_t>(i)], idx[static_cast<std::size_t>(j)]);
  return det_bareiss(s);
}

}  // namespace

bool is_psd_exact(const IntMatrix& m) {
  const int n = m.rows;
  if (n > 20) throw std::invalid_argument("is_psd_exact: dimension too large");
  for (unsigned mask = 1; mask < (1u << n); ++mask) {
    std::vector<int> idx;
    for (int i = 0; i < n; ++i)
      if (mask & (1u << i)) idx.push_back(i);
    if (principal_minor(m, idx) < 0) return false;
  }
  return true;
}

bool is_pd_exact(const IntMatrix& m) {
  std::vector<int> idx;
  for (int i = 0; i < m.rows; ++i) {
    idx.push_back(i);
    if (principal_minor(m, idx) <= 0) return false;
  }
  return true;
}

ModMat reduce_mod(const IntMatrix& m, std::int64_t p) {
  ModMat r(static_cast<std::size_t>(m.rows), std::vector<std::int64_t>(static_cast<std::size_t>(m.cols)));
  Int pp = p;
  for (int i = 0; i < m.rows; ++i)
    for (int j = 0; j < m.cols; ++j) {
      Int v;
      mpz_fdiv_r(v.get_mpz_t(), m(i, j).get_mpz_t(), pp.get_mpz_t());
      r[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = v.get_si();
    }
  return r;
}

namespace {

// Row-reduce in place to reduced echelon form; returns pivot columns.
std::vector<int> rref_mod_p(ModMat& m, std::int64_t p, std::vector<std::int64_t>* rhs = nullptr) {
  std::vector<int> pivots;
  const int rows = static_cast<int>(m.size());
  const int cols = rows ? static_cast<int>(m[0].size()) : 0;
  int r = 0;
  for (int c = 0; c < cols && r < rows; ++c) {
    int piv = -1;
    for (int i = r; i < rows; ++i)
      if (m[static_cast<std::size_t>(i)][static_cast<std::size_t>(c)] % p != 0) {
        piv = i;
        break;
      }
    if (piv < 0) continue;
    std::swap(m[static_cast<std::size_t>(r)], m[static_cast<std::size_t>(piv)]);
    if (rhs) std::swap((*rhs)[static_cast<std::size_t>(r)], (*rhs)[static_cast<std::size_t>(piv)]);
    auto& row = m[static_cast<std::size_t>(r)];
    std::int64_t inv = invmod(row[static_cast<std::size_t>(c)], p);
    for (auto& v : row) v = mulmod(v, inv, p);
    if (rhs) (*rhs)[static_cast<std::size_t>(r)] = mulmod((*rhs)[static_cast<std::size_t>(r)], inv, p);
    for (int i = 0; i < rows; ++i) {
      if (i == r) continue;
      auto& ri = m[static_cast<std::size_t>(i)];
      std::int64_t f = mod(ri[static_cast<std::size_t>(c)], p);
      if (f == 0) continue;
      for (int j = 0; j < cols; ++j)
        ri[static_cast<std::size_t>(j)] = mod(ri[static_cast<std::size_t>(j)] - mulmod(f, row[static_cast<std::size_t>(j)], p), p);
      if (rhs)
        (*rhs)[static_cast<std::size_t>(i)] =
            mod((*rhs)[static_cast<std::size_t>(i)] - mulmod(f, (*rhs)[static_cast<std::size_t>(r)], p), p);
    }
    pivots.push_back(c);
    ++r;
  }
  return pivots;
}

}  // namespace

std::int64_t det_mod_p(ModMat m, std::int64_t p) {
  const int n = static_cast<int>(m.size());
  std::int64_t det = 1;
  for (int c = 0; c < n; ++c) {
    int piv = -1;
    for (int i = c; i < n; ++i)
      if (mod(m[static_cast<std::size_t>(i)][static_cast<std::size_t>(c)], p) != 0) {
        piv = i;
        break;
      }
    if (piv < 0) return 0;
    if (piv != c) {
      std::swap(m[static_cast<std::size_t>(c)], m[static_cast<std::size_t>(piv)]);
      det = mod(-det, p);
    }
    std::int64_t pv = mod(m[static_cast<std::size_t>(c)][static_cast<std::size_t>(c)], p);
    det = mulmod(det, pv, p);
    std::int64_t inv = invmod(pv, p);
    for (int i = c + 1; i < n; ++i) {
      std::int64_t f = mulmod(mod(m[static_cast<std::size_t>(i)][static_cast<std::size_t>(c)], p), inv, p);
      if (f == 0) continue;
      for (int j = c; j < n; ++j)
        m[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] =
            mod(m[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] -
                    mulmod(f, m[static_cast<std::size_t>(c)][static_cast<std::size_t>(j)], p),
                p);
    }
  }
  return det;
}

int rank_mod_p(ModMat m, std::int64_t p) { return static_cast<int>(rref_mod_p(m, p).size()); }

std::vector<std::vector<std::int64_t>> kernel_mod_p(ModMat m, std::int64_t p) {
  const int cols = m.empty() ? 0 : static_cast<int>(m[0].size());
  auto pivots = rref_mod_p(m, p);
  std::vector<bool> is_pivot(static_cast<std::size_t>(cols), false);
  for (int c : pivots) is_pivot[static_cast<std::size_t>(c)] = true;
  std::vector<std::vector<std::int64_t>> basis;
  for (int f = 0; f < cols; ++f) {
    if (is_pivot[static_cast<std::size_t>(f)]) continue;
    std::vector<std::int64_t> v(static_cast<std::size_t>(cols), 0);
    v[static_cast<std::size_t>(f)] = 1;
    for (std::size_t r = 0; r < pivots.size(); ++r)
      v[static_cast<std::size_t>(pivots[r])] = mod(-m[r][static_cast<std::size_t>(f)], p);
    basis.push_back(std::move(v));
  }
  return basis;
}

std::optional<std::vector<std::int64_t>> solve_mod_p(ModMat m, std::vector<std::int64_t> b, std::int64_t p) {
  const int cols = m.empty() ? 0 : static_cast<int>(m[0].size());
  for (auto& v : b) v = mod(v, p);
  auto pivots = rref_mod_p(m, p, &b);
  for (std::size_t r = pivots.size(); r < m.size(); ++r)
    if (b[r] != 0) return std::nullopt;
  std::vector<std::int64_t> x(static_cast<std::size_t>(cols), 0);
  for (std::size_t r = 0; r < pivots.size(); ++r) x[static_cast<std::size_t>(pivots[r])] = b[r];
  return x;
}

std::vector<std::int64_t> diagonalize_symmetric_mod_p(ModMat m, std::int64_t p) {
  const int n = static_cast<int>(m.size());
  auto at = [&](int i, int j) -> std::int64_t& { return m[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)]; };
  for (auto& row : m)
    for (auto& v : row) v = mod(v, p);
  std::vector<std::int64_t> out;
  for (int i = 0; i < n; ++i) {
    if (at(i, i) == 0) {
      int j = -1;
      for (int l = i + 1; l < n; ++l)
        if (at(l, l) != 0) {
          j = l;
          break;
        }
      if (j >= 0) {
        std::swap(m[static_cast<std::size_t>(i)], m[static_cast<std::size_t>(j)]);
        for (int r = 0; r < n; ++r) std::swap(at(r, i), at(r, j));
      } else {
        for (int l = i + 1; l < n; ++l)
          if (at(i, l) != 0) {
            j = l;
            break;
          }
        if (j < 0) continue;  // row i is zero
        // x_i <- x_i + x_j: diagonal becomes 2*m_ij != 0 for odd p
        for (int c = 0; c < n; ++c) at(i, c) = mod(at(i, c) + at(j, c), p);
        for (int r = 0; r < n; ++r) at(r, i) = mod(at(r, i) + at(r, j), p);
      }
    }
    std::int64_t inv = invmod(at(i, i), p);
    for (int j = i + 1; j < n; ++j) {
      std::int64_t f = mulmod(at(j, i), inv, p);
      if (f == 0) continue;
      for (int c = 0; c < n; ++c) at(j, c) = mod(at(j, c) - mulmod(f, at(i, c), p), p);
      for (int r = 0; r < n; ++r) at(r, j) = mod(at(r, j) - mulmod(f, at(r, i), p), p);
    }
    out.push_back(at(i, i));
  }
  return out;
}

Int count_linear_mod_pm(std::vector<std::vector<std::int64_t>> A, std::vector<std::int64_t> b, std::int64_t p,
                        int m) {
  const std::int64_t M = ipow64(p, m);
  const int rows = static_cast<int>(A.size());
  const int cols = rows ? static_cast<int>(A[0].size()) : 0;
  for (auto& row : A)
    for (auto& v : row) v = mod(v, M);
  for (auto& v : b) v = mod(v, M);
  std::vector<bool> row_used(static_cast<std::size_t>(rows), false), col_used(static_cast<std::size_t>(cols), false);
  auto val = [&](std::int64_t x) { return x == 0 ? m : std::min(m, valuation(x, p)); };
  Int count = 1;
  for (;;) {
    int bi = -1, bj = -1, bv = INT_MAX;
    for (int i = 0; i < rows; ++i) {
      if (row_used[static_cast<std::size_t>(i)]) continue;
      for (int j = 0; j < cols; ++j) {
        if (col_used[static_cast<std::size_t>(j)]) continue;
        int v = val(A[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)]);
        if (v < bv) {
          bv = v;
          bi = i;
          bj = j;
        }
      }
    }
    if (bi < 0 || bv >= m) break;
    const std::int64_t pv = ipow64(p, bv);
    const std::int64_t u = A[static_cast<std::size_t>(bi)][static_cast<std::size_t>(bj)] / pv;
    const std::int64_t uinv = invmod(u, M);
    for (int r = 0; r < rows; ++r) {
      if (r == bi || row_used[static_cast<std::size_t>(r)]) continue;
      std::int64_t e = A[static_cast<std::size_t>(r)][static_cast<std::size_t>(bj)];
      if (e == 0) continue;
      std::int64_t f = mulmod(e / pv, uinv, M);
      for (int c = 0; c < cols; ++c)
        A[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)] =
            mod(A[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)] -
                    mulmod(f, A[static_cast<std::size_t>(bi)][static_cast<std::size_t>(c)], M),
                M);
      b[static_cast<std::size_t>(r)] = mod(b[static_cast<std::size_t>(r)] - mulmod(f, b[static_cast<std::size_t>(bi)], M), M);
    }
    row_used[static_cast<std::size_t>(bi)] = true;
    col_used[static_cast<std::size_t>(bj)] = true;
    if (b[static_cast<std::size_t>(bi)] % pv != 0) return 0;
    count *= pv;
  }
  for (int i = 0; i < rows; ++i)
    if (!row_used[static_cast<std::size_t>(i)] && b[static_cast<std::size_t>(i)] != 0) return 0;
  for (int j = 0; j < cols; ++j)
    if (!col_used[static_cast<std::size_t>(j)]) count *= M;
  return count;
}

}  // namespace qfp
