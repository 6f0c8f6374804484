#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "qfp/arith.hpp"

namespace qfp {

struct IntMatrix {
  int rows = 0, cols = 0;
  std::vector<Int> a;

  IntMatrix() = default;
  IntMatrix(int r, int c) : rows(r), cols(c), a(static_cast<std::size_t>(r) * c, 0) {}
  static IntMatrix identity(int n);
  static IntMatrix diag(const std::vector<long>& d);
  static IntMatrix from_rows(const std::vector<std::vector<long>>& rows);

  Int& operator()(int i, int j) { return a[static_cast<std::size_t>(i) * cols + j]; }
  const Int& operator()(int i, int j) const { return a[static_cast<std::size_t>(i) * cols + j]; }
  bool operator==(const IntMatrix& o) const = default;

  bool is_square() const { return rows == cols; }
  bool is_symmetric() const;
  bool is_diagonal() const;
  IntMatrix operator*(const IntMatrix& o) const;
  IntMatrix operator+(const IntMatrix& o) const;
  IntMatrix scaled(const Int& s) const;
};

IntMatrix linear_combination(const Int& a, const IntMatrix& m1, const Int& b, const IntMatrix& m2);

// Fraction-free (Bareiss) determinant and rank over Q.
Int det_bareiss(IntMatrix m);
int rank_bareiss(IntMatrix m);
// Positive semidefinite test by all principal minors (exact).
bool is_psd_exact(const IntMatrix& m);
bool is_pd_exact(const IntMatrix& m);

// Dense matrices over Z/pZ, p prime; entries in [0,p).
using ModMat = std::vector<std::vector<std::int64_t>>;
ModMat reduce_mod(const IntMatrix& m, std::int64_t p);
std::int64_t det_mod_p(ModMat m, std::int64_t p);
int rank_mod_p(ModMat m, std::int64_t p);
// Basis of the right kernel {x : M x = 0} over F_p.
std::vector<std::vector<std::int64_t>> kernel_mod_p(ModMat m, std::int64_t p);
// One solution of M x = b over F_p, if any.
std::optional<std::vector<std::int64_t>> solve_mod_p(ModMat m, std::vector<std::int64_t> b, std::int64_t p);
// Congruence-diagonal entries of a symmetric matrix over F_p (odd p); zeros dropped.
std::vector<std::int64_t> diagonalize_symmetric_mod_p(ModMat m, std::int64_t p);

// #{y mod p^m : A y == b mod p^m} for an integer r x n system (entries reduced mod p^m).
Int count_linear_mod_pm(std::vector<std::vector<std::int64_t>> A, std::vector<std::int64_t> b,
                        std::int64_t p, int m);

}  // namespace qfp
