#pragma once

#include <array>
#include <complex>
#include <vector>

#include "qfp/common.hpp"
#include "qfp/forms.hpp"
#include "qfp/localarith.hpp"
#include "qfp/weight.hpp"

namespace qfp {

using cd = std::complex<double>;
using Pair = std::array<Int, 2>;

// S_q(a) = sum_{x mod q} e_q(a.Q(x)).
cd complete_sum_sq(const Pencil& p, const Pair& a, long q, const Budget& b = {});
// T(n;q) = sum_{(a,q)=1} S_q(a) e_q(-a.n).
cd t_direct(const Pencil& p, const Target& n, long q, const Budget& b = {});

struct SmithDecomposition {
  std::vector<Int> d;
  IntMatrix left, right;  // left * M * right = diag(d)
};
SmithDecomposition smith_normal_form(const IntMatrix& m);

// #{z mod q^e : q^e | 2 z^T (a.Q)} via the Smith form, and by enumeration.
Int z_count(const Pencil& p, const Pair& a, long q, int e);
Int z_count_naive(const Pencil& p, const Pair& a, long q, int e, const Budget& b = {});

struct MinorArcSum {
  std::vector<long> l;
  long q = 0;
  cd value;
};
// S(l;q) factorised as sum_a G(a,l1) G(-a,l2) with G(a,l) = sum_x e_q(a.Q(x) + l.x).
MinorArcSum minor_arc_sum(const Pencil& p, const std::vector<long>& l, long q, const Budget& b = {},
                          Exec exec = Exec::Parallel);
// Unfactorised triple sum over a, x, y; the reference route.
cd minor_arc_sum_direct(const Pencil& p, const std::vector<long>& l, long q, const Budget& b = {});

// S(alpha) = sum_x e(alpha.Q(x)) w(x/B), exhaustive sweep over the support box.
cd eval_generating(const Pencil& p, const std::array<double, 2>& alpha, double B, const WeightSpec& w,
                   const Budget& b = {}, Exec exec = Exec::Parallel);
// alpha = a/q + theta with the a/q part reduced exactly.
cd eval_generating(const Pencil& p, const Pair& a, long q, const std::array<double, 2>& theta, double B,
                   const WeightSpec& w, const Budget& b = {}, Exec exec = Exec::Parallel);
// Product of one-dimensional sums; requires a diagonal pencil.
cd eval_generating_separable(const Pencil& p, const Pair& a, long q, const std::array<double, 2>& theta, double B,
                             const WeightSpec& w);

}  // namespace qfp
