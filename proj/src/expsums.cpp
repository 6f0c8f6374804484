#include "qfp/expsums.hpp"

#include <cmath>
#include <numeric>

namespace qfp {

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

std::vector<cd> roots_of_unity(long q) {
  std::vector<cd> r(static_cast<std::size_t>(q));
  for (long j = 0; j < q; ++j) {
    const double t = kTwoPi * static_cast<double>(j) / static_cast<double>(q);
    r[static_cast<std::size_t>(j)] = {std::cos(t), std::sin(t)};
  }
  return r;
}

cd expi(long double phase) {
  long double f = phase - std::floor(phase);
  const double t = static_cast<double>(kTwoPi * f);
  return {std::cos(t), std::sin(t)};
}

// Neumaier compensated sum of complex values.
struct CompSum {
  double re = 0, im = 0, cre = 0, cim = 0;
  static void add1(double& s, double& c, double v) {
    double t = s + v;
    if (std::abs(s) >= std::abs(v))
      c += (s - t) + v;
    else
      c += (v - t) + s;
    s = t;
  }
  void add(cd v) {
    add1(re, cre, v.real());
    add1(im, cim, v.imag());
  }
  cd value() const { return {re + cre, im + cim}; }
};

// Histogram of (Q1(x), Q2(x), l.x) mod q over x mod q; third axis has size 1 when l is empty.
std::vector<long long> residue_histogram(const Pencil& p, long q, const std::vector<long>& l, const Budget& b) {
  const int k = p.k();
  require_budget(std::pow(static_cast<double>(q), k), b.evals, "residue histogram");
  const long ql = l.empty() ? 1 : q;
  const auto r1 = reduce_mod(p.q1.matrix, q), r2 = reduce_mod(p.q2.matrix, q);
  std::vector<std::int64_t> lin(static_cast<std::size_t>(k), 0);
  if (!l.empty())
    for (int i = 0; i < k; ++i) lin[static_cast<std::size_t>(i)] = mod(l[static_cast<std::size_t>(i)], q);
  const std::size_t cells = static_cast<std::size_t>(q) * static_cast<std::size_t>(q) * static_cast<std::size_t>(ql);
  std::vector<long long> hist(cells, 0);
  const int last = k - 1;
  const auto& ref1 = r1;
  const auto& ref2 = r2;
  auto at = [](const ModMat& m, int i, int j) { return m[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)]; };
  std::vector<std::int64_t> x(static_cast<std::size_t>(k), 0);
  for (;;) {
    // value with x_last = 0
    std::int64_t A1 = 0, A2 = 0, L1 = 0, L2 = 0, s0 = 0;
    for (int i = 0; i < last; ++i) {
      for (int j = 0; j < last; ++j) {
        A1 = (A1 + mulmod(at(ref1, i, j), x[static_cast<std::size_t>(i)] * x[static_cast<std::size_t>(j)] % q, q)) % q;
        A2 = (A2 + mulmod(at(ref2, i, j), x[static_cast<std::size_t>(i)] * x[static_cast<std::size_t>(j)] % q, q)) % q;
      }
      L1 = (L1 + 2 * at(ref1, last, i) * x[static_cast<std::size_t>(i)]) % q;
      L2 = (L2 + 2 * at(ref2, last, i) * x[static_cast<std::size_t>(i)]) % q;
      s0 = (s0 + lin[static_cast<std::size_t>(i)] * x[static_cast<std::size_t>(i)]) % q;
    }
    const std::int64_t d1 = at(ref1, last, last), d2 = at(ref2, last, last), ll = lin[static_cast<std::size_t>(last)];
    for (std::int64_t t = 0; t < q; ++t) {
      const std::int64_t v1 = (A1 + t * ((L1 + d1 * t) % q)) % q;
      const std::int64_t v2 = (A2 + t * ((L2 + d2 * t) % q)) % q;
      const std::int64_t s = l.empty() ? 0 : (s0 + ll * t) % q;
      ++hist[(static_cast<std::size_t>(v1) * static_cast<std::size_t>(q) + static_cast<std::size_t>(v2)) *
                 static_cast<std::size_t>(ql) +
             static_cast<std::size_t>(s)];
    }
    int i = last - 1;
    while (i >= 0) {
      if (++x[static_cast<std::size_t>(i)] < q) break;
      x[static_cast<std::size_t>(i)] = 0;
      --i;
    }
    if (i < 0) break;
  }
  return hist;
}

bool primitive_pair(long a1, long a2, long q) { return std::gcd(std::gcd(a1, a2), q) == 1; }

}  // namespace

cd complete_sum_sq(const Pencil& p, const Pair& a, long q, const Budget& b) {
  if (q < 1) throw InvalidInput("modulus must be positive");
  if (q == 1) return 1.0;
  auto hist = residue_histogram(p, q, {}, b);
  const auto e = roots_of_unity(q);
  const std::int64_t a1 = to_i64(Int(a[0] % q)), a2 = to_i64(Int(a[1] % q));
  CompSum s;
  for (long r1 = 0; r1 < q; ++r1)
    for (long r2 = 0; r2 < q; ++r2) {
      const long long h = hist[static_cast<std::size_t>(r1 * q + r2)];
      if (h == 0) continue;
      s.add(static_cast<double>(h) * e[static_cast<std::size_t>(mod(a1 * r1 + a2 * r2, q))]);
    }
  return s.value();
}

cd t_direct(const Pencil& p, const Target& n, long q, const Budget& b) {
  if (q < 1) throw InvalidInput("modulus must be positive");
  if (q == 1) return 1.0;
  require_budget(std::pow(static_cast<double>(q), 4), b.evals, "t_direct");
  auto hist = residue_histogram(p, q, {}, b);
  const auto e = roots_of_unity(q);
  Int qq = q, t1, t2;
  mpz_fdiv_r(t1.get_mpz_t(), n[0].get_mpz_t(), qq.get_mpz_t());
  mpz_fdiv_r(t2.get_mpz_t(), n[1].get_mpz_t(), qq.get_mpz_t());
  const long n1 = t1.get_si(), n2 = t2.get_si();
  CompSum s;
  for (long a1 = 0; a1 < q; ++a1)
    for (long a2 = 0; a2 < q; ++a2) {
      if (!primitive_pair(a1, a2, q)) continue;
      for (long r1 = 0; r1 < q; ++r1)
        for (long r2 = 0; r2 < q; ++r2) {
          const long long h = hist[static_cast<std::size_t>(r1 * q + r2)];
          if (h == 0) continue;
          s.add(static_cast<double>(h) * e[static_cast<std::size_t>(mod(a1 * (r1 - n1) + a2 * (r2 - n2), q))]);
        }
    }
  return s.value();
}

SmithDecomposition smith_normal_form(const IntMatrix& m0) {
  if (!m0.is_square()) throw InvalidInput("smith_normal_form: square matrix expected");
  const int n = m0.rows;
  IntMatrix m = m0, L = IntMatrix::identity(n), R = IntMatrix::identity(n);
  auto swap_rows = [&](IntMatrix& a, int i, int j) {
    for (int c = 0; c < a.cols; ++c) std::swap(a(i, c), a(j, c));
  };
  auto swap_cols = [&](IntMatrix& a, int i, int j) {
    for (int r = 0; r < a.rows; ++r) std::swap(a(r, i), a(r, j));
  };
  // row_i -= f * row_j
  auto row_op = [&](IntMatrix& a, int i, int j, const Int& f) {
    for (int c = 0; c < a.cols; ++c) a(i, c) -= f * a(j, c);
  };
  auto col_op = [&](IntMatrix& a, int i, int j, const Int& f) {
    for (int r = 0; r < a.rows; ++r) a(r, i) -= f * a(r, j);
  };
  for (int t = 0; t < n; ++t) {
    for (;;) {
      int pi = -1, pj = -1;
      for (int i = t; i < n; ++i)
        for (int j = t; j < n; ++j)
          if (m(i, j) != 0 && (pi < 0 || abs(m(i, j)) < abs(m(pi, pj)))) {
            pi = i;
            pj = j;
          }
      if (pi < 0) break;
      if (pi != t) {
        swap_rows(m, pi, t);
        swap_rows(L, pi, t);
      }
      if (pj != t) {
        swap_cols(m, pj, t);
        swap_cols(R, pj, t);
      }
      bool clean = true;
      for (int i = t + 1; i < n; ++i) {
        if (m(i, t) == 0) continue;
        Int f;
        mpz_fdiv_q(f.get_mpz_t(), m(i, t).get_mpz_t(), m(t, t).get_mpz_t());
        row_op(m, i, t, f);
        row_op(L, i, t, f);
        if (m(i, t) != 0) clean = false;
      }
      for (int j = t + 1; j < n; ++j) {
        if (m(t, j) == 0) continue;
        Int f;
        mpz_fdiv_q(f.get_mpz_t(), m(t, j).get_mpz_t(), m(t, t).get_mpz_t());
        col_op(m, j, t, f);
        col_op(R, j, t, f);
        if (m(t, j) != 0) clean = false;
      }
      if (!clean) continue;
      // divisibility: fold an offending row into row t
      int bad = -1;
      for (int i = t + 1; i < n && bad < 0; ++i)
        for (int j = t + 1; j < n; ++j)
          if (!mpz_divisible_p(m(i, j).get_mpz_t(), m(t, t).get_mpz_t())) {
            bad = i;
            break;
          }
      if (bad < 0) break;
      row_op(m, t, bad, Int(-1));
      row_op(L, t, bad, Int(-1));
    }
    if (m(t, t) < 0) {
      for (int c = 0; c < n; ++c) {
        m(t, c) = -m(t, c);
        L(t, c) = -L(t, c);
      }
    }
  }
  SmithDecomposition out;
  for (int i = 0; i < n; ++i) out.d.push_back(m(i, i));
  out.left = std::move(L);
  out.right = std::move(R);
  return out;
}

Int z_count(const Pencil& p, const Pair& a, long q, int e) {
  auto snf = smith_normal_form(linear_combination(a[0], p.q1.matrix, a[1], p.q2.matrix));
  const Int qe = pow_int(Int(q), static_cast<unsigned long>(e));
  Int out = 1;
  for (const auto& d : snf.d) {
    Int g;
    Int twice = 2 * d;
    mpz_gcd(g.get_mpz_t(), twice.get_mpz_t(), qe.get_mpz_t());
    out *= g;
  }
  return out;
}

Int z_count_naive(const Pencil& p, const Pair& a, long q, int e, const Budget& b) {
  const int k = p.k();
  const std::int64_t M = ipow64(q, e);
  require_budget(std::pow(static_cast<double>(M), k), b.evals, "z_count_naive");
  auto m = reduce_mod(linear_combination(a[0], p.q1.matrix, a[1], p.q2.matrix), M);
  std::vector<std::int64_t> z(static_cast<std::size_t>(k), 0);
  long long cnt = 0;
  for (;;) {
    bool ok = true;
    for (int j = 0; j < k && ok; ++j) {
      __int128 s = 0;
      for (int i = 0; i < k; ++i)
        s += static_cast<__int128>(z[static_cast<std::size_t>(i)]) * m[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
      ok = (2 * s) % M == 0;
    }
    if (ok) ++cnt;
    int i = k - 1;
    while (i >= 0) {
      if (++z[static_cast<std::size_t>(i)] < M) break;
      z[static_cast<std::size_t>(i)] = 0;
      --i;
    }
    if (i < 0) break;
  }
  return Int(static_cast<long>(cnt));
}

MinorArcSum minor_arc_sum(const Pencil& p, const std::vector<long>& l, long q, const Budget& b, Exec exec) {
  const int k = p.k();
  if (static_cast<int>(l.size()) != 2 * k) throw InvalidInput("minor_arc_sum: l must have length 2k");
  MinorArcSum out{l, q, 0.0};
  if (q == 1) {
    out.value = 1.0;
    return out;
  }
  require_budget(2.0 * std::pow(static_cast<double>(q), 5) + 2.0 * std::pow(static_cast<double>(q), k), b.evals,
                 "minor_arc_sum");
  std::vector<long> l1(l.begin(), l.begin() + k), l2(l.begin() + k, l.end());
  auto h1 = residue_histogram(p, q, l1, b), h2 = residue_histogram(p, q, l2, b);
  const auto e = roots_of_unity(q);
  const std::size_t Q = static_cast<std::size_t>(q);
  // G(a, l) = sum_{r1,r2,s} h[r1][r2][s] e_q(a1 r1 + a2 r2 + s)
  auto G = [&](const std::vector<long long>& h, long a1, long a2) {
    CompSum s;
    for (std::size_t r1 = 0; r1 < Q; ++r1)
      for (std::size_t r2 = 0; r2 < Q; ++r2) {
        const long base = mod(a1 * static_cast<long>(r1) + a2 * static_cast<long>(r2), q);
        for (std::size_t t = 0; t < Q; ++t) {
          const long long c = h[(r1 * Q + r2) * Q + t];
          if (c) s.add(static_cast<double>(c) * e[static_cast<std::size_t>((base + static_cast<long>(t)) % q)]);
        }
      }
    return s.value();
  };
  std::vector<cd> terms(Q * Q, 0.0);
  auto work = [&](long a1) {
    for (long a2 = 0; a2 < q; ++a2) {
      if (!primitive_pair(a1, a2, q)) continue;
      terms[static_cast<std::size_t>(a1) * Q + static_cast<std::size_t>(a2)] =
          G(h1, a1, a2) * G(h2, mod(-a1, q), mod(-a2, q));
    }
  };
  if (exec == Exec::Parallel) {
#pragma omp parallel for schedule(dynamic)
    for (long a1 = 0; a1 < q; ++a1) work(a1);
  } else {
    for (long a1 = 0; a1 < q; ++a1) work(a1);
  }
  CompSum s;
  for (const auto& t : terms) s.add(t);
  out.value = s.value();
  return out;
}

cd minor_arc_sum_direct(const Pencil& p, const std::vector<long>& l, long q, const Budget& b) {
  const int k = p.k();
  if (static_cast<int>(l.size()) != 2 * k) throw InvalidInput("minor_arc_sum: l must have length 2k");
  if (q == 1) return 1.0;
  const double cost = std::pow(static_cast<double>(q), 2 * k + 2);
  require_budget(cost, b.evals, "minor_arc_sum_direct");
  const auto e = roots_of_unity(q);
  const auto r1 = reduce_mod(p.q1.matrix, q), r2 = reduce_mod(p.q2.matrix, q);
  const std::size_t K = static_cast<std::size_t>(k);
  auto qv = [&](const ModMat& m, const std::vector<long>& x) {
    long s = 0;
    for (std::size_t i = 0; i < K; ++i)
      for (std::size_t j = 0; j < K; ++j) s = (s + m[i][j] * x[i] % q * x[j]) % q;
    return s;
  };
  auto next = [&](std::vector<long>& x) {
    for (int i = k - 1; i >= 0; --i) {
      if (++x[static_cast<std::size_t>(i)] < q) return true;
      x[static_cast<std::size_t>(i)] = 0;
    }
    return false;
  };
  CompSum s;
  std::vector<long> x(K, 0);
  do {
    std::vector<long> y(K, 0);
    const long q1x = qv(r1, x), q2x = qv(r2, x);
    long lx = 0;
    for (std::size_t i = 0; i < K; ++i) lx += l[i] * x[i];
    do {
      const long q1y = qv(r1, y), q2y = qv(r2, y);
      long ly = 0;
      for (std::size_t i = 0; i < K; ++i) ly += l[K + i] * y[i];
      for (long a1 = 0; a1 < q; ++a1)
        for (long a2 = 0; a2 < q; ++a2) {
          if (!primitive_pair(a1, a2, q)) continue;
          const long ph = mod(a1 * (q1x - q1y) + a2 * (q2x - q2y) + lx + ly, q);
          s.add(e[static_cast<std::size_t>(ph)]);
        }
    } while (next(y));
  } while (next(x));
  return s.value();
}

namespace {

// Shared sweep: phase(Q1, Q2) supplies the unit-circle value for integer form values.
template <class Phase>
cd sweep_generating(const Pencil& p, double B, const WeightSpec& w, const Budget& b, Exec exec, Phase phase) {
  const int k = p.k();
  const long R = static_cast<long>(std::ceil(w.rho * B)) - 1;
  const double side = 2.0 * static_cast<double>(R) + 1.0;
  require_budget(std::pow(side, k), b.lattice, "eval_generating");
  std::vector<double> w1(static_cast<std::size_t>(2 * R + 1));
  for (long x = -R; x <= R; ++x) w1[static_cast<std::size_t>(x + R)] = w.eval1(static_cast<double>(x) / B);
  std::vector<std::int64_t> m1, m2;
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < k; ++j) {
      m1.push_back(to_i64(p.q1.matrix(i, j)));
      m2.push_back(to_i64(p.q2.matrix(i, j)));
    }
  const int last = k - 1;
  const std::size_t K = static_cast<std::size_t>(k);
  std::vector<cd> partial(static_cast<std::size_t>(2 * R + 1));
  auto slice = [&](long x0) {
    CompSum s;
    std::vector<long> x(K, -R);
    x[0] = x0;
    if (k == 1) {
      s.add(phase(m1[0] * x0 * x0, m2[0] * x0 * x0) * w1[static_cast<std::size_t>(x0 + R)]);
      return s.value();
    }
    for (;;) {
      double wp = 1;
      for (int i = 0; i < last; ++i) wp *= w1[static_cast<std::size_t>(x[static_cast<std::size_t>(i)] + R)];
      if (wp != 0) {
        std::int64_t A1 = 0, A2 = 0, L1 = 0, L2 = 0;
        for (int i = 0; i < last; ++i) {
          for (int j = 0; j < last; ++j) {
            A1 += m1[static_cast<std::size_t>(i * k + j)] * x[static_cast<std::size_t>(i)] * x[static_cast<std::size_t>(j)];
            A2 += m2[static_cast<std::size_t>(i * k + j)] * x[static_cast<std::size_t>(i)] * x[static_cast<std::size_t>(j)];
          }
          L1 += 2 * m1[static_cast<std::size_t>(last * k + i)] * x[static_cast<std::size_t>(i)];
          L2 += 2 * m2[static_cast<std::size_t>(last * k + i)] * x[static_cast<std::size_t>(i)];
        }
        const std::int64_t d1 = m1[static_cast<std::size_t>(last * k + last)], d2 = m2[static_cast<std::size_t>(last * k + last)];
        for (long t = -R; t <= R; ++t) {
          const double wt = w1[static_cast<std::size_t>(t + R)];
          if (wt == 0) continue;
          s.add(phase(A1 + t * (L1 + d1 * t), A2 + t * (L2 + d2 * t)) * (wp * wt));
        }
      }
      int i = last - 1;
      while (i >= 1) {
        if (++x[static_cast<std::size_t>(i)] <= R) break;
        x[static_cast<std::size_t>(i)] = -R;
        --i;
      }
      if (i < 1) break;
    }
    return s.value();
  };
  const long n0 = 2 * R + 1;
  if (exec == Exec::Parallel) {
#pragma omp parallel for schedule(dynamic)
    for (long i = 0; i < n0; ++i) partial[static_cast<std::size_t>(i)] = slice(i - R);
  } else {
    for (long i = 0; i < n0; ++i) partial[static_cast<std::size_t>(i)] = slice(i - R);
  }
  CompSum s;
  for (const auto& v : partial) s.add(v);
  return s.value() * w.normalization;
}

}  // namespace

cd eval_generating(const Pencil& p, const std::array<double, 2>& alpha, double B, const WeightSpec& w,
                   const Budget& b, Exec exec) {
  const long double a1 = alpha[0] - std::floor(static_cast<long double>(alpha[0]));
  const long double a2 = alpha[1] - std::floor(static_cast<long double>(alpha[1]));
  return sweep_generating(p, B, w, b, exec, [&](std::int64_t v1, std::int64_t v2) {
    return expi(a1 * static_cast<long double>(v1) + a2 * static_cast<long double>(v2));
  });
}

cd eval_generating(const Pencil& p, const Pair& a, long q, const std::array<double, 2>& theta, double B,
                   const WeightSpec& w, const Budget& b, Exec exec) {
  const std::int64_t a1 = to_i64(Int(a[0] % q)), a2 = to_i64(Int(a[1] % q));
  return sweep_generating(p, B, w, b, exec, [&](std::int64_t v1, std::int64_t v2) {
    const std::int64_t r = mod(mulmod(a1, mod(v1, q), q) + mulmod(a2, mod(v2, q), q), q);
    return expi(static_cast<long double>(r) / q + static_cast<long double>(theta[0]) * v1 +
                static_cast<long double>(theta[1]) * v2);
  });
}

cd eval_generating_separable(const Pencil& p, const Pair& a, long q, const std::array<double, 2>& theta, double B,
                             const WeightSpec& w) {
  if (!p.diagonal()) throw InvalidInput("separable generating sum needs a diagonal pencil");
  const int k = p.k();
  const long R = static_cast<long>(std::ceil(w.rho * B)) - 1;
  const std::int64_t a1 = to_i64(Int(a[0] % q)), a2 = to_i64(Int(a[1] % q));
  cd prod = 1.0;
  for (int i = 0; i < k; ++i) {
    const std::int64_t c = to_i64(p.q1.matrix(i, i)), d = to_i64(p.q2.matrix(i, i));
    const std::int64_t ci = mod(mulmod(a1, mod(c, q), q) + mulmod(a2, mod(d, q), q), q);
    const long double th = static_cast<long double>(theta[0]) * c + static_cast<long double>(theta[1]) * d;
    CompSum s;
    for (long x = -R; x <= R; ++x) {
      const double wx = w.eval1(static_cast<double>(x) / B);
      if (wx == 0) continue;
      const std::int64_t x2 = static_cast<std::int64_t>(x) * x;
      s.add(expi(static_cast<long double>(mulmod(ci, x2 % q, q)) / q + th * x2) * wx);
    }
    prod *= s.value();
  }
  return prod * w.normalization;
}

}  // namespace qfp
