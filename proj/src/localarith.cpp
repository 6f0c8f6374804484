#include "qfp/localarith.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <random>
#include <set>
#include <sstream>

#include <Eigen/Dense>

namespace qfp {

const char* to_string(PrimeKind k) {
  switch (k) {
    case PrimeKind::Bad: return "Bad";
    case PrimeKind::GoodTypeI: return "GoodTypeI";
    case PrimeKind::GoodTypeII: return "GoodTypeII";
    default: return "Unknown";
  }
}

const char* to_string(LocalStatus s) {
  switch (s) {
    case LocalStatus::Exact: return "Exact";
    case LocalStatus::StabilizedAt: return "StabilizedAt";
    default: return "Truncated";
  }
}

const char* to_string(Solvability s) {
  switch (s) {
    case Solvability::Solvable: return "Solvable";
    case Solvability::Unsolvable: return "Unsolvable";
    default: return "Undecided";
  }
}

namespace {

// Pencil matrices reduced mod M, flattened row-major.
struct ModPencil {
  int k;
  std::int64_t M;
  std::vector<std::int64_t> m1, m2;

  ModPencil(const Pencil& p, std::int64_t modulus) : k(p.k()), M(modulus) {
    auto r1 = reduce_mod(p.q1.matrix, M), r2 = reduce_mod(p.q2.matrix, M);
    for (int i = 0; i < k; ++i)
      for (int j = 0; j < k; ++j) {
        m1.push_back(r1[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)]);
        m2.push_back(r2[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)]);
      }
  }
  std::int64_t a(int f, int i, int j) const {
    return (f == 0 ? m1 : m2)[static_cast<std::size_t>(i * k + j)];
  }
  // Q_f(x) mod M for residues x in [0, M)
  std::int64_t eval(int f, const std::int64_t* x) const {
    __int128 s = 0;
    for (int i = 0; i < k; ++i) {
      if (x[i] == 0) continue;
      __int128 row = 0;
      for (int j = 0; j < k; ++j) row += static_cast<__int128>(a(f, i, j)) * x[j] % M;
      s += (row % M) * x[i] % M;
    }
    return static_cast<std::int64_t>(s % M);
  }
};

std::int64_t target_mod(const Int& v, std::int64_t M) {
  Int r;
  Int mm = M;
  mpz_fdiv_r(r.get_mpz_t(), v.get_mpz_t(), mm.get_mpz_t());
  return r.get_si();
}

std::vector<Int> as_int(const std::vector<std::int64_t>& x) { return std::vector<Int>(x.begin(), x.end()); }

int min_minor_valuation(const Pencil& p, const std::vector<Int>& x, long q) {
  auto d = jacobian_minors(p, x);
  int v = INT32_MAX;
  for (int i = 0; i < d.rows; ++i)
    for (int j = i + 1; j < d.cols; ++j)
      if (d(i, j) != 0) v = std::min(v, valuation(d(i, j), q));
  return v;
}

}  // namespace

std::vector<Int> bad_primes(const Pencil& p) {
  if (!check_condition2(p)) throw ConditionFailure("bad_primes: discriminant vanishes");
  auto ps = prime_divisors(Int(2 * p.disc_f));
  return ps;
}

Int count_points_naive(const Pencil& p, const Target& n, long q, int e, const LocalOptions& opt) {
  if (e == 0) return 1;
  const std::int64_t M = ipow64(q, e);
  const int k = p.k();
  require_budget(std::pow(static_cast<double>(M), k), opt.budget.evals, "count_points_naive");
  ModPencil mp(p, M);
  const std::int64_t t1 = target_mod(n[0], M), t2 = target_mod(n[1], M);
  const int last = k - 1;
  const std::int64_t d1 = mp.a(0, last, last), d2 = mp.a(1, last, last);
  long long total = 0;
  auto slice = [&](std::int64_t x0) -> long long {
    std::vector<std::int64_t> x(static_cast<std::size_t>(k), 0);
    x[0] = x0;
    long long cnt = 0;
    for (;;) {
      // prefix values with x_last = 0
      x[static_cast<std::size_t>(last)] = 0;
      std::int64_t A1 = k > 1 ? mp.eval(0, x.data()) : 0, A2 = k > 1 ? mp.eval(1, x.data()) : 0;
      __int128 L1 = 0, L2 = 0;
      for (int j = 0; j < last; ++j) {
        L1 += 2 * static_cast<__int128>(mp.a(0, last, j)) * x[static_cast<std::size_t>(j)];
        L2 += 2 * static_cast<__int128>(mp.a(1, last, j)) * x[static_cast<std::size_t>(j)];
      }
      const std::int64_t l1 = static_cast<std::int64_t>(L1 % M), l2 = static_cast<std::int64_t>(L2 % M);
      const std::int64_t lo = (k == 1) ? x0 : 0, hi = (k == 1) ? x0 + 1 : M;
      for (std::int64_t t = lo; t < hi; ++t) {
        std::int64_t v1 = static_cast<std::int64_t>((A1 + static_cast<__int128>(t) * ((l1 + mulmod(d1, t, M)) % M)) % M);
        if (v1 != t1) continue;
        std::int64_t v2 = static_cast<std::int64_t>((A2 + static_cast<__int128>(t) * ((l2 + mulmod(d2, t, M)) % M)) % M);
        if (v2 == t2) ++cnt;
      }
      if (k <= 2) break;
      int i = last - 1;
      while (i >= 1) {
        if (++x[static_cast<std::size_t>(i)] < M) break;
        x[static_cast<std::size_t>(i)] = 0;
        --i;
      }
      if (i < 1) break;
    }
    return cnt;
  };
  if (k == 1) {
    for (std::int64_t x0 = 0; x0 < M; ++x0) total += slice(x0);
    return Int(static_cast<long>(total));
  }
  if (opt.exec == Exec::Parallel) {
#pragma omp parallel for reduction(+ : total) schedule(dynamic)
    for (std::int64_t x0 = 0; x0 < M; ++x0) total += slice(x0);
  } else {
    for (std::int64_t x0 = 0; x0 < M; ++x0) total += slice(x0);
  }
  return Int(static_cast<long>(total));
}

Int count_points_tower(const Pencil& p, const Target& n, long q, int e, const LocalOptions& opt) {
  if (e == 0) return 1;
  const int k = p.k();
  const double base = std::pow(static_cast<double>(q), k);
  require_budget(base, opt.budget.evals, "count_points_tower");
  double spent = base;
  std::vector<std::int64_t> sols;  // flat, k entries per solution
  {
    ModPencil mp(p, q);
    const std::int64_t t1 = target_mod(n[0], q), t2 = target_mod(n[1], q);
    std::vector<std::int64_t> x(static_cast<std::size_t>(k), 0);
    for (;;) {
      if (mp.eval(0, x.data()) == t1 && mp.eval(1, x.data()) == t2) sols.insert(sols.end(), x.begin(), x.end());
      int i = k - 1;
      while (i >= 0) {
        if (++x[static_cast<std::size_t>(i)] < q) break;
        x[static_cast<std::size_t>(i)] = 0;
        --i;
      }
      if (i < 0) break;
    }
  }
  std::int64_t qj = q;
  for (int j = 1; j < e; ++j) {
    const std::int64_t M = ipow64(q, j + 1);
    const std::size_t count = sols.size() / static_cast<std::size_t>(k);
    spent += static_cast<double>(count) * base;
    require_budget(spent, opt.budget.evals, "count_points_tower");
    ModPencil mp(p, M);
    const std::int64_t t1 = target_mod(n[0], M), t2 = target_mod(n[1], M);
    std::vector<std::vector<std::int64_t>> next(count);
    auto lift = [&](std::size_t s) {
      std::vector<std::int64_t> y(static_cast<std::size_t>(k), 0), x(static_cast<std::size_t>(k));
      const std::int64_t* x0 = &sols[s * static_cast<std::size_t>(k)];
      for (;;) {
        for (int i = 0; i < k; ++i) x[static_cast<std::size_t>(i)] = x0[i] + qj * y[static_cast<std::size_t>(i)];
        if (mp.eval(0, x.data()) == t1 && mp.eval(1, x.data()) == t2) next[s].insert(next[s].end(), x.begin(), x.end());
        int i = k - 1;
        while (i >= 0) {
          if (++y[static_cast<std::size_t>(i)] < q) break;
          y[static_cast<std::size_t>(i)] = 0;
          --i;
        }
        if (i < 0) break;
      }
    };
    if (opt.exec == Exec::Parallel) {
#pragma omp parallel for schedule(dynamic, 64)
      for (std::size_t s = 0; s < count; ++s) lift(s);
    } else {
      for (std::size_t s = 0; s < count; ++s) lift(s);
    }
    sols.clear();
    for (auto& v : next) sols.insert(sols.end(), v.begin(), v.end());
    qj = M;
  }
  return Int(static_cast<unsigned long>(sols.size() / static_cast<std::size_t>(k)));
}

Int count_points_prime(const Pencil& p, const Target& n, long q) {
  if (q == 2) throw InvalidInput("count_points_prime needs an odd prime");
  const int k = p.k();
  const int chi_m1 = legendre(-1, q);
  const std::int64_t c1 = target_mod(n[0], q), c2 = target_mod(n[1], q);
  auto r1 = reduce_mod(p.q1.matrix, q), r2 = reduce_mod(p.q2.matrix, q);
  Int total = pow_int(Int(q), static_cast<unsigned long>(k));  // a = 0
  for (long t = 0; t <= q; ++t) {
    const std::int64_t a1 = t < q ? 1 : 0, a2 = t < q ? t : 1;
    ModMat m(static_cast<std::size_t>(k), std::vector<std::int64_t>(static_cast<std::size_t>(k)));
    for (int i = 0; i < k; ++i)
      for (int j = 0; j < k; ++j)
        m[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] =
            mod(a1 * r1[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] +
                    a2 * r2[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)],
                q);
    auto d = diagonalize_symmetric_mod_p(m, q);
    const int r = static_cast<int>(d.size());
    std::int64_t delta = 1;
    for (auto v : d) delta = mulmod(delta, v, q);
    const int chi_delta = legendre(delta, q);
    const std::int64_t c = mod(a1 * c1 + a2 * c2, q);
    Int term = pow_int(Int(q), static_cast<unsigned long>(k - r)) * chi_delta;
    if (r % 2 == 0) {
      term *= pow_int(Int(q), static_cast<unsigned long>(r / 2));
      if ((r / 2) % 2 == 1 && chi_m1 < 0) term = -term;
      term *= (c == 0) ? Int(q - 1) : Int(-1);
    } else {
      if (c == 0) continue;
      term *= legendre(-c, q);
      term *= pow_int(Int(q), static_cast<unsigned long>((r + 1) / 2));
      if (((r + 1) / 2) % 2 == 1 && chi_m1 < 0) term = -term;
    }
    total += term;
  }
  Int q2 = Int(q) * q;
  if (!mpz_divisible_p(total.get_mpz_t(), q2.get_mpz_t())) throw std::logic_error("Gauss-sum count not integral");
  Int out;
  mpz_divexact(out.get_mpz_t(), total.get_mpz_t(), q2.get_mpz_t());
  return out;
}

std::vector<std::vector<std::int64_t>> singular_points_mod_p(const Pencil& p, const Target& n, long q,
                                                             const LocalOptions& opt) {
  if (q == 2) throw InvalidInput("singular_points_mod_p needs an odd prime");
  const int k = p.k();
  ModPencil mp(p, q);
  const std::int64_t t1 = target_mod(n[0], q), t2 = target_mod(n[1], q);
  auto r1 = reduce_mod(p.q1.matrix, q), r2 = reduce_mod(p.q2.matrix, q);
  std::set<std::vector<std::int64_t>> found;
  // the origin is singular for every member, including nonsingular ones
  if (t1 == 0 && t2 == 0) found.insert(std::vector<std::int64_t>(static_cast<std::size_t>(k), 0));
  for (long t = 0; t <= q; ++t) {
    const std::int64_t a1 = t < q ? 1 : 0, a2 = t < q ? t : 1;
    ModMat m(static_cast<std::size_t>(k), std::vector<std::int64_t>(static_cast<std::size_t>(k)));
    for (int i = 0; i < k; ++i)
      for (int j = 0; j < k; ++j)
        m[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] =
            mod(a1 * r1[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] +
                    a2 * r2[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)],
                q);
    if (det_mod_p(m, q) != 0) continue;
    auto basis = kernel_mod_p(m, q);
    const int d = static_cast<int>(basis.size());
    require_budget(std::pow(static_cast<double>(q), d), opt.budget.evals, "singular point scan");
    std::vector<std::int64_t> coef(static_cast<std::size_t>(d), 0), x(static_cast<std::size_t>(k));
    for (;;) {
      std::fill(x.begin(), x.end(), 0);
      for (int b = 0; b < d; ++b)
        for (int i = 0; i < k; ++i)
          x[static_cast<std::size_t>(i)] = mod(x[static_cast<std::size_t>(i)] +
                                                   coef[static_cast<std::size_t>(b)] * basis[static_cast<std::size_t>(b)][static_cast<std::size_t>(i)],
                                               q);
      if (mp.eval(0, x.data()) == t1 && mp.eval(1, x.data()) == t2) found.insert(x);
      int i = d - 1;
      while (i >= 0) {
        if (++coef[static_cast<std::size_t>(i)] < q) break;
        coef[static_cast<std::size_t>(i)] = 0;
        --i;
      }
      if (i < 0) break;
    }
  }
  return {found.begin(), found.end()};
}

PrimeClass classify_prime(const Pencil& p, const Target& n, long q, const LocalOptions& opt) {
  PrimeClass pc;
  pc.p = q;
  pc.target = n;
  if (q == 2 || mpz_divisible_ui_p(p.disc_f.get_mpz_t(), static_cast<unsigned long>(q))) {
    pc.kind = PrimeKind::Bad;
    return pc;
  }
  Int fv = p.f(n[1], Int(-n[0]));
  if (!mpz_divisible_ui_p(fv.get_mpz_t(), static_cast<unsigned long>(q))) {
    pc.kind = PrimeKind::GoodTypeI;
    return pc;
  }
  try {
    auto sing = singular_points_mod_p(p, n, q, opt);
    if (!sing.empty()) {
      pc.kind = PrimeKind::GoodTypeII;
      pc.evidence = sing.front();
    } else {
      pc.kind = PrimeKind::GoodTypeI;
      pc.type1_over_fp_only = true;
    }
  } catch (const BudgetError&) {
    pc.kind = PrimeKind::Unknown;
  }
  return pc;
}

namespace {

struct LiftContext {
  const Pencil& p;
  long q;
  int k;
  std::vector<std::int64_t> m1, m2;  // exact entries (must fit int64)
  std::uint64_t nodes = 0;
  std::uint64_t cap;
};

// #{y mod q^m : c + L^T y + q^j Q(y) == 0 mod q^m}, both equations.
Int lift_node(LiftContext& ctx, std::array<std::int64_t, 2> c, std::array<std::vector<std::int64_t>, 2> L, int j, int m,
              Int& partial) {
  if (m == 0) return 1;
  if (++ctx.nodes > ctx.cap) throw LiftingError("lifting node cap exceeded", partial);
  const long q = ctx.q;
  const int k = ctx.k;
  const std::int64_t M = ipow64(q, m);
  for (int f = 0; f < 2; ++f) {
    c[static_cast<std::size_t>(f)] = mod(c[static_cast<std::size_t>(f)], M);
    for (auto& v : L[static_cast<std::size_t>(f)]) v = mod(v, M);
  }
  if (j >= m) {
    std::vector<std::vector<std::int64_t>> A = {L[0], L[1]};
    return count_linear_mod_pm(A, {mod(-c[0], M), mod(-c[1], M)}, q, m);
  }
  ModMat Lq = {L[0], L[1]};
  for (auto& row : Lq)
    for (auto& v : row) v = mod(v, q);
  const int r = rank_mod_p(Lq, q);
  if (r == 2) return pow_int(Int(q), static_cast<unsigned long>(m * (k - 2)));
  auto y0 = solve_mod_p(Lq, {mod(-c[0], q), mod(-c[1], q)}, q);
  if (!y0) return 0;
  auto basis = kernel_mod_p(Lq, q);
  const int d = static_cast<int>(basis.size());
  const std::int64_t s = ipow64(q, j);
  const std::int64_t M1 = ipow64(q, m - 1);
  Int total = 0;
  std::vector<std::int64_t> coef(static_cast<std::size_t>(d), 0), y(static_cast<std::size_t>(k));
  for (;;) {
    for (int i = 0; i < k; ++i) {
      std::int64_t v = (*y0)[static_cast<std::size_t>(i)];
      for (int b = 0; b < d; ++b) v += coef[static_cast<std::size_t>(b)] * basis[static_cast<std::size_t>(b)][static_cast<std::size_t>(i)];
      y[static_cast<std::size_t>(i)] = mod(v, q);
    }
    std::array<std::int64_t, 2> c2;
    std::array<std::vector<std::int64_t>, 2> L2;
    for (int f = 0; f < 2; ++f) {
      const auto& mm = f == 0 ? ctx.m1 : ctx.m2;
      __int128 val = c[static_cast<std::size_t>(f)];
      __int128 qy = 0;
      std::vector<std::int64_t> Lf(static_cast<std::size_t>(k));
      for (int i = 0; i < k; ++i) {
        val += static_cast<__int128>(L[static_cast<std::size_t>(f)][static_cast<std::size_t>(i)]) * y[static_cast<std::size_t>(i)];
        __int128 row = 0;
        for (int l = 0; l < k; ++l) row += static_cast<__int128>(mm[static_cast<std::size_t>(i * k + l)]) * y[static_cast<std::size_t>(l)];
        qy += row * y[static_cast<std::size_t>(i)];
        Lf[static_cast<std::size_t>(i)] = static_cast<std::int64_t>(
            (static_cast<__int128>(L[static_cast<std::size_t>(f)][static_cast<std::size_t>(i)]) + 2 * static_cast<__int128>(s) * (row % M1)) % M1);
      }
      val += static_cast<__int128>(s) * (qy % M);
      if (val % q != 0) throw std::logic_error("lifting residue not divisible");
      c2[static_cast<std::size_t>(f)] = static_cast<std::int64_t>((val / q) % M1);
      L2[static_cast<std::size_t>(f)] = std::move(Lf);
    }
    total += lift_node(ctx, c2, std::move(L2), j + 1, m - 1, partial);
    int i = d - 1;
    while (i >= 0) {
      if (++coef[static_cast<std::size_t>(i)] < q) break;
      coef[static_cast<std::size_t>(i)] = 0;
      --i;
    }
    if (i < 0) break;
  }
  return total;
}

}  // namespace

Int count_points_lifted(const Pencil& p, const Target& n, long q, int e, const LocalOptions& opt) {
  if (e < 0) throw InvalidInput("negative exponent");
  if (e == 0) return 1;
  if (q == 2) return count_points_tower(p, n, q, e, opt);
  const int k = p.k();
  Int n1 = count_points_prime(p, n, q);
  if (e == 1) return n1;
  auto sing = singular_points_mod_p(p, n, q, opt);
  Int total = (n1 - static_cast<long>(sing.size())) * pow_int(Int(q), static_cast<unsigned long>((e - 1) * (k - 2)));
  LiftContext ctx{p, q, k, {}, {}, 0, opt.node_cap};
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < k; ++j) {
      ctx.m1.push_back(to_i64(p.q1.matrix(i, j)));
      ctx.m2.push_back(to_i64(p.q2.matrix(i, j)));
    }
  ipow64(q, e);  // range check
  for (const auto& x : sing) {
    auto xi = as_int(x);
    std::array<std::int64_t, 2> c;
    std::array<std::vector<std::int64_t>, 2> L;
    const std::int64_t M1 = ipow64(q, e - 1);
    for (int f = 0; f < 2; ++f) {
      const auto& qf = f == 0 ? p.q1 : p.q2;
      Int num = evaluate(qf, xi) - n[static_cast<std::size_t>(f)];
      Int cq;
      mpz_divexact_ui(cq.get_mpz_t(), num.get_mpz_t(), static_cast<unsigned long>(q));
      c[static_cast<std::size_t>(f)] = target_mod(cq, M1);
      auto g = gradient(qf, xi);
      for (auto& v : g) L[static_cast<std::size_t>(f)].push_back(target_mod(v, M1));
    }
    total += lift_node(ctx, c, std::move(L), 1, e - 1, total);
  }
  return total;
}

Rat t_from_counts(const LocalReport& r, int e) {
  if (e < 1 || static_cast<int>(r.counts.size()) <= e) throw InvalidInput("t_from_counts: missing counts");
  const Int p = r.p;
  Int t = pow_int(p, static_cast<unsigned long>(2 * e)) * r.counts[static_cast<std::size_t>(e)] -
          pow_int(p, static_cast<unsigned long>(r.k + 2 * (e - 1))) * r.counts[static_cast<std::size_t>(e - 1)];
  return Rat(t);
}

LocalReport local_counts(const Pencil& p, const Target& n, long q, int e, const LocalOptions& opt) {
  LocalReport r;
  r.p = q;
  r.k = p.k();
  r.kind = classify_prime(p, n, q, opt).kind;
  r.counts.push_back(1);
  for (int i = 1; i <= e; ++i) r.counts.push_back(count_points_lifted(p, n, q, i, opt));
  r.sigma = Rat(r.counts.back(), pow_int(Int(q), static_cast<unsigned long>(e * (r.k - 2))));
  r.sigma.canonicalize();
  r.status = LocalStatus::Truncated;
  r.status_e = e;
  return r;
}

LocalReport sigma_p(const Pencil& p, const Target& n, long q, const LocalOptions& opt) {
  LocalReport r;
  r.p = q;
  r.k = p.k();
  r.kind = classify_prime(p, n, q, opt).kind;
  r.counts.push_back(1);
  const bool f_zero = p.f(n[1], Int(-n[0])) == 0;
  auto ratio = [&](int e) {
    Rat v(r.counts[static_cast<std::size_t>(e)], pow_int(Int(q), static_cast<unsigned long>(e * (r.k - 2))));
    v.canonicalize();
    return v;
  };
  if (r.kind == PrimeKind::GoodTypeI && !f_zero) {
    r.counts.push_back(count_points_prime(p, n, q));
    r.sigma = ratio(1);
    r.status = LocalStatus::Exact;
    r.status_e = 1;
    return r;
  }
  Rat prev;
  for (int e = 1; e <= opt.e_max; ++e) {
    r.counts.push_back(count_points_lifted(p, n, q, e, opt));
    Rat cur = ratio(e);
    r.sigma = cur;
    if (e >= 2 && cur == prev && !f_zero) {
      r.status = LocalStatus::StabilizedAt;
      r.status_e = e;
      return r;
    }
    prev = cur;
  }
  r.status = LocalStatus::Truncated;
  r.status_e = opt.e_max;
  return r;
}

Rat sigma_lower_bound(const Pencil& p, const Target& n, long q, const std::vector<Int>& x0, int m) {
  const int k = p.k();
  Int r1 = evaluate(p.q1, x0) - n[0], r2 = evaluate(p.q2, x0) - n[1];
  const bool exact = (r1 == 0 && r2 == 0);
  const int v = min_minor_valuation(p, x0, q);
  if (v == INT32_MAX || (!exact && v >= m)) throw InvalidInput("all minors vanish to the working precision");
  if (!exact) {
    if (std::min(valuation(r1, q), valuation(r2, q)) < m) throw InvalidInput("witness is not a solution mod q^m");
    if (m <= 2 * v + 1) throw InvalidInput("precision m must exceed 2v+1");
  }
  Rat b(1, pow_int(Int(q), static_cast<unsigned long>((k - 2) * (2 * v + 1))));
  b.canonicalize();
  return b;
}

SeriesValue singular_series(const Pencil& p, const Target& n, long p_cut, const LocalOptions& opt) {
  SeriesValue sv;
  sv.p_cut = p_cut;
  auto primes = primes_up_to(p_cut);
  sv.per_prime.resize(primes.size());
  LocalOptions inner = opt;
  inner.exec = Exec::Serial;
  std::vector<std::string> errors(primes.size());
  auto work = [&](std::size_t i) {
    try {
      sv.per_prime[i] = sigma_p(p, n, primes[i], inner);
    } catch (const std::exception& ex) {
      errors[i] = ex.what();
    }
  };
  if (opt.exec == Exec::Parallel) {
#pragma omp parallel for schedule(dynamic)
    for (std::size_t i = 0; i < primes.size(); ++i) work(i);
  } else {
    for (std::size_t i = 0; i < primes.size(); ++i) work(i);
  }
  for (std::size_t i = 0; i < primes.size(); ++i)
    if (!errors[i].empty()) throw BudgetError("sigma_p at p=" + std::to_string(primes[i]) + ": " + errors[i]);
  sv.exact = 1;
  for (const auto& r : sv.per_prime) {
    sv.exact *= r.sigma;
    if (r.status == LocalStatus::Truncated) sv.truncated = true;
    if (r.sigma == 0 && !sv.not_locally_solvable) {
      sv.not_locally_solvable = true;
      sv.obstructed_prime = r.p;
    }
    if (r.kind == PrimeKind::GoodTypeI && r.p > 5) {
      double dev = std::abs(to_double(r.sigma) - 1.0) * std::pow(static_cast<double>(r.p), 1.5);
      sv.tail_constant = std::max(sv.tail_constant, dev);
    }
  }
  sv.exact.canonicalize();
  sv.value = to_double(sv.exact);
  const double P = static_cast<double>(std::max<long>(p_cut, 2));
  const double tail_sum = 2.0 / (std::sqrt(P) * std::log(P));
  std::ostringstream os;
  os << "heuristic: prod_{p>" << p_cut << "} sigma_p within exp(+-C*S), C=" << sv.tail_constant
     << " (fitted max |sigma_p-1|p^1.5), S~" << tail_sum << " (sum_{p>P} p^-1.5); not asserted";
  sv.tail_note = os.str();
  return sv;
}

namespace {

// Exact integer solution in a small box; global solutions settle every local question.
std::optional<std::vector<std::int64_t>> small_exact_solution(const Pencil& p, const Target& n) {
  const int k = p.k();
  if (!fits_i64(n[0]) || !fits_i64(n[1])) return std::nullopt;
  const long r = std::max(1L, static_cast<long>((std::pow(4096.0, 1.0 / k) - 1) / 2));
  const std::int64_t n1 = to_i64(n[0]), n2 = to_i64(n[1]);
  std::vector<std::int64_t> m1, m2;
  for (const auto& v : p.q1.matrix.a) {
    if (!fits_i64(v)) return std::nullopt;
    m1.push_back(to_i64(v));
  }
  for (const auto& v : p.q2.matrix.a) {
    if (!fits_i64(v)) return std::nullopt;
    m2.push_back(to_i64(v));
  }
  std::vector<std::int64_t> x(static_cast<std::size_t>(k), -r);
  for (;;) {
    __int128 v1 = 0, v2 = 0;
    for (int i = 0; i < k; ++i)
      for (int j = 0; j < k; ++j) {
        const __int128 xx = static_cast<__int128>(x[static_cast<std::size_t>(i)]) * x[static_cast<std::size_t>(j)];
        v1 += xx * m1[static_cast<std::size_t>(i * k + j)];
        v2 += xx * m2[static_cast<std::size_t>(i * k + j)];
      }
    if (v1 == n1 && v2 == n2) return x;
    int i = k - 1;
    while (i >= 0 && ++x[static_cast<std::size_t>(i)] > r) x[static_cast<std::size_t>(i--)] = -r;
    if (i < 0) return std::nullopt;
  }
}

}  // namespace

ZpResult local_solvable_zp(const Pencil& p, const Target& n, long q, int m_max, const LocalOptions& opt) {
  const int k = p.k();
  ZpResult res;
  if (auto x = small_exact_solution(p, n)) {
    res.status = Solvability::Solvable;
    res.m = m_max;
    res.witness = *x;
    res.minor_valuation = min_minor_valuation(p, as_int(*x), q);
    res.henselian = res.minor_valuation != INT32_MAX;
    return res;
  }
  // random probes for a Hensel witness: precision m must exceed twice the minor valuation,
  // which is at least 2 at q = 2 because the gradients carry a factor 2
  {
    std::mt19937_64 rng(0x5eedULL + static_cast<std::uint64_t>(q));
    const std::vector<int> precisions = q == 2 ? std::vector<int>{5, 7} : std::vector<int>{1, 3};
    for (int m : precisions) {
      if (m > m_max) break;
      const std::int64_t M = ipow64(q, m);
      ModPencil mp(p, M);
      const std::int64_t u1 = target_mod(n[0], M), u2 = target_mod(n[1], M);
      std::uniform_int_distribution<std::int64_t> dist(0, M - 1);
      const std::uint64_t probes = std::min<std::uint64_t>(opt.budget.evals / 4, 16ULL * static_cast<std::uint64_t>(M) * M + 4096);
      std::vector<std::int64_t> x(static_cast<std::size_t>(k));
      for (std::uint64_t s = 0; s < probes; ++s) {
        for (auto& v : x) v = dist(rng);
        if (mp.eval(0, x.data()) != u1 || mp.eval(1, x.data()) != u2) continue;
        const int v = min_minor_valuation(p, as_int(x), q);
        if (v != INT32_MAX && m > 2 * v) {
          res.status = Solvability::Solvable;
          res.m = m;
          res.witness = x;
          res.henselian = true;
          res.minor_valuation = v;
          return res;
        }
      }
    }
  }
  ModPencil mq(p, q);
  const std::int64_t t1 = target_mod(n[0], q), t2 = target_mod(n[1], q);
  const double base = std::pow(static_cast<double>(q), k);
  if (base > static_cast<double>(opt.budget.evals)) {
    res.status = Solvability::Undecided;
    return res;
  }
  double spent = 0;
  std::vector<std::vector<std::int64_t>> level;
  {
    std::vector<std::int64_t> x(static_cast<std::size_t>(k), 0);
    for (;;) {
      if (mq.eval(0, x.data()) == t1 && mq.eval(1, x.data()) == t2) level.push_back(x);
      int i = k - 1;
      while (i >= 0) {
        if (++x[static_cast<std::size_t>(i)] < q) break;
        x[static_cast<std::size_t>(i)] = 0;
        --i;
      }
      if (i < 0) break;
    }
    spent = base;
  }
  for (int m = 1;; ++m) {
    if (level.empty()) {
      res.status = Solvability::Unsolvable;
      res.m = m;
      return res;
    }
    for (const auto& x : level) {
      const int v = min_minor_valuation(p, as_int(x), q);
      if (v != INT32_MAX && m > 2 * v) {
        res.status = Solvability::Solvable;
        res.m = m;
        res.witness = x;
        res.henselian = true;
        res.minor_valuation = v;
        return res;
      }
    }
    if (m >= m_max) break;
    spent += static_cast<double>(level.size()) * base;
    if (spent > static_cast<double>(opt.budget.evals)) break;
    const std::int64_t qm = ipow64(q, m), M = qm * q;
    ModPencil mp(p, M);
    const std::int64_t u1 = target_mod(n[0], M), u2 = target_mod(n[1], M);
    std::vector<std::vector<std::int64_t>> next;
    std::vector<std::int64_t> y(static_cast<std::size_t>(k)), x(static_cast<std::size_t>(k));
    for (const auto& x0 : level) {
      std::fill(y.begin(), y.end(), 0);
      for (;;) {
        for (int i = 0; i < k; ++i) x[static_cast<std::size_t>(i)] = x0[static_cast<std::size_t>(i)] + qm * y[static_cast<std::size_t>(i)];
        if (mp.eval(0, x.data()) == u1 && mp.eval(1, x.data()) == u2) next.push_back(x);
        int i = k - 1;
        while (i >= 0) {
          if (++y[static_cast<std::size_t>(i)] < q) break;
          y[static_cast<std::size_t>(i)] = 0;
          --i;
        }
        if (i < 0) break;
      }
    }
    level.swap(next);
  }
  res.status = Solvability::Undecided;
  res.m = m_max;
  if (!level.empty()) res.witness = level.front();
  return res;
}

namespace {

std::vector<std::array<long, 2>> psd_combinations(const Pencil& p) {
  static std::mutex mu;
  static std::map<std::string, std::vector<std::array<long, 2>>> cache;
  std::string key;
  for (const auto& v : p.q1.matrix.a) key += v.get_str() + ",";
  key += "|";
  for (const auto& v : p.q2.matrix.a) key += v.get_str() + ",";
  {
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;
  }
  std::vector<std::array<long, 2>> out;
  for (long a = -12; a <= 12; ++a)
    for (long b = -12; b <= 12; ++b) {
      if (a == 0 && b == 0) continue;
      if (std::gcd(a, b) != 1) continue;
      if (is_psd_exact(linear_combination(a, p.q1.matrix, b, p.q2.matrix))) out.push_back({a, b});
    }
  std::lock_guard<std::mutex> lock(mu);
  cache[key] = out;
  return out;
}

}  // namespace

RealResult local_solvable_real(const Pencil& p, double mu1, double mu2, std::uint64_t seed, int starts) {
  RealResult res;
  const int k = p.k();
  for (const auto& nu : psd_combinations(p)) {
    const double v = static_cast<double>(nu[0]) * mu1 + static_cast<double>(nu[1]) * mu2;
    bool refute = v < 0;
    if (!refute && v == 0 && (mu1 != 0 || mu2 != 0))
      refute = is_pd_exact(linear_combination(nu[0], p.q1.matrix, nu[1], p.q2.matrix));
    if (refute) {
      res.status = Solvability::Unsolvable;
      res.certificate = nu;
      return res;
    }
  }
  Eigen::MatrixXd A = to_eigen(p.q1.matrix), Bm = to_eigen(p.q2.matrix);
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss;
  // Radius: inverse square root of the minimum of |Q| on the unit sphere.
  double minq = 1e300;
  for (int s = 0; s < 2000; ++s) {
    Eigen::VectorXd u(k);
    for (int i = 0; i < k; ++i) u(i) = gauss(rng);
    u.normalize();
    minq = std::min(minq, std::max(std::abs(u.dot(A * u)), std::abs(u.dot(Bm * u))));
  }
  res.lambda_hat = std::min(1e3, 1.0 / std::sqrt(std::max(minq, 1e-6)));
  const double scale = std::sqrt(std::max(std::abs(mu1), std::abs(mu2)));
  const double radius = std::max(1e-3, res.lambda_hat * scale);
  const double tol = 1e-8;
  double best = 1e300;
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  for (int st = 0; st < starts; ++st) {
    Eigen::VectorXd x(k);
    for (int i = 0; i < k; ++i) x(i) = gauss(rng);
    x *= radius * std::pow(unif(rng), 1.0 / k) / x.norm();
    double lam = 1e-3;
    auto resid = [&](const Eigen::VectorXd& z) {
      return Eigen::Vector2d(z.dot(A * z) - mu1, z.dot(Bm * z) - mu2);
    };
    Eigen::Vector2d r = resid(x);
    for (int it = 0; it < 300 && r.norm() > tol * 1e-2; ++it) {
      Eigen::MatrixXd J(2, k);
      J.row(0) = 2 * (A * x).transpose();
      J.row(1) = 2 * (Bm * x).transpose();
      Eigen::Matrix2d G = J * J.transpose();
      G += lam * Eigen::Matrix2d::Identity() * std::max(1.0, G.trace());
      Eigen::VectorXd step = -J.transpose() * G.ldlt().solve(r);
      Eigen::VectorXd xn = x + step;
      Eigen::Vector2d rn = resid(xn);
      if (rn.norm() < r.norm()) {
        x = xn;
        r = rn;
        lam = std::max(lam * 0.3, 1e-12);
      } else {
        lam *= 10;
        if (lam > 1e8) break;
      }
    }
    if (r.norm() < best) {
      best = r.norm();
      res.witness.assign(x.data(), x.data() + k);
    }
    if (best < tol) break;
  }
  res.residual = best;
  res.status = best < tol ? Solvability::Solvable : Solvability::Undecided;
  return res;
}

}  // namespace qfp
