#include "qfp/counting.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <random>
#include <set>

namespace qfp {

double CountTable::at(std::int64_t n1, std::int64_t n2) const {
  auto it = table.find({n1, n2});
  return it == table.end() ? 0.0 : it->second;
}

long support_radius(double B, const WeightSpec& w) { return static_cast<long>(std::ceil(w.rho * B)) - 1; }

namespace {

std::vector<std::int64_t> flat_i64(const IntMatrix& m) {
  std::vector<std::int64_t> out;
  for (const auto& v : m.a) out.push_back(to_i64(v));
  return out;
}

std::int64_t qeval(const std::vector<std::int64_t>& m, const std::vector<long>& x) {
  const std::size_t k = x.size();
  __int128 s = 0;
  for (std::size_t i = 0; i < k; ++i) {
    if (x[i] == 0) continue;
    __int128 row = 0;
    for (std::size_t j = 0; j < k; ++j) row += static_cast<__int128>(m[i * k + j]) * x[j];
    s += row * x[i];
  }
  return static_cast<std::int64_t>(s);
}

struct Acc {
  double s = 0, c = 0;
  void add(double v) {
    const double t = s + v;
    c += std::abs(s) >= std::abs(v) ? (s - t) + v : (v - t) + s;
    s = t;
  }
  double value() const { return s + c; }
};

}  // namespace

CountTable representation_table(const Pencil& p, double B, const WeightSpec& w, const Budget& b, Exec exec,
                                std::optional<Window> window) {
  const int k = p.k();
  const long R = support_radius(B, w);
  require_budget(std::pow(2.0 * R + 1, k), b.lattice, "representation_table");
  const auto m1 = flat_i64(p.q1.matrix), m2 = flat_i64(p.q2.matrix);
  std::vector<double> w1(static_cast<std::size_t>(2 * R + 1));
  for (long x = -R; x <= R; ++x) w1[static_cast<std::size_t>(x + R)] = w.eval1(static_cast<double>(x) / B);
  using Map = std::unordered_map<std::pair<std::int64_t, std::int64_t>, double, KeyHash>;
  const long n0 = 2 * R + 1;
  std::vector<Map> slices(static_cast<std::size_t>(n0));
  std::vector<double> masses(static_cast<std::size_t>(n0), 0.0);
  std::vector<std::uint64_t> points(static_cast<std::size_t>(n0), 0);
  auto slice = [&](long idx) {
    const std::size_t K = static_cast<std::size_t>(k);
    std::vector<long> x(K, -R);
    x[0] = idx - R;
    Map& m = slices[static_cast<std::size_t>(idx)];
    Acc mass;
    std::uint64_t pts = 0;
    for (;;) {
      double wt = w.normalization;
      for (std::size_t i = 0; i < K && wt != 0; ++i) wt *= w1[static_cast<std::size_t>(x[i] + R)];
      if (wt != 0) {
        const std::int64_t v1 = qeval(m1, x), v2 = qeval(m2, x);
        if (!window || window->contains(v1, v2)) m[{v1, v2}] += wt;
        mass.add(wt);
        ++pts;
      }
      int i = k - 1;
      while (i >= 1) {
        if (++x[static_cast<std::size_t>(i)] <= R) break;
        x[static_cast<std::size_t>(i)] = -R;
        --i;
      }
      if (i < 1) break;
    }
    masses[static_cast<std::size_t>(idx)] = mass.value();
    points[static_cast<std::size_t>(idx)] = pts;
  };
  if (exec == Exec::Parallel) {
#pragma omp parallel for schedule(dynamic)
    for (long i = 0; i < n0; ++i) slice(i);
  } else {
    for (long i = 0; i < n0; ++i) slice(i);
  }
  CountTable out;
  out.B = B;
  out.weight = w;
  Acc mass;
  // merge in slice order so floating sums do not depend on scheduling
  for (long i = 0; i < n0; ++i) {
    std::vector<std::pair<std::pair<std::int64_t, std::int64_t>, double>> items(slices[static_cast<std::size_t>(i)].begin(),
                                                                                slices[static_cast<std::size_t>(i)].end());
    std::sort(items.begin(), items.end());
    for (const auto& [key, v] : items) out.table[key] += v;
    mass.add(masses[static_cast<std::size_t>(i)]);
    out.lattice_points += points[static_cast<std::size_t>(i)];
    Map().swap(slices[static_cast<std::size_t>(i)]);
  }
  out.mass = mass.value();
  return out;
}

RepresentationCounter::RepresentationCounter(const Pencil& p) : p_(p) {
  const int k = p.k();
  q1_ = flat_i64(p.q1.matrix);
  q2_ = flat_i64(p.q2.matrix);
  // smallest positive definite member, scanning by max(|a|,|b|)
  for (long r = 1; r <= 12 && !definite_; ++r)
    for (long a = -r; a <= r && !definite_; ++a)
      for (long b = -r; b <= r && !definite_; ++b) {
        if (std::max(std::abs(a), std::abs(b)) != r) continue;
        if (is_pd_exact(linear_combination(a, p.q1.matrix, b, p.q2.matrix))) {
          definite_ = true;
          comb_ = {a, b};
        }
      }
  if (!definite_) return;
  c_ = flat_i64(linear_combination(comb_[0], p.q1.matrix, comb_[1], p.q2.matrix));
  const std::size_t K = static_cast<std::size_t>(k);
  std::vector<double> q(K * K);
  for (std::size_t i = 0; i < K * K; ++i) q[i] = static_cast<double>(c_[i]);
  for (std::size_t i = 0; i < K; ++i) {
    for (std::size_t j = i + 1; j < K; ++j) {
      q[j * K + i] = q[i * K + j];
      q[i * K + j] /= q[i * K + i];
    }
    for (std::size_t l = i + 1; l < K; ++l)
      for (std::size_t m = l; m < K; ++m) q[l * K + m] -= q[l * K + i] * q[i * K + m];
  }
  diag_.resize(K);
  mu_.assign(K * K, 0.0);
  for (std::size_t i = 0; i < K; ++i) {
    diag_[i] = q[i * K + i];
    for (std::size_t j = i + 1; j < K; ++j) mu_[i * K + j] = q[i * K + j];
  }
}

template <class F>
void RepresentationCounter::enumerate(const Target& n, long radius, const Budget& b, F&& f) const {
  const int k = p_.k();
  const std::size_t K = static_cast<std::size_t>(k);
  const std::int64_t n1 = to_i64(n[0]), n2 = to_i64(n[1]);
  if (!definite_) {
    require_budget(std::pow(2.0 * radius + 1, k), b.lattice, "representation count sweep");
    std::vector<long> x(K, -radius);
    for (;;) {
      if (qeval(q1_, x) == n1 && qeval(q2_, x) == n2) f(x);
      int i = k - 1;
      while (i >= 0) {
        if (++x[static_cast<std::size_t>(i)] <= radius) break;
        x[static_cast<std::size_t>(i)] = -radius;
        --i;
      }
      if (i < 0) break;
    }
    return;
  }
  const std::int64_t m = comb_[0] * n1 + comb_[1] * n2;
  if (m < 0) return;
  std::vector<long> x(K, 0);
  std::uint64_t visited = 0;
  const double slack = 1e-9 * (1.0 + static_cast<double>(m));
  const std::int64_t c00 = c_[0];
  // levels k-1 .. 1 by the triangular bounds, level 0 solved exactly
  auto leaf = [&]() {
    __int128 beta = 0, gamma = 0;
    for (std::size_t j = 1; j < K; ++j) beta += static_cast<__int128>(c_[j]) * x[j];
    for (std::size_t i = 1; i < K; ++i)
      for (std::size_t j = 1; j < K; ++j) gamma += static_cast<__int128>(c_[i * K + j]) * x[i] * x[j];
    const __int128 disc = beta * beta - static_cast<__int128>(c00) * (gamma - m);
    if (disc < 0) return;
    long double sr = std::sqrt(static_cast<long double>(disc));
    __int128 s = static_cast<__int128>(std::llround(sr));
    while (s * s > disc) --s;
    while ((s + 1) * (s + 1) <= disc) ++s;
    if (s * s != disc) return;
    for (int sign = 0; sign < 2; ++sign) {
      if (sign == 1 && s == 0) break;
      const __int128 num = -beta + (sign == 0 ? s : -s);
      if (num % c00 != 0) continue;
      const __int128 x0 = num / c00;
      if (x0 > radius || x0 < -radius) continue;
      x[0] = static_cast<long>(x0);
      if (qeval(q1_, x) == n1 && qeval(q2_, x) == n2) f(x);
    }
    x[0] = 0;
  };
  std::function<void(int, double)> rec = [&](int i, double rem) {
    if (++visited > b.lattice) throw BudgetError("representation count: enumeration budget exceeded");
    if (i == 0) {
      leaf();
      return;
    }
    double c = 0;
    for (std::size_t j = static_cast<std::size_t>(i) + 1; j < K; ++j) c -= mu_[static_cast<std::size_t>(i) * K + j] * x[j];
    const double span = std::sqrt(std::max(0.0, rem + slack) / diag_[static_cast<std::size_t>(i)]);
    long lo = static_cast<long>(std::ceil(c - span - 1e-9)), hi = static_cast<long>(std::floor(c + span + 1e-9));
    lo = std::max(lo, -radius);
    hi = std::min(hi, radius);
    for (long v = lo; v <= hi; ++v) {
      x[static_cast<std::size_t>(i)] = v;
      const double d = static_cast<double>(v) - c;
      rec(i - 1, rem - diag_[static_cast<std::size_t>(i)] * d * d);
    }
    x[static_cast<std::size_t>(i)] = 0;
  };
  rec(k - 1, static_cast<double>(m));
}

double RepresentationCounter::count(const Target& n, double B, const WeightSpec& w, const Budget& b) const {
  const long R = support_radius(B, w);
  Acc acc;
  enumerate(n, R, b, [&](const std::vector<long>& x) {
    double wt = w.normalization;
    for (long v : x) wt *= w.eval1(static_cast<double>(v) / B);
    acc.add(wt);
  });
  return acc.value();
}

std::uint64_t RepresentationCounter::solutions(const Target& n, long radius, const Budget& b) const {
  std::uint64_t c = 0;
  enumerate(n, radius, b, [&](const std::vector<long>&) { ++c; });
  return c;
}

double representation_count(const Pencil& p, const Target& n, double B, const WeightSpec& w, const Budget& b) {
  return RepresentationCounter(p).count(n, B, w, b);
}

namespace {

struct JResult {
  double value = 0, err = 0;
  bool refuted = false, thin = false;
};

JResult singular_integral_at(const Pencil& p, const std::array<double, 2>& mu, const WeightSpec& w,
                             const AnalyticConfig& ac) {
  JResult r;
  auto real = local_solvable_real(p, mu[0], mu[1]);
  if (real.status == Solvability::Unsolvable) {
    r.refuted = true;
    return r;
  }
  ThickenedOptions opt = ac.thick;
  if (ac.relative) {
    const double scale = std::max({std::abs(mu[0]), std::abs(mu[1]), 1e-12});
    opt.eps.clear();
    for (double f : ac.eps_rel) opt.eps.push_back(std::min(f * scale, f));
  }
  SingularIntegralValue v;
  try {
    v = singular_integral_thickened(p, mu, w, opt, Exec::Serial);
  } catch (const NumericalError&) {
    opt.min_hits = 1;
    v = singular_integral_thickened(p, mu, w, opt, Exec::Serial);
    r.thin = true;
  }
  r.value = v.estimate;
  r.err = v.error_bar;
  return r;
}

}  // namespace

AsymptoticReport asymptotic_check(const Pencil& p, const Target& n, const std::vector<double>& Bs, long p_cut,
                                  const WeightSpec& w, const AnalyticConfig& ac, const LocalOptions& lo) {
  AsymptoticReport rep;
  rep.n = n;
  const int k = p.k();
  if (p.f(n[1], Int(-n[0])) == 0) {
    rep.degenerate = true;
    rep.note = "F(n2,-n1) = 0";
    return rep;
  }
  auto series = singular_series(p, n, p_cut, lo);
  rep.series = series.value;
  rep.series_truncated = series.truncated;
  RepresentationCounter counter(p);
  for (double B : Bs) {
    AsymptoticRow row;
    row.B = B;
    row.R = counter.count(n, B, w);
    const std::array<double, 2> mu{to_double(Rat(n[0])) / (B * B), to_double(Rat(n[1])) / (B * B)};
    auto J = singular_integral_at(p, mu, w, ac);
    row.J = J.value;
    row.J_err = J.err;
    row.main = rep.series * row.J * std::pow(B, k - 4);
    row.ratio = row.main > 0 ? row.R / row.main : 0.0;
    if (J.refuted || row.J <= 1e-12) rep.degenerate = true;
    rep.rows.push_back(row);
  }
  if (rep.series <= 1e-12) rep.degenerate = true;
  if (rep.degenerate) {
    rep.note = "singular series or singular integral below the positivity floor";
    return rep;
  }
  const double m = static_cast<double>(rep.rows.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (const auto& r : rep.rows) {
    const double y = std::abs(r.ratio - 1);
    sx += r.B;
    sy += y;
    sxx += r.B * r.B;
    sxy += r.B * y;
  }
  const double den = m * sxx - sx * sx;
  rep.slope = den != 0 ? (m * sxy - sx * sy) / den : 0.0;
  rep.trend_to_one = rep.slope < 0;
  return rep;
}

std::vector<std::array<double, 2>> unit_sample(std::size_t count, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<std::array<double, 2>> out(count);
  for (auto& v : out) {
    v[0] = u(rng);
    v[1] = u(rng);
  }
  return out;
}

MeanSquareRow mean_square_statistic(const Pencil& p, double B, long N, const std::vector<std::array<double, 2>>& sample,
                                    std::size_t pairs, long p_cut, const WeightSpec& w, const AnalyticConfig& ac,
                                    const LocalOptions& lo) {
  MeanSquareRow row;
  row.B = B;
  row.N = N > 0 ? N : static_cast<long>(std::llround(B * B));
  const int k = p.k();
  RepresentationCounter counter(p);
  LocalOptions inner = lo;
  inner.exec = Exec::Serial;
  Acc acc;
  for (const auto& u : sample) {
    if (static_cast<std::size_t>(row.pairs) >= pairs) break;
    Target n{Int(static_cast<long>(std::llround(row.N * u[0]))), Int(static_cast<long>(std::llround(row.N * u[1])))};
    if (p.f(n[1], Int(-n[0])) == 0) continue;
    const double R = counter.count(n, B, w);
    const std::array<double, 2> mu{to_double(Rat(n[0])) / (B * B), to_double(Rat(n[1])) / (B * B)};
    auto J = singular_integral_at(p, mu, w, ac);
    double main = 0;
    if (J.refuted) {
      ++row.zero_J;
    } else {
      if (J.thin) ++row.thin;
      main = singular_series(p, n, p_cut, inner).value * J.value * std::pow(B, k - 4);
    }
    acc.add((R - main) * (R - main));
    ++row.pairs;
  }
  if (row.pairs == 0) throw InvalidInput("mean_square_statistic: empty sample");
  row.statistic = acc.value() / static_cast<double>(row.pairs) / std::pow(B, 2 * k - 8);
  return row;
}

ExceptionalReport exceptional_scan(const Pencil& p, long N, double B, long p_cut, const WeightSpec& w,
                                   const LocalOptions& lo) {
  ExceptionalReport rep;
  rep.N = N;
  rep.B = B;
  const long R = support_radius(B, w);
  std::optional<CountTable> table;
  if (std::pow(2.0 * R + 1, p.k()) <= static_cast<double>(lo.budget.lattice))
    table = representation_table(p, B, w, lo.budget, lo.exec, Window{-N, N, -N, N});
  RepresentationCounter counter(p);
  const auto primes = primes_up_to(p_cut);
  LocalOptions zo = lo;
  zo.exec = Exec::Serial;
  zo.budget.evals = std::min<std::uint64_t>(lo.budget.evals, 2000000);
  for (long n1 = -N; n1 <= N; ++n1)
    for (long n2 = -N; n2 <= N; ++n2) {
      ++rep.pairs;
      Target n{Int(n1), Int(n2)};
      if (p.f(n[1], Int(-n[0])) == 0) {
        ++rep.excluded_f_zero;
        continue;
      }
      const double r = table ? table->at(n1, n2) : counter.count(n, B, w, lo.budget);
      if (r > 0) {
        // a global solution is local everywhere
        ++rep.locally_solvable;
        ++rep.represented;
        continue;
      }
      auto real = local_solvable_real(p, static_cast<double>(n1), static_cast<double>(n2));
      if (real.status == Solvability::Unsolvable) {
        ++rep.real_unsolvable;
        continue;
      }
      bool undecided = real.status == Solvability::Undecided, refuted = false;
      for (auto q : primes) {
        auto z = local_solvable_zp(p, n, q, 12, zo);
        if (z.status == Solvability::Unsolvable) {
          refuted = true;
          break;
        }
        if (z.status == Solvability::Undecided) undecided = true;
      }
      if (refuted) {
        ++rep.zp_unsolvable;
        continue;
      }
      if (undecided) {
        ++rep.undecided;
        rep.undecided_pairs.push_back(n);
        continue;
      }
      ++rep.locally_solvable;
      rep.exceptional.push_back(n);
    }
  return rep;
}

PrimeSearch prime_pair_search(const Pencil& p, long shells, const Budget& b) {
  PrimeSearch out;
  const int k = p.k();
  const std::size_t K = static_cast<std::size_t>(k);
  require_budget(std::pow(2.0 * shells + 1, k), b.lattice, "prime_pair_search");
  const auto m1 = flat_i64(p.q1.matrix), m2 = flat_i64(p.q2.matrix);
  std::int64_t bound = 0;
  for (std::size_t i = 0; i < K * K; ++i) bound = std::max(bound, std::max(std::abs(m1[i]), std::abs(m2[i])));
  const std::int64_t vmax = bound * static_cast<std::int64_t>(K * K) * shells * shells;
  std::vector<bool> sieve;
  if (vmax <= 50000000) {
    sieve.assign(static_cast<std::size_t>(vmax + 1), true);
    sieve[0] = false;
    if (vmax >= 1) sieve[1] = false;
    for (std::int64_t i = 2; i * i <= vmax; ++i)
      if (sieve[static_cast<std::size_t>(i)])
        for (std::int64_t j = i * i; j <= vmax; j += i) sieve[static_cast<std::size_t>(j)] = false;
  }
  auto prime = [&](std::int64_t v) {
    if (v < 2) return false;
    if (!sieve.empty() && v <= vmax) return static_cast<bool>(sieve[static_cast<std::size_t>(v)]);
    return is_prime_u64(static_cast<std::uint64_t>(v));
  };
  std::set<std::pair<std::int64_t, std::int64_t>> distinct;
  out.per_shell.assign(static_cast<std::size_t>(shells + 1), 0);
  for (long s = 1; s <= shells; ++s) {
    std::vector<long> x(K, -s);
    for (;;) {
      long mx = 0;
      for (long v : x) mx = std::max(mx, std::abs(v));
      if (mx == s) {
        const std::int64_t r1 = qeval(m1, x), r2 = qeval(m2, x);
        if (r1 > 0 && r2 > 0) out.positive_witness = true;
        if (prime(r1) && prime(r2)) {
          out.hits.push_back({x, Int(static_cast<long>(r1)), Int(static_cast<long>(r2)), s});
          ++out.per_shell[static_cast<std::size_t>(s)];
          distinct.insert({r1, r2});
        }
      }
      int i = k - 1;
      while (i >= 0) {
        if (++x[static_cast<std::size_t>(i)] <= s) break;
        x[static_cast<std::size_t>(i)] = -s;
        --i;
      }
      if (i < 0) break;
    }
  }
  for (const auto& [a, c] : distinct) out.distinct.emplace_back(Int(static_cast<long>(a)), Int(static_cast<long>(c)));
  return out;
}

Pencil qpair1(long L) {
  return make_pencil(QuadraticForm::diag({1, 0, 1, 1}), QuadraticForm::diag({0, 1, 1, L}));
}

K4Report k4_experiment(const std::vector<long>& Ls, long N, const LocalOptions& lo) {
  K4Report rep;
  rep.N = N;
  LocalOptions zo = lo;
  zo.exec = Exec::Serial;
  for (long L : Ls) {
    if (L <= 0) throw InvalidInput("k4_experiment: L must be positive");
    K4Row row;
    row.L = L;
    const Pencil p = qpair1(L);
    // representable (n1, n2) in [0, N]^2; coordinates enter squared so x >= 0 suffices
    const std::size_t side = static_cast<std::size_t>(N + 1);
    std::vector<bool> rep_map(side * side, false);
    for (long x4 = 0; L * x4 * x4 <= N && x4 * x4 <= N; ++x4)
      for (long x3 = 0; x3 * x3 + L * x4 * x4 <= N && x3 * x3 + x4 * x4 <= N; ++x3) {
        const long b1 = x3 * x3 + x4 * x4, b2 = x3 * x3 + L * x4 * x4;
        for (long x1 = 0; b1 + x1 * x1 <= N; ++x1)
          for (long x2 = 0; b2 + x2 * x2 <= N; ++x2)
            rep_map[static_cast<std::size_t>(b1 + x1 * x1) * side + static_cast<std::size_t>(b2 + x2 * x2)] = true;
      }
    for (long n1 = 1; n1 <= N; n1 += 840)
      for (long n2 = 1; n2 <= N; n2 += 840) {
        if (n2 % L == 0) continue;
        ++row.surveyed;
        Target n{Int(n1), Int(n2)};
        bool pass = true, undecided = false;
        for (long q : {2L, 3L, 5L, 7L}) {
          auto z = local_solvable_zp(p, n, q, 12, zo);
          if (z.status == Solvability::Unsolvable) pass = false;
          if (z.status == Solvability::Undecided) undecided = true;
        }
        if (pass && !undecided) ++row.zp_pass;
        if (undecided) ++row.zp_undecided;
        if (rep_map[static_cast<std::size_t>(n1) * side + static_cast<std::size_t>(n2)]) ++row.representable;
      }
    rep.rows.push_back(row);
  }
  return rep;
}

LineReport line_polynomials(const Pencil& p, const std::vector<Int>& a, const std::vector<Int>& b) {
  const int k = p.k();
  if (static_cast<int>(a.size()) != k || static_cast<int>(b.size()) != k) throw InvalidInput("line_polynomials: dimension mismatch");
  if (a == b) throw InvalidInput("line_polynomials: a = b");
  std::vector<Int> d(static_cast<std::size_t>(k));
  for (std::size_t i = 0; i < d.size(); ++i) d[i] = a[i] - b[i];
  LineReport rep;
  const auto primes = primes_up_to(100);
  for (int f = 0; f < 2; ++f) {
    const auto& q = f == 0 ? p.q1 : p.q2;
    auto& c = rep.coeffs[static_cast<std::size_t>(f)];
    c[0] = evaluate(q, b);
    c[1] = 2 * bilinear(q, b, d);
    c[2] = evaluate(q, d);
    rep.disc[static_cast<std::size_t>(f)] = c[1] * c[1] - 4 * c[0] * c[2];
    const Int qba = bilinear(q, b, a);
    rep.qdisc[static_cast<std::size_t>(f)] = qba * qba - evaluate(q, b) * evaluate(q, a);
    rep.qdisc_consistent[static_cast<std::size_t>(f)] = rep.disc[static_cast<std::size_t>(f)] == 4 * rep.qdisc[static_cast<std::size_t>(f)];
    if (c[2] == 0)
      rep.reducible[static_cast<std::size_t>(f)] = c[1] == 0;
    else
      rep.reducible[static_cast<std::size_t>(f)] = rep.disc[static_cast<std::size_t>(f)] >= 0 && is_square(rep.disc[static_cast<std::size_t>(f)]);
  }
  auto value = [&](int f, long t) -> Int {
    const auto& c = rep.coeffs[static_cast<std::size_t>(f)];
    return c[0] + c[1] * t + c[2] * t * t;
  };
  for (auto q : primes) {
    bool fixed[2] = {true, true}, prod = true;
    for (long t = 0; t < q; ++t) {
      const Int v1 = value(0, t), v2 = value(1, t);
      const bool z1 = mpz_divisible_ui_p(v1.get_mpz_t(), static_cast<unsigned long>(q)) != 0;
      const bool z2 = mpz_divisible_ui_p(v2.get_mpz_t(), static_cast<unsigned long>(q)) != 0;
      fixed[0] = fixed[0] && z1;
      fixed[1] = fixed[1] && z2;
      prod = prod && (z1 || z2);
    }
    for (int f = 0; f < 2; ++f)
      if (fixed[f]) rep.fixed_divisors[static_cast<std::size_t>(f)].push_back(q);
    if (prod) rep.product_fixed_divisors.push_back(q);
  }
  return rep;
}

}  // namespace qfp
