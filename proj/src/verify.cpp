#include "qfp/verify.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <numeric>
#include <random>
#include <set>
#include <sstream>

#include "qfp/analytic.hpp"
#include "qfp/counting.hpp"
#include "qfp/expsums.hpp"
#include "qfp/io.hpp"
#include "qfp/localarith.hpp"

namespace qfp {

Pencil standard_pencil(const std::string& name) {
  if (name == "p5") return make_pencil(QuadraticForm::diag({1, 1, 1, 1, 1}), QuadraticForm::diag({1, 2, 3, 4, 5}));
  if (name == "fi") return make_pencil(QuadraticForm::diag({1, 4, 0}), QuadraticForm::diag({4, 0, 1}));
  if (name == "toy2") return make_pencil(QuadraticForm::diag({1, 1}), QuadraticForm::diag({1, 2}));
  if (name.rfind("qpair1:", 0) == 0) return qpair1(std::stol(name.substr(7)));
  throw InvalidInput("unknown pencil name: " + name);
}

std::string default_baseline_path() { return std::string(QFP_DATA_DIR) + "/baselines.json"; }

namespace {

using Clock = std::chrono::steady_clock;

double since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

Pencil random_pencil(std::mt19937_64& rng, int k, int r, bool diagonal = false) {
  std::uniform_int_distribution<long> d(-r, r);
  for (;;) {
    IntMatrix a(k, k), b(k, k);
    for (int i = 0; i < k; ++i)
      for (int j = i; j < k; ++j) {
        if (diagonal && i != j) continue;
        a(i, j) = a(j, i) = d(rng);
        b(i, j) = b(j, i) = d(rng);
      }
    Pencil p = make_pencil(QuadraticForm(a), QuadraticForm(b));
    if (check_condition2(p)) return p;
  }
}

Target random_target(std::mt19937_64& rng, long r) {
  std::uniform_int_distribution<long> d(-r, r);
  long a = d(rng);
  long b = d(rng);
  return {Int(a), Int(b)};
}

std::string tstr(const Target& n) { return "(" + n[0].get_str() + "," + n[1].get_str() + ")"; }

LocalOptions serial_opts() {
  LocalOptions o;
  o.exec = Exec::Serial;
  return o;
}

bool is_bad(const Pencil& p, long q) {
  for (const auto& b : bad_primes(p))
    if (b == q) return true;
  return false;
}

std::vector<long> prime_powers_upto(long m) {
  std::vector<long> out;
  for (long q = 2; q <= m; ++q) {
    auto ps = prime_divisors(Int(q));
    if (ps.size() == 1) out.push_back(q);
  }
  return out;
}

std::pair<long, int> as_prime_power(long q) {
  long p = prime_divisors(Int(q))[0].get_si();
  int e = 0;
  while (q % p == 0) {
    q /= p;
    ++e;
  }
  return {p, e};
}

// ---- criteria -------------------------------------------------------------

CheckResult c_telescoping(Profile prof) {
  CheckResult r;
  std::mt19937_64 rng(101);
  const int count = prof == Profile::Full ? 50 : 20;
  const long primes[] = {2, 3, 5, 7};
  int ok = 0;
  std::ostringstream bad;
  for (int i = 0; i < count; ++i) {
    const int k = 2 + static_cast<int>(rng() % 4);
    Pencil p = random_pencil(rng, k, 3);
    const long q = primes[rng() % 4];
    const int E = 1 + static_cast<int>(rng() % 3);
    Target n = random_target(rng, 10);
    auto rep = local_counts(p, n, q, E, serial_opts());
    Rat lhs = 1;
    for (int e = 1; e <= E; ++e) lhs += t_from_counts(rep, e) / Rat(pow_int(Int(q), static_cast<unsigned long>(e * k)));
    Rat rhs(rep.counts[static_cast<std::size_t>(E)], pow_int(Int(q), static_cast<unsigned long>(E * (k - 2))));
    rhs.canonicalize();
    lhs.canonicalize();
    if (lhs == rhs)
      ++ok;
    else
      bad << " k=" << k << ",p=" << q << ",E=" << E << ",n=" << tstr(n);
  }
  r.pass = ok == count;
  r.detail = std::to_string(ok) + "/" + std::to_string(count) + " exact identities" + bad.str();
  return r;
}

CheckResult c_oracle(Profile prof) {
  CheckResult r;
  std::mt19937_64 rng(202);
  std::vector<std::pair<std::string, Pencil>> pencils = {{"toy2", standard_pencil("toy2")},
                                                         {"fi", standard_pencil("fi")},
                                                         {"qpair1:5", standard_pencil("qpair1:5")},
                                                         {"p5", standard_pencil("p5")}};
  for (int k = 2; k <= 5; ++k) pencils.emplace_back("random" + std::to_string(k), random_pencil(rng, k, 4));
  const double cap = prof == Profile::Full ? 1e7 : 1e5;
  long checked = 0, mismatched = 0;
  std::ostringstream bad;
  for (const auto& [name, p] : pencils) {
    std::vector<Target> targets = {{Int(0), Int(0)}, {Int(1), Int(1)}, {Int(2), Int(3)}};
    for (int i = 0; i < 2; ++i) targets.push_back(random_target(rng, 20));
    for (long q : {2L, 3L, 5L, 7L})
      for (int e = 1; e <= 3; ++e) {
        if (std::pow(static_cast<double>(q), e * p.k()) > cap) continue;
        for (const auto& n : targets) {
          const Int a = count_points_lifted(p, n, q, e, serial_opts());
          const Int b = count_points_naive(p, n, q, e, serial_opts());
          ++checked;
          if (a != b) {
            ++mismatched;
            bad << " " << name << ":p=" << q << ",e=" << e << ",n=" << tstr(n);
          }
        }
      }
  }
  r.pass = mismatched == 0 && checked > 0;
  r.detail = std::to_string(checked - mismatched) + "/" + std::to_string(checked) + " lifted = naive" + bad.str();
  return r;
}

CheckResult c_cross_route(Profile prof) {
  CheckResult r;
  const long qmax = prof == Profile::Full ? 27 : 9;
  std::vector<Target> targets = {{Int(0), Int(0)}, {Int(1), Int(1)}, {Int(2), Int(3)}, {Int(5), Int(-4)}};
  long checked = 0, failed = 0;
  double worst = 0;
  std::ostringstream bad;
  for (const char* name : {"toy2", "p5"}) {
    Pencil p = standard_pencil(name);
    for (long q : prime_powers_upto(qmax)) {
      if (std::pow(static_cast<double>(q), p.k()) > 1e8) continue;
      auto [pr, e] = as_prime_power(q);
      for (const auto& n : targets) {
        auto rep = local_counts(p, n, pr, e, serial_opts());
        const Rat tc = t_from_counts(rep, e);
        const cd td = t_direct(p, n, q);
        const double rounded = std::round(td.real());
        const double dev = std::max(std::abs(td.real() - rounded), std::abs(td.imag()));
        worst = std::max(worst, dev);
        ++checked;
        if (dev > 1e-4 || Rat(Int(static_cast<long>(rounded))) != tc) {
          ++failed;
          bad << " " << name << ":q=" << q << ",n=" << tstr(n);
        }
      }
    }
  }
  std::ostringstream os;
  os << (checked - failed) << "/" << checked << " agree, max rounding deviation " << worst << bad.str();
  r.pass = failed == 0 && checked > 0;
  r.detail = os.str();
  return r;
}

CheckResult c_deligne(Profile prof) {
  CheckResult r;
  Pencil p = standard_pencil("p5");
  std::mt19937_64 rng(404);
  const int count = prof == Profile::Full ? 20 : 5;
  std::vector<Target> targets;
  for (int i = 0; i < count; ++i) targets.push_back(random_target(rng, 10000));
  double fitted = 0;
  long checked = 0, oracle_fail = 0;
  for (long q : primes_up_to(47)) {
    if (is_bad(p, q)) continue;
    const double q2 = static_cast<double>(q) * q;
    for (const auto& n : targets) {
      const Int N = count_points_prime(p, n, q);
      if (q <= 7 && N != count_points_naive(p, n, q, 1, serial_opts())) ++oracle_fail;
      const double dev = std::abs(to_double(Rat(N - Int(q) * q * q)));
      fitted = std::max(fitted, dev / q2);
      ++checked;
    }
  }
  std::ostringstream os;
  os << checked << " (p,n) pairs, fitted C = " << fitted << " (bound 10), Gauss-sum vs naive mismatches " << oracle_fail;
  r.pass = fitted <= 10 && oracle_fail == 0;
  r.detail = os.str();
  return r;
}

CheckResult c_snf(Profile) {
  CheckResult r;
  std::mt19937_64 rng(505);
  std::vector<Pencil> pencils = {standard_pencil("toy2"), standard_pencil("fi")};
  for (int i = 0; i < 3; ++i) pencils.push_back(random_pencil(rng, 2, 5));
  for (int i = 0; i < 2; ++i) pencils.push_back(random_pencil(rng, 3, 3));
  long checked = 0, eq_fail = 0, bound_checked = 0, bound_fail = 0;
  for (const auto& p : pencils)
    for (long q : {2L, 3L, 5L})
      for (int e = 1; e <= 2; ++e) {
        const long qe = ipow64(q, e);
        if (std::pow(static_cast<double>(qe), p.k()) > 1e6) continue;
        const bool good = !is_bad(p, q);
        for (long a1 = 0; a1 < qe; ++a1)
          for (long a2 = 0; a2 < qe; ++a2) {
            if (std::gcd(std::gcd(a1, a2), q) != 1) continue;
            const Pair a{Int(a1), Int(a2)};
            const Int z = z_count(p, a, q, e);
            ++checked;
            if (z != z_count_naive(p, a, q, e)) ++eq_fail;
            if (good) {
              ++bound_checked;
              Int g, fa = p.f(a[0], a[1]), qq = Int(qe);
              mpz_gcd(g.get_mpz_t(), fa.get_mpz_t(), qq.get_mpz_t());
              if (z > g) ++bound_fail;
            }
          }
      }
  std::ostringstream os;
  os << checked << " z_count cases, " << eq_fail << " naive mismatches; " << bound_checked << " good-prime bound checks, "
     << bound_fail << " violations";
  r.pass = eq_fail == 0 && bound_fail == 0 && checked > 0;
  r.detail = os.str();
  return r;
}

CheckResult c_minor_arc(Profile prof) {
  CheckResult r;
  std::mt19937_64 rng(606);
  std::vector<Pencil> pencils = {standard_pencil("toy2")};
  for (int i = 0; i < 2; ++i) pencils.push_back(random_pencil(rng, 2, 4));
  std::vector<std::vector<long>> ls = {{0, 0, 0, 0}};
  std::uniform_int_distribution<long> d(-5, 5);
  for (int i = 0; i < 3; ++i) ls.push_back({d(rng), d(rng), d(rng), d(rng)});
  const long qmax = prof == Profile::Full ? 30 : 12;
  long checked = 0, failed = 0, direct_checked = 0, direct_failed = 0;
  double worst = 0;
  for (const auto& p : pencils)
    for (const auto& l : ls) {
      for (long q1 = 2; q1 <= qmax; ++q1)
        for (long q2 = q1 + 1; q1 * q2 <= qmax; ++q2) {
          if (std::gcd(q1, q2) != 1) continue;
          const cd s = minor_arc_sum(p, l, q1 * q2).value;
          const cd s12 = minor_arc_sum(p, l, q1).value * minor_arc_sum(p, l, q2).value;
          const double scale = std::max({std::abs(s), std::abs(s12), std::pow(static_cast<double>(q1 * q2), p.k())});
          const double rel = std::abs(s - s12) / scale;
          worst = std::max(worst, rel);
          ++checked;
          if (rel > 1e-6) ++failed;
        }
      for (long q = 2; q <= 6; ++q) {
        const cd a = minor_arc_sum(p, l, q).value, b = minor_arc_sum_direct(p, l, q);
        ++direct_checked;
        if (std::abs(a - b) > 1e-8 * std::max(1.0, std::abs(b))) ++direct_failed;
      }
    }
  std::ostringstream os;
  os << checked << " factorisations, worst relative deviation " << worst << "; factorised vs direct route " << direct_failed
     << "/" << direct_checked << " mismatches";
  r.pass = failed == 0 && direct_failed == 0 && checked > 0;
  r.detail = os.str();
  return r;
}

std::vector<std::array<double, 2>> mu_grid() {
  return {{-1, 1},     {-0.5, -0.5}, {0.5, -0.5}, {0.2, 0.5}, {0.3, 0.9},
          {0.4, 1.0},  {0.5, 1.0},   {0.6, 1.0},  {0.25, 0.6}, {0.5, 0.8}};
}

CheckResult c_singular_integral(Profile prof) {
  CheckResult r;
  Pencil p = standard_pencil("p5");
  WeightSpec w;
  auto grid = mu_grid();
  TruncatedOptions to;
  ThickenedOptions th;
  if (prof == Profile::Quick) {
    grid = {{-1, 1}, {0.4, 1.0}, {0.25, 0.6}};
    to.radii = {4, 8};
    to.refine = false;
    th.directions = 1L << 11;
    th.shifts = 8;
  }
  long agree = 0, zero_ok = 0, zero_cases = 0;
  std::ostringstream os;
  for (const auto& mu : grid) {
    auto a = singular_integral_truncated(p, mu, w, to);
    auto b = singular_integral_thickened(p, mu, w, th);
    const double gap = std::abs(a.estimate - b.estimate), bars = a.error_bar + b.error_bar;
    if (gap <= bars) ++agree;
    const bool zero = local_solvable_real(p, mu[0], mu[1]).status == Solvability::Unsolvable;
    if (zero) {
      ++zero_cases;
      if (std::abs(a.estimate) < 1e-3 && std::abs(b.estimate) < 1e-3) ++zero_ok;
    }
    os << " mu=(" << mu[0] << "," << mu[1] << "): " << a.estimate << "+-" << a.error_bar << " vs " << b.estimate << "+-"
       << b.error_bar << (gap <= bars ? "" : " DISAGREE") << ";";
  }
  r.pass = agree == static_cast<long>(grid.size()) && zero_ok == zero_cases;
  r.detail = std::to_string(agree) + "/" + std::to_string(grid.size()) + " agree, zero cases " + std::to_string(zero_ok) +
             "/" + std::to_string(zero_cases) + ";" + os.str();
  return r;
}

// max over samples of |S(a/q+theta) - q^-k B^k S_q(a) I(B^2 theta)| / B^{k-1+1/4}
double major_arc_residual(const Pencil& p, double B, const WeightSpec& w, int nt) {
  const int k = p.k();
  const std::vector<std::array<double, 2>> ts = {{0.3, -0.7}, {-0.9, 0.2}, {0.55, 0.45}, {-0.25, -0.6}};
  double worst = 0;
  for (long q = 1; q <= 3; ++q)
    for (long a1 = 0; a1 < q; ++a1)
      for (long a2 = 0; a2 < q; ++a2) {
        if (std::gcd(std::gcd(a1, a2), q) != 1) continue;
        const Pair a{Int(a1), Int(a2)};
        const cd sq = complete_sum_sq(p, a, q);
        for (int i = 0; i < nt; ++i) {
          const double scale = std::pow(B, -2.0 + 1.0 / 8);
          const std::array<double, 2> th{ts[static_cast<std::size_t>(i)][0] * scale, ts[static_cast<std::size_t>(i)][1] * scale};
          const cd s = eval_generating_separable(p, a, q, th, B, w);
          const cd I = oscillatory_i(p, B * B * th[0], B * B * th[1], std::vector<double>(static_cast<std::size_t>(k), 0.0), w);
          const cd main = std::pow(static_cast<double>(q), -k) * std::pow(B, k) * sq * I;
          worst = std::max(worst, std::abs(s - main) / std::pow(B, k - 1 + 0.25));
        }
      }
  return worst;
}

CheckResult c_major_arc(Profile prof) {
  CheckResult r;
  Pencil p = standard_pencil("p5");
  WeightSpec w;
  const int nt = prof == Profile::Full ? 4 : 2;
  const double c12 = major_arc_residual(p, 12, w, nt);
  const double c20 = major_arc_residual(p, 20, w, nt);
  std::ostringstream os;
  os << "fitted C at B=12: " << c12 << ", normalised residual at B=20: " << c20;
  r.pass = c20 <= c12;
  r.detail = os.str();
  return r;
}

CheckResult c_asymptotic(Profile prof) {
  CheckResult r;
  Pencil p = standard_pencil("p5");
  std::vector<double> Bs = prof == Profile::Full ? std::vector<double>{8, 12, 16, 24} : std::vector<double>{8, 12};
  AnalyticConfig ac;
  auto rep = asymptotic_check(p, {Int(2), Int(3)}, Bs, 50, WeightSpec{}, ac, serial_opts());
  bool bracket = !rep.degenerate;
  std::ostringstream os;
  os << "S=" << rep.series << "; ratios:";
  for (const auto& row : rep.rows) {
    os << " B=" << row.B << ":" << row.ratio << " (R=" << row.R << ", J=" << row.J << "+-" << row.J_err << ")";
    if (!(row.ratio >= 0.3 && row.ratio <= 3)) bracket = false;
  }
  os << "; slope of |ratio-1| = " << rep.slope;
  r.pass = bracket && rep.slope < 0;
  r.detail = os.str();
  return r;
}

CheckResult c_meansq(Profile prof) {
  CheckResult r;
  Pencil p = standard_pencil("p5");
  const std::size_t pairs = prof == Profile::Full ? 200 : 20;
  auto sample = unit_sample(4 * pairs, 2024);
  AnalyticConfig ac;
  ac.thick.directions = 1L << 12;
  ac.thick.shifts = 8;
  std::vector<double> Bs = prof == Profile::Full ? std::vector<double>{8, 12, 16} : std::vector<double>{8, 12};
  std::vector<double> stats;
  std::ostringstream os;
  for (double B : Bs) {
    auto row = mean_square_statistic(p, B, 0, sample, pairs, 50, WeightSpec{}, ac, serial_opts());
    stats.push_back(row.statistic);
    os << " B=" << B << ":" << row.statistic << " (pairs " << row.pairs << ", zero main " << row.zero_J << ", thin "
       << row.thin << ")";
  }
  r.pass = stats.back() < stats.front();
  r.detail = "statistic" + os.str();
  return r;
}

CheckResult c_k4(Profile) {
  CheckResult r;
  auto rep = k4_experiment({10000, 40000}, 2520, serial_opts());
  bool zp = true;
  std::ostringstream os;
  for (const auto& row : rep.rows) {
    if (row.zp_pass != row.surveyed) zp = false;
    os << " L=" << row.L << ": surveyed " << row.surveyed << ", Z_p pass " << row.zp_pass << ", representable "
       << row.representable << ";";
  }
  const double ratio = rep.rows[0].representable > 0
                           ? static_cast<double>(rep.rows[1].representable) / static_cast<double>(rep.rows[0].representable)
                           : 0.0;
  os << " ratio(4L/L) = " << ratio << " (target [0.35,0.65])";
  r.pass = zp && ratio >= 0.35 && ratio <= 0.65;
  r.detail = os.str();
  return r;
}

CheckResult c_primes(Profile) {
  CheckResult r;
  auto fi = prime_pair_search(standard_pencil("fi"), 3);
  bool found = false;
  for (const auto& h : fi.hits)
    if (h.x == std::vector<long>{1, 1, 3} && h.r1 == 5 && h.r2 == 13) found = true;
  auto p5 = prime_pair_search(standard_pencil("p5"), 4);
  std::ostringstream os;
  os << "fi (5,13) at (1,1,3): " << (found ? "found" : "missing") << "; P5 distinct pairs within |x|<=4: "
     << p5.distinct.size();
  r.pass = found && p5.distinct.size() >= 10;
  r.detail = os.str();
  return r;
}

// ---- suites ---------------------------------------------------------------

CheckResult s_conditions() {
  CheckResult r;
  std::mt19937_64 rng(707);
  std::uniform_int_distribution<long> d9(-9, 9);
  long bad = 0;
  std::ostringstream os;
  // diagonal ratios agree with the discriminant test
  long diag_cases = 0;
  while (diag_cases < 100) {
    const int k = 2 + static_cast<int>(rng() % 4);
    std::vector<long> a(static_cast<std::size_t>(k)), b(static_cast<std::size_t>(k));
    bool zero_pair = false;
    for (int i = 0; i < k; ++i) {
      a[static_cast<std::size_t>(i)] = d9(rng);
      b[static_cast<std::size_t>(i)] = d9(rng);
      if (a[static_cast<std::size_t>(i)] == 0 && b[static_cast<std::size_t>(i)] == 0) zero_pair = true;
    }
    if (zero_pair) continue;
    Pencil p = make_pencil(QuadraticForm::diag(a), QuadraticForm::diag(b));
    if (check_diagonal_ratios(p) != check_condition2(p)) ++bad;
    ++diag_cases;
  }
  os << "diag/disc mismatches " << bad;
  // condition 2 implies condition 4 on sampled nu
  long c4 = 0;
  for (int i = 0; i < 30; ++i) {
    const int k = 2 + static_cast<int>(rng() % 4);
    Pencil p = random_pencil(rng, k, 4);
    std::vector<std::pair<Rat, Rat>> nus;
    for (int j = 0; j < 20; ++j) {
      Rat a(static_cast<long>(rng() % 50) - 25, 1 + static_cast<long>(rng() % 7));
      Rat b(static_cast<long>(rng() % 50) - 25, 1 + static_cast<long>(rng() % 7));
      if (a == 0 && b == 0) continue;
      nus.emplace_back(a, b);
    }
    if (!check_condition4(p, nus)) ++c4;
  }
  os << ", cond2-without-cond4 " << c4;
  // determinant form against direct determinants
  long detbad = 0;
  for (int i = 0; i < 100; ++i) {
    const int k = 2 + static_cast<int>(rng() % 4);
    Pencil p = random_pencil(rng, k, 5);
    Target n = random_target(rng, 30);
    if (p.f(n[1], Int(-n[0])) != det_bareiss(linear_combination(n[1], p.q1.matrix, Int(-n[0]), p.q2.matrix))) ++detbad;
  }
  os << ", F vs det mismatches " << detbad;
  // Jacobian minors: antisymmetry and the diagonal closed form
  long minors = 0;
  for (int i = 0; i < 50; ++i) {
    const int k = 2 + static_cast<int>(rng() % 4);
    Pencil p = random_pencil(rng, k, 5, i % 2 == 0);
    std::vector<Int> x;
    for (int j = 0; j < k; ++j) x.push_back(Int(d9(rng)));
    auto D = jacobian_minors(p, x);
    for (int a = 0; a < k; ++a)
      for (int b = 0; b < k; ++b) {
        if (D(a, b) != -D(b, a)) ++minors;
        if (p.diagonal()) {
          Int want = 4 * x[static_cast<std::size_t>(a)] * x[static_cast<std::size_t>(b)] *
                     (p.q1.matrix(a, a) * p.q2.matrix(b, b) - p.q1.matrix(b, b) * p.q2.matrix(a, a));
          if (D(a, b) != want) ++minors;
        }
      }
  }
  os << ", minor failures " << minors;
  // eigenvalues of the doubled form pair up as +-rho
  long pairing = 0;
  for (int i = 0; i < 20; ++i) {
    const int k = 2 + static_cast<int>(rng() % 3);
    Pencil p = random_pencil(rng, k, 4);
    IntMatrix a(2 * k, 2 * k), b(2 * k, 2 * k);
    for (int s = 0; s < k; ++s)
      for (int t = 0; t < k; ++t) {
        a(s, t) = p.q1.matrix(s, t);
        b(s, t) = p.q2.matrix(s, t);
        a(k + s, k + t) = -p.q1.matrix(s, t);
        b(k + s, k + t) = -p.q2.matrix(s, t);
      }
    Pencil dbl{QuadraticForm(a), QuadraticForm(b), {}, 0, 0};
    const double nu1 = 0.3 + i * 0.1, nu2 = -0.7 + i * 0.05;
    auto single = eigenvalue_window(p, nu1, nu2).rho;
    auto doubled = eigenvalue_window(dbl, nu1, nu2).rho;
    std::vector<double> want;
    for (double v : single) {
      want.push_back(v);
      want.push_back(-v);
    }
    std::sort(want.begin(), want.end());
    std::sort(doubled.begin(), doubled.end());
    for (std::size_t j = 0; j < want.size(); ++j)
      if (std::abs(want[j] - doubled[j]) > 1e-9 * (1 + std::abs(want[j]))) {
        ++pairing;
        break;
      }
  }
  os << ", eigenvalue pairing failures " << pairing;
  r.pass = bad == 0 && c4 == 0 && detbad == 0 && minors == 0 && pairing == 0;
  r.detail = os.str();
  return r;
}

CheckResult s_local() {
  CheckResult r;
  std::ostringstream os;
  auto d = c_deligne(Profile::Quick);
  os << d.detail;
  bool pass = d.pass;
  Pencil p = standard_pencil("p5");
  std::mt19937_64 rng(808);
  long vanish_fail = 0, divisibility_fail = 0, lower_fail = 0, type1 = 0, type2 = 0;
  for (int i = 0; i < 10; ++i) {
    Target n = random_target(rng, 200);
    if (p.f(n[1], Int(-n[0])) == 0) continue;
    for (long q : primes_up_to(13)) {
      auto pc = classify_prime(p, n, q);
      if (pc.kind == PrimeKind::GoodTypeI) {
        ++type1;
        auto rep = local_counts(p, n, q, 3, serial_opts());
        if (t_from_counts(rep, 2) != 0 || t_from_counts(rep, 3) != 0) ++vanish_fail;
      }
      if (pc.kind == PrimeKind::GoodTypeII) {
        ++type2;
        if (!mpz_divisible_ui_p(Int(p.f(n[1], Int(-n[0]))).get_mpz_t(), static_cast<unsigned long>(q))) ++divisibility_fail;
      }
    }
  }
  // lower bound against sigma_p at the exact solution x0 = (1,1,0,0,0) of n = (2,3)
  const Target n23{Int(2), Int(3)};
  const std::vector<Int> x0 = {1, 1, 0, 0, 0};
  for (long q : {2L, 3L, 5L, 7L, 11L}) {
    const Rat lb = sigma_lower_bound(p, n23, q, x0, 0);
    if (lb > sigma_p(p, n23, q, serial_opts()).sigma) ++lower_fail;
  }
  // rank-drop audit: good primes keep rank >= k-1 on every pencil member mod p
  long audit_fail = 0;
  for (const char* name : {"p5", "fi", "toy2", "qpair1:5"}) {
    Pencil pp = standard_pencil(name);
    for (long q : primes_up_to(50)) {
      if (is_bad(pp, q)) continue;
      for (long t = 0; t <= q; ++t) {
        const long a1 = t < q ? 1 : 0, a2 = t < q ? t : 1;
        auto m = reduce_mod(linear_combination(Int(a1), pp.q1.matrix, Int(a2), pp.q2.matrix), q);
        if (rank_mod_p(m, q) < pp.k() - 1) ++audit_fail;
      }
    }
  }
  os << "; Type I " << type1 << " (T vanishing failures " << vanish_fail << "), Type II " << type2
     << " (Type II divisibility failures " << divisibility_fail << "), lower-bound failures " << lower_fail << ", rank-drop audit failures "
     << audit_fail;
  r.pass = pass && vanish_fail == 0 && divisibility_fail == 0 && lower_fail == 0 && audit_fail == 0;
  r.detail = os.str();
  return r;
}

CheckResult s_multiplicativity() {
  CheckResult r;
  long checked = 0, failed = 0;
  double worst = 0;
  for (const char* name : {"toy2", "fi"}) {
    Pencil p = standard_pencil(name);
    for (const Target& n : {Target{Int(0), Int(0)}, Target{Int(1), Int(2)}, Target{Int(5), Int(13)}})
      for (long q1 = 2; q1 <= 35; ++q1)
        for (long q2 = q1 + 1; q1 * q2 <= 35; ++q2) {
          if (std::gcd(q1, q2) != 1) continue;
          const cd a = t_direct(p, n, q1 * q2), b = t_direct(p, n, q1) * t_direct(p, n, q2);
          const double rel = std::abs(a - b) / std::max({1.0, std::abs(a), std::abs(b)});
          worst = std::max(worst, rel);
          ++checked;
          if (rel > 1e-6) ++failed;
        }
  }
  auto c3 = c_cross_route(Profile::Quick);
  std::ostringstream os;
  os << checked << " factorisations of T, worst relative deviation " << worst << "; " << c3.detail;
  r.pass = failed == 0 && c3.pass;
  r.detail = os.str();
  return r;
}

CheckResult s_expsums() {
  CheckResult r;
  std::mt19937_64 rng(909);
  std::uniform_int_distribution<long> d(-20, 20);
  long snf_fail = 0;
  for (int i = 0; i < 200; ++i) {
    const int n = 1 + static_cast<int>(rng() % 5);
    IntMatrix m(n, n);
    for (auto& v : m.a) v = d(rng);
    auto s = smith_normal_form(m);
    IntMatrix D(n, n);
    for (int j = 0; j < n; ++j) D(j, j) = s.d[static_cast<std::size_t>(j)];
    bool ok = s.left * m * s.right == D && abs(det_bareiss(s.left)) == 1 && abs(det_bareiss(s.right)) == 1;
    for (int j = 0; j + 1 < n && ok; ++j) {
      if (s.d[static_cast<std::size_t>(j)] == 0) {
        ok = s.d[static_cast<std::size_t>(j + 1)] == 0;
      } else {
        ok = mpz_divisible_p(s.d[static_cast<std::size_t>(j + 1)].get_mpz_t(), s.d[static_cast<std::size_t>(j)].get_mpz_t());
      }
    }
    if (!ok) ++snf_fail;
  }
  // real integrality of T
  long integ_fail = 0;
  for (const char* name : {"toy2", "fi"}) {
    Pencil p = standard_pencil(name);
    for (long q = 2; q <= 20; ++q) {
      const cd t = t_direct(p, {Int(3), Int(7)}, q);
      if (std::abs(t.imag()) > 1e-6 * std::abs(t) + 1e-6 || std::abs(t.real() - std::round(t.real())) > 1e-4) ++integ_fail;
    }
  }
  auto z = c_snf(Profile::Quick);
  auto m = c_minor_arc(Profile::Quick);
  std::ostringstream os;
  os << "SNF failures " << snf_fail << "/200, T integrality failures " << integ_fail << "; " << z.detail << "; " << m.detail;
  r.pass = snf_fail == 0 && integ_fail == 0 && z.pass && m.pass;
  r.detail = os.str();
  return r;
}

CheckResult s_analytic() {
  CheckResult r;
  auto c7 = c_singular_integral(Profile::Quick);
  // eigenvalue envelope for oscillatory integrals on the k=3 pencil
  Pencil p = standard_pencil("fi");
  WeightSpec w;
  long env_fail = 0;
  double worst = 0;
  const double I0 = std::abs(oscillatory_i(p, 0, 0, {0, 0, 0}, w));
  for (double nu1 : {-6.0, -1.5, 0.5, 3.0, 8.0})
    for (double nu2 : {-5.0, 0.0, 2.5, 7.0})
      for (double lam : {0.0, 1.0, 3.0}) {
        Eigen::MatrixXd q = nu1 * to_eigen(p.q1.matrix) + nu2 * to_eigen(p.q2.matrix);
        const double bound = eigenvalue_decay_bound(q);
        const double v = std::abs(oscillatory_i(q, {lam, -lam, 0.5 * lam}, w)) / I0;
        worst = std::max(worst, v / bound);
        if (v > 5 * bound) ++env_fail;
      }
  // decay in lambda
  Eigen::MatrixXd q = to_eigen(p.q1.matrix);
  const double qn = q.norm();
  const double far = std::abs(oscillatory_i(q, {20 * qn, 0, 0}, w));
  const bool decay = far <= 1e-6 * std::abs(oscillatory_i(q, {0, 0, 0}, w));
  // monotone tail of the truncated integral
  TruncatedOptions to;
  to.radii = {4, 8, 16, 32};
  to.refine = false;
  auto t = singular_integral_truncated(standard_pencil("p5"), {0.4, 1.0}, w, to);
  bool monotone = true;
  for (std::size_t j = 0; j + 2 < t.values.size(); ++j)
    if (std::abs(t.values[j + 2] - t.values[j + 1]) >= std::abs(t.values[j + 1] - t.values[j])) monotone = false;
  std::ostringstream os;
  os << c7.detail << " envelope violations " << env_fail << " (max ratio " << worst << "), decay "
     << (decay ? "ok" : "FAIL") << ", tail " << (monotone ? "monotone" : "NOT monotone");
  r.pass = c7.pass && env_fail == 0 && decay && monotone;
  r.detail = os.str();
  return r;
}

CheckResult s_counting() {
  CheckResult r;
  Pencil p = standard_pencil("p5");
  WeightSpec w;
  std::mt19937_64 rng(111);
  auto table = representation_table(p, 3, w);
  RepresentationCounter counter(p);
  long recount_fail = 0;
  double table_sum = 0;
  for (const auto& [key, v] : table.table) table_sum += v;
  const bool mass = std::abs(table_sum - table.mass) <= 1e-9 * table.mass;
  std::vector<Target> represented;
  for (int i = 0; i < 20; ++i) {
    Target n;
    if (i % 2 == 0) {
      auto it = table.table.begin();
      std::advance(it, static_cast<long>(rng() % table.table.size()));
      n = {Int(static_cast<long>(it->first.first)), Int(static_cast<long>(it->first.second))};
    } else {
      n = random_target(rng, 60);
    }
    const double a = table.at(to_i64(n[0]), to_i64(n[1])), b = counter.count(n, 3, w);
    if (std::abs(a - b) > 1e-12 * std::max(1.0, a)) ++recount_fail;
    if (a > 0 && represented.size() < 6 && p.f(n[1], Int(-n[0])) != 0) represented.push_back(n);
  }
  long local_fail = 0;
  for (const auto& n : represented) {
    for (long q : primes_up_to(50))
      if (local_solvable_zp(p, n, q, 12, serial_opts()).status == Solvability::Unsolvable) ++local_fail;
    if (local_solvable_real(p, to_double(Rat(n[0])), to_double(Rat(n[1]))).status != Solvability::Solvable) ++local_fail;
  }
  auto k4 = k4_experiment({5}, 840 * 3, serial_opts());
  const bool congruence = k4.rows[0].zp_pass == k4.rows[0].surveyed;
  AnalyticConfig ac;
  auto asym = asymptotic_check(p, {Int(2), Int(3)}, {8, 12}, 30, w, ac, serial_opts());
  bool bracket = !asym.degenerate;
  for (const auto& row : asym.rows)
    if (!(row.ratio >= 0.3 && row.ratio <= 3)) bracket = false;
  std::ostringstream os;
  os << "recount mismatches " << recount_fail << ", mass " << (mass ? "conserved" : "NOT conserved")
     << ", global-to-local failures " << local_fail << " over " << represented.size() << " targets, k4 congruence "
     << k4.rows[0].zp_pass << "/" << k4.rows[0].surveyed << ", asymptotic ratios";
  for (const auto& row : asym.rows) os << " " << row.ratio;
  r.pass = recount_fail == 0 && mass && local_fail == 0 && congruence && bracket;
  r.detail = os.str();
  return r;
}

std::string rat_str(const Rat& v) { return v.get_str(); }

CheckResult s_baselines(const std::string& path) {
  CheckResult r;
  json want;
  try {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    in >> want;
  } catch (const std::exception& e) {
    r.pass = false;
    r.detail = std::string("unreadable baseline file: ") + e.what();
    return r;
  }
  const json got = compute_baselines();
  std::vector<std::string> diffs;
  for (auto it = got.begin(); it != got.end(); ++it) {
    if (!want.contains(it.key())) {
      diffs.push_back(it.key() + " missing");
      continue;
    }
    const json& a = it.value();
    const json& b = want[it.key()];
    if (a.is_number_float() && b.is_number()) {
      const double x = a.get<double>(), y = b.get<double>();
      if (std::abs(x - y) > 1e-9 * std::max(1.0, std::abs(y))) diffs.push_back(it.key());
    } else if (a != b) {
      diffs.push_back(it.key());
    }
  }
  r.pass = diffs.empty();
  std::ostringstream os;
  os << got.size() << " baseline values";
  if (!diffs.empty()) {
    os << ", mismatched:";
    for (const auto& d : diffs) os << " " << d;
  }
  r.detail = os.str();
  return r;
}

template <class F>
CheckResult timed(const std::string& name, double limit, F&& f) {
  const auto t0 = Clock::now();
  CheckResult r;
  try {
    r = f();
  } catch (const std::exception& e) {
    r.pass = false;
    r.detail = std::string("error: ") + e.what();
  }
  r.name = name;
  r.seconds = since(t0);
  r.limit = limit;
  if (limit > 0 && r.seconds > limit) {
    r.pass = false;
    r.detail += " (time limit exceeded)";
  }
  return r;
}

}  // namespace

json compute_baselines() {
  json j;
  j["schema"] = 1;
  Pencil p = standard_pencil("p5");
  j["p5_disc"] = p.disc_f.get_str();
  const Target n{Int(2), Int(3)};
  for (long q : {2L, 3L, 5L, 7L, 11L, 13L}) j["p5_sigma_2_3_p" + std::to_string(q)] = rat_str(sigma_p(p, n, q, serial_opts()).sigma);
  j["p5_series_2_3_pcut30"] = rat_str(singular_series(p, n, 30, serial_opts()).exact);
  j["fi_disc"] = standard_pencil("fi").disc_f.get_str();
  j["qpair1_997_bad_primes"] = int_list(bad_primes(standard_pencil("qpair1:997")));
  ThickenedOptions th;
  th.directions = 1L << 10;
  th.shifts = 4;
  auto J = singular_integral_thickened(p, {0.4, 1.0}, WeightSpec{}, th, Exec::Serial);
  j["p5_thickened_0.4_1.0"] = sig12(J.estimate);
  j["p5_R3_2_3"] = sig12(representation_count(p, n, 3, WeightSpec{}));
  return j;
}

const char* criterion_name(int id) {
  static const char* names[] = {"",
                                "exactness core: telescoping identity",
                                "oracle equivalence: lifted = naive counts",
                                "cross-route T: exponential sums vs counts",
                                "Deligne envelope for P5",
                                "SNF/Z bounds",
                                "minor-arc multiplicativity",
                                "singular-integral method agreement",
                                "major-arc approximation",
                                "asymptotic trend",
                                "mean-square trend",
                                "k=4 counterexample mechanism",
                                "prime pairs"};
  return id >= 1 && id <= 12 ? names[id] : "unknown";
}

CheckResult run_criterion(int id, Profile prof) {
  static const double limits[] = {0, 60, 300, 300, 600, 60, 300, 1800, 1800, 3600, 3600, 1800, 60};
  if (id < 1 || id > 12) throw InvalidInput("criterion id must be 1..12");
  auto body = [&]() -> CheckResult {
    switch (id) {
      case 1: return c_telescoping(prof);
      case 2: return c_oracle(prof);
      case 3: return c_cross_route(prof);
      case 4: return c_deligne(prof);
      case 5: return c_snf(prof);
      case 6: return c_minor_arc(prof);
      case 7: return c_singular_integral(prof);
      case 8: return c_major_arc(prof);
      case 9: return c_asymptotic(prof);
      case 10: return c_meansq(prof);
      case 11: return c_k4(prof);
      default: return c_primes(prof);
    }
  };
  return timed(criterion_name(id), limits[id], body);
}

std::vector<std::string> suite_names() {
  return {"conditions", "telescoping", "oracle", "local", "multiplicativity", "expsums", "analytic", "counting", "baselines"};
}

CheckResult run_suite(const std::string& name, const std::string& baseline_path) {
  if (name == "conditions") return timed(name, 0, s_conditions);
  if (name == "telescoping") return timed(name, 0, [] { return c_telescoping(Profile::Full); });
  if (name == "oracle") return timed(name, 0, [] { return c_oracle(Profile::Quick); });
  if (name == "local") return timed(name, 0, s_local);
  if (name == "multiplicativity") return timed(name, 0, s_multiplicativity);
  if (name == "expsums") return timed(name, 0, s_expsums);
  if (name == "analytic") return timed(name, 0, s_analytic);
  if (name == "counting") return timed(name, 0, s_counting);
  if (name == "baselines") return timed(name, 0, [&] { return s_baselines(baseline_path); });
  throw InvalidInput("unknown suite: " + name);
}

}  // namespace qfp
