#include "qfp/analytic.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <numeric>
#include <random>
#include <sstream>

#include <boost/math/special_functions/erf.hpp>
#include <boost/math/special_functions/gamma.hpp>

namespace qfp {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kTwoPi = 2 * kPi;

cd expi(double phase) {
  const double f = phase - std::floor(phase);
  return {std::cos(kTwoPi * f), std::sin(kTwoPi * f)};
}

double psi(double x) { return x > 0 ? std::exp(-1.0 / x) : 0.0; }

}  // namespace

double WeightSpec::eval1(double u) const {
  const double r = std::abs(u) / rho;
  if (r >= 1) return 0;
  if (kind == WeightKind::Bump) return std::exp(-1.0 / (1.0 - r * r));
  if (r <= 0.5) return 1;
  const double s = (r - 0.5) / 0.5;
  return psi(1 - s) / (psi(1 - s) + psi(s));
}

double WeightSpec::eval(const std::vector<double>& x) const {
  double v = normalization;
  for (double u : x) {
    v *= eval1(u);
    if (v == 0) return 0;
  }
  return v;
}

double WeightSpec::mass1() const {
  const auto& gl = gauss_legendre(20);
  const int panels = 64;
  const double h = 2 * rho / panels;
  double s = 0;
  for (int p = 0; p < panels; ++p) {
    const double a = -rho + p * h;
    for (const auto& [x, wt] : gl) s += wt * h / 2 * eval1(a + (x + 1) * h / 2);
  }
  return s;
}

std::string WeightSpec::describe() const {
  std::ostringstream os;
  os << (kind == WeightKind::Bump ? "bump:" : "box:") << rho;
  return os.str();
}

double weight_eval(const WeightSpec& w, const std::vector<double>& x) { return w.eval(x); }

WeightSpec parse_weight(const std::string& s) {
  WeightSpec w;
  auto colon = s.find(':');
  const std::string kind = s.substr(0, colon);
  if (kind == "bump")
    w.kind = WeightKind::Bump;
  else if (kind == "box")
    w.kind = WeightKind::BoxMollified;
  else
    throw InvalidInput("unknown weight kind: " + kind);
  if (colon != std::string::npos) {
    try {
      w.rho = std::stod(s.substr(colon + 1));
    } catch (const std::exception&) {
      throw InvalidInput("bad weight radius in " + s);
    }
  }
  if (!(w.rho > 0)) throw InvalidInput("weight radius must be positive");
  return w;
}

const std::vector<std::pair<double, double>>& gauss_legendre(int n) {
  static std::mutex mu;
  static std::map<int, std::vector<std::pair<double, double>>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(n);
  if (it != cache.end()) return it->second;
  std::vector<std::pair<double, double>> nodes(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    double x = std::cos(kPi * (i + 0.75) / (n + 0.5));
    double dp = 0;
    for (int it2 = 0; it2 < 100; ++it2) {
      double p0 = 1, p1 = x;
      for (int j = 2; j <= n; ++j) {
        double p2 = ((2 * j - 1) * x * p1 - (j - 1) * p0) / j;
        p0 = p1;
        p1 = p2;
      }
      if (n == 1) {
        p1 = x;
        p0 = 1;
      }
      dp = n * (x * p1 - p0) / (x * x - 1);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    double p0 = 1, p1 = x;
    for (int j = 2; j <= n; ++j) {
      double p2 = ((2 * j - 1) * x * p1 - (j - 1) * p0) / j;
      p0 = p1;
      p1 = p2;
    }
    dp = n * (x * p1 - p0) / (x * x - 1);
    nodes[static_cast<std::size_t>(i)] = {x, 2 / ((1 - x * x) * dp * dp)};
  }
  return cache.emplace(n, std::move(nodes)).first->second;
}

cd oscillatory_1d(double c, double lambda, const WeightSpec& w) {
  const double rho = w.rho;
  const int panels = 4 + static_cast<int>(std::ceil(2 * (std::abs(c) * rho * rho + std::abs(lambda) * rho)));
  const auto& gl = gauss_legendre(20);
  const double h = 2 * rho / panels;
  cd s = 0;
  for (int p = 0; p < panels; ++p) {
    const double a = -rho + p * h;
    for (const auto& [x, wt] : gl) {
      const double u = a + (x + 1) * h / 2;
      const double wu = w.eval1(u);
      if (wu != 0) s += wt * h / 2 * wu * expi(c * u * u - lambda * u);
    }
  }
  return s;
}

double eigenvalue_decay_bound(const Eigen::MatrixXd& q) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(q);
  double b = 1;
  for (int i = 0; i < q.rows(); ++i) b *= std::min(1.0, 1.0 / std::sqrt(std::abs(es.eigenvalues()(i))));
  return b;
}

cd oscillatory_i(const Eigen::MatrixXd& q, const std::vector<double>& lambda, const WeightSpec& w, double rel_tol,
                 int max_refinements) {
  const int k = static_cast<int>(q.rows());
  if (static_cast<int>(lambda.size()) != k) throw InvalidInput("oscillatory_i: dimension mismatch");
  bool diag = true;
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < k; ++j)
      if (i != j && q(i, j) != 0) diag = false;
  if (diag) {
    cd v = w.normalization;
    for (int i = 0; i < k; ++i) v *= oscillatory_1d(q(i, i), lambda[static_cast<std::size_t>(i)], w);
    return v;
  }
  const double rho = w.rho;
  double lam = 0;
  for (double l : lambda) lam = std::max(lam, std::abs(l));
  const double qn = q.cwiseAbs().rowwise().sum().maxCoeff();
  int panels = 2 + static_cast<int>(std::ceil(2 * (qn * rho * rho + lam * rho)));
  const int order = 8;
  cd prev = 0, cur = 0;
  for (int iter = 0; iter <= max_refinements; ++iter) {
    const double n = static_cast<double>(panels * order);
    if (std::pow(n, k) > 2e8) throw QuadratureFailure("oscillatory_i: tensor grid too large", cur, prev);
    const auto& gl = gauss_legendre(order);
    const double h = 2 * rho / panels;
    std::vector<double> nodes, wts;
    for (int p = 0; p < panels; ++p)
      for (const auto& [x, wt] : gl) {
        const double u = -rho + p * h + (x + 1) * h / 2;
        const double wu = w.eval1(u);
        if (wu == 0) continue;
        nodes.push_back(u);
        wts.push_back(wt * h / 2 * wu);
      }
    const std::size_t m = nodes.size();
    std::vector<std::size_t> idx(static_cast<std::size_t>(k), 0);
    Eigen::VectorXd u(k);
    cd s = 0;
    if (m > 0) {
      for (;;) {
        double wp = 1, lin = 0;
        for (int i = 0; i < k; ++i) {
          u(i) = nodes[idx[static_cast<std::size_t>(i)]];
          wp *= wts[idx[static_cast<std::size_t>(i)]];
          lin += lambda[static_cast<std::size_t>(i)] * u(i);
        }
        s += wp * expi(u.dot(q * u) - lin);
        int i = k - 1;
        while (i >= 0) {
          if (++idx[static_cast<std::size_t>(i)] < m) break;
          idx[static_cast<std::size_t>(i)] = 0;
          --i;
        }
        if (i < 0) break;
      }
    }
    prev = cur;
    cur = s * w.normalization;
    if (iter > 0 && std::abs(cur - prev) <= rel_tol * std::max(std::abs(cur), 1e-300)) return cur;
    if (iter > 0 && std::abs(cur) < 1e-14 && std::abs(prev) < 1e-14) return cur;
    panels = static_cast<int>(std::ceil(panels * 1.5));
  }
  throw QuadratureFailure("oscillatory_i: no convergence", cur, prev);
}

cd oscillatory_i(const Pencil& p, double nu1, double nu2, const std::vector<double>& lambda, const WeightSpec& w,
                 double rel_tol) {
  Eigen::MatrixXd q = nu1 * to_eigen(p.q1.matrix) + nu2 * to_eigen(p.q2.matrix);
  return oscillatory_i(q, lambda, w, rel_tol);
}

const char* to_string(SingularMethod m) {
  return m == SingularMethod::TruncatedOscillatory ? "TruncatedOscillatory" : "ThickenedVolume";
}

namespace {

// Table of g(t) = int e(t u^2) w1(u) du on a uniform grid, with 12-point barycentric interpolation.
class GaussTable {
 public:
  GaussTable(const WeightSpec& w, double tmax, double step) : h_(step) {
    n_ = static_cast<long>(std::ceil(tmax / step)) + 8;
    vals_.resize(static_cast<std::size_t>(n_ + 1));
    for (long j = 0; j <= n_; ++j) vals_[static_cast<std::size_t>(j)] = oscillatory_1d(j * step, 0, w);
    for (int j = 0; j < kPts; ++j) {
      double c = 1;
      for (int i = 0; i < kPts; ++i)
        if (i != j) c /= (j - i);
      bw_[j] = c;
    }
  }
  cd operator()(double t) const {
    const double x = t / h_;
    long j0 = static_cast<long>(std::floor(x)) - kPts / 2 + 1;
    if (j0 + kPts - 1 > n_ || j0 < -n_) throw NumericalError("GaussTable: argument outside the table");
    const double r = x - static_cast<double>(j0);
    cd num = 0;
    double den = 0;
    for (int j = 0; j < kPts; ++j) {
      const double d = r - j;
      if (d == 0) return at(j0 + j);
      const double c = bw_[j] / d;
      num += c * at(j0 + j);
      den += c;
    }
    return num / den;
  }

 private:
  static constexpr int kPts = 12;
  cd at(long j) const {
    return j >= 0 ? vals_[static_cast<std::size_t>(j)] : std::conj(vals_[static_cast<std::size_t>(-j)]);
  }
  double h_;
  long n_;
  std::vector<cd> vals_;
  double bw_[kPts];
};

// Range of Q over the support box [-rho, rho]^k.
std::pair<double, double> form_range(const Eigen::MatrixXd& q, double rho, bool diag) {
  const int k = static_cast<int>(q.rows());
  if (diag) {
    double lo = 0, hi = 0;
    for (int i = 0; i < k; ++i) {
      lo += std::min(0.0, q(i, i)) * rho * rho;
      hi += std::max(0.0, q(i, i)) * rho * rho;
    }
    return {lo, hi};
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(q);
  const double r2 = k * rho * rho;
  return {std::min(0.0, es.eigenvalues().minCoeff()) * r2, std::max(0.0, es.eigenvalues().maxCoeff()) * r2};
}

}  // namespace

SingularIntegralValue singular_integral_truncated(const Pencil& p, const std::array<double, 2>& mu,
                                                  const WeightSpec& w, const TruncatedOptions& opt, Exec exec) {
  if (opt.radii.empty()) throw InvalidInput("singular_integral_truncated: empty radius list");
  const int k = p.k();
  SingularIntegralValue out;
  out.mu = mu;
  out.method = SingularMethod::TruncatedOscillatory;
  out.warning = k < 5;
  std::vector<double> radii = opt.radii;
  std::sort(radii.begin(), radii.end());
  const double Rmax = radii.back();
  const double h = opt.panel;
  for (double R : radii)
    if (std::abs(R / h - std::round(R / h)) > 1e-9) throw InvalidInput("radii must be multiples of the panel width");
  const Eigen::MatrixXd A = to_eigen(p.q1.matrix), Bm = to_eigen(p.q2.matrix);
  const bool diag = p.diagonal();
  std::unique_ptr<GaussTable> table;
  if (diag) {
    double tmax = 0;
    for (int i = 0; i < k; ++i) tmax = std::max(tmax, Rmax * (std::abs(A(i, i)) + std::abs(Bm(i, i))));
    table = std::make_unique<GaussTable>(w, tmax + 1, opt.table_step);
  }
  auto I = [&](double t1, double t2) -> cd {
    if (diag) {
      cd v = w.normalization;
      for (int i = 0; i < k; ++i) v *= (*table)(t1 * A(i, i) + t2 * Bm(i, i));
      return v;
    }
    return oscillatory_i(Eigen::MatrixXd(t1 * A + t2 * Bm), std::vector<double>(static_cast<std::size_t>(k), 0.0), w,
                         1e-8);
  };
  auto r1 = form_range(A, w.rho, diag), r2 = form_range(Bm, w.rho, diag);
  const double F1 = std::max(std::abs(r1.second - mu[0]), std::abs(r1.first - mu[0]));
  const double F2 = std::max(std::abs(r2.second - mu[1]), std::abs(r2.first - mu[1]));
  const long P1 = static_cast<long>(std::llround(Rmax / h)), P2 = 2 * P1;
  auto run = [&](int extra) {
    const int n1 = static_cast<int>(std::ceil(kPi * F1 * h)) + 8 + extra;
    const int n2 = static_cast<int>(std::ceil(kPi * F2 * h)) + 8 + extra;
    const auto& g1 = gauss_legendre(n1);
    const auto& g2 = gauss_legendre(n2);
    // panel (i, j): theta1 in [i h, (i+1) h], theta2 in [-Rmax + j h, ...]
    std::vector<double> panel(static_cast<std::size_t>(P1 * P2), 0.0);
    auto row = [&](long i) {
      for (long j = 0; j < P2; ++j) {
        const double a1 = i * h, a2 = -Rmax + j * h;
        cd s = 0;
        for (const auto& [x1, w1] : g1) {
          const double t1 = a1 + (x1 + 1) * h / 2;
          for (const auto& [x2, w2] : g2) {
            const double t2 = a2 + (x2 + 1) * h / 2;
            s += (w1 * w2) * I(t1, t2) * expi(-(t1 * mu[0] + t2 * mu[1]));
          }
        }
        panel[static_cast<std::size_t>(i * P2 + j)] = 2 * s.real() * (h / 2) * (h / 2);
      }
    };
    if (exec == Exec::Parallel) {
#pragma omp parallel for schedule(dynamic)
      for (long i = 0; i < P1; ++i) row(i);
    } else {
      for (long i = 0; i < P1; ++i) row(i);
    }
    std::vector<double> vals;
    for (double R : radii) {
      const long m1 = static_cast<long>(std::llround(R / h));
      double s = 0, c = 0;
      for (long i = 0; i < m1; ++i)
        for (long j = P1 - m1; j < P1 + m1; ++j) {
          const double v = panel[static_cast<std::size_t>(i * P2 + j)];
          const double t = s + v;
          c += std::abs(s) >= std::abs(v) ? (s - t) + v : (v - t) + s;
          s = t;
        }
      vals.push_back(s + c);
    }
    return vals;
  };
  out.scales = radii;
  out.values = run(0);
  out.estimate = out.values.back();
  double quad_err = 0;
  if (opt.refine) {
    auto fine = run(12);
    quad_err = std::abs(fine.back() - out.values.back());
  }
  auto shape = [&](double R) { return std::pow(R, (4.0 - k) / 2.0) * std::log(R); };
  double C = 0;
  for (std::size_t j = 0; j + 1 < radii.size(); ++j)
    C = std::max(C, std::abs(out.values[j + 1] - out.values[j]) / shape(radii[j]));
  out.fitted_constant = C;
  out.error_bar = C * shape(Rmax) + quad_err;
  return out;
}

SingularIntegralValue singular_integral_thickened(const Pencil& p, const std::array<double, 2>& mu,
                                                  const WeightSpec& w, const ThickenedOptions& opt, Exec exec) {
  if (opt.eps.empty()) throw InvalidInput("singular_integral_thickened: empty epsilon sequence");
  for (std::size_t i = 1; i < opt.eps.size(); ++i)
    if (!(opt.eps[i] < opt.eps[i - 1])) throw InvalidInput("epsilon sequence must decrease");
  const int k = p.k();
  const std::size_t K = static_cast<std::size_t>(k);
  const std::size_t E = opt.eps.size();
  SingularIntegralValue out;
  out.mu = mu;
  out.method = SingularMethod::ThickenedVolume;
  out.warning = k < 5;
  out.scales = opt.eps;
  const Eigen::MatrixXd A = to_eigen(p.q1.matrix), Bm = to_eigen(p.q2.matrix);
  // Kronecker sequence from the generalised golden ratio
  double phi = 2;
  for (int it = 0; it < 200; ++it) phi -= (std::pow(phi, k + 1) - phi - 1) / ((k + 1) * std::pow(phi, k) - 1);
  std::vector<long double> alpha(K);
  for (std::size_t i = 0; i < K; ++i) {
    long double a = 1.0L / std::pow(static_cast<long double>(phi), static_cast<long double>(i + 1));
    alpha[i] = a - std::floor(a);
  }
  std::mt19937_64 rng(opt.seed);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  std::vector<std::vector<double>> shifts(static_cast<std::size_t>(opt.shifts), std::vector<double>(K));
  for (auto& s : shifts)
    for (auto& v : s) v = unif(rng);
  const double sphere = 2 * std::pow(kPi, k / 2.0) / boost::math::tgamma(k / 2.0);
  const auto& gl = gauss_legendre(opt.order);
  const double expo = (k - 2) / 2.0;
  std::vector<std::vector<double>> est(static_cast<std::size_t>(opt.shifts), std::vector<double>(E, 0.0));
  std::vector<std::vector<long>> hits(static_cast<std::size_t>(opt.shifts), std::vector<long>(E, 0));
  auto run_shift = [&](std::size_t sh) {
    Eigen::VectorXd s(k);
    std::vector<double> acc(E, 0.0), comp(E, 0.0);
    std::vector<double> cuts;
    for (long j = 0; j < opt.directions; ++j) {
      for (std::size_t i = 0; i < K; ++i) {
        long double u = shifts[sh][i] + static_cast<long double>(j + 1) * alpha[i];
        double uu = static_cast<double>(u - std::floor(u));
        uu = std::min(std::max(uu, 1e-15), 1 - 1e-15);
        s(static_cast<int>(i)) = std::sqrt(2.0) * boost::math::erf_inv(2 * uu - 1);
      }
      s.normalize();
      const double q[2] = {s.dot(A * s), s.dot(Bm * s)};
      const double smax = s.cwiseAbs().maxCoeff();
      const double tmax = (w.rho / smax) * (w.rho / smax);
      for (std::size_t e = 0; e < E; ++e) {
        const double eps = opt.eps[e];
        double lo = 0, hi = tmax;
        cuts.clear();
        bool empty = false;
        for (int f = 0; f < 2 && !empty; ++f) {
          if (q[f] == 0) {
            empty = std::abs(mu[static_cast<std::size_t>(f)]) >= eps;
            continue;
          }
          double a = (mu[static_cast<std::size_t>(f)] - eps) / q[f], b = (mu[static_cast<std::size_t>(f)] + eps) / q[f];
          if (a > b) std::swap(a, b);
          lo = std::max(lo, a);
          hi = std::min(hi, b);
          cuts.push_back(mu[static_cast<std::size_t>(f)] / q[f]);
        }
        if (empty || !(lo < hi)) continue;
        ++hits[sh][e];
        cuts.push_back(lo);
        cuts.push_back(hi);
        std::sort(cuts.begin(), cuts.end());
        double total = 0;
        for (std::size_t c = 0; c + 1 < cuts.size(); ++c) {
          const double a = std::max(cuts[c], lo), b = std::min(cuts[c + 1], hi);
          if (!(a < b)) continue;
          double piece = 0;
          for (const auto& [x, wt] : gl) {
            const double t = a + (x + 1) * (b - a) / 2;
            const double r = std::sqrt(t);
            double tent = 1;
            for (int f = 0; f < 2; ++f) tent *= std::max(0.0, 1 - std::abs(t * q[f] - mu[static_cast<std::size_t>(f)]) / eps);
            if (tent == 0) continue;
            double wv = w.normalization;
            for (int i = 0; i < k && wv != 0; ++i) wv *= w.eval1(r * s(i));
            piece += wt * std::pow(t, expo) * wv * tent;
          }
          total += piece * (b - a) / 2;
        }
        const double v = 0.5 * total / (eps * eps);
        const double t = acc[e] + v;
        comp[e] += std::abs(acc[e]) >= std::abs(v) ? (acc[e] - t) + v : (v - t) + acc[e];
        acc[e] = t;
      }
    }
    for (std::size_t e = 0; e < E; ++e) est[sh][e] = sphere * (acc[e] + comp[e]) / static_cast<double>(opt.directions);
  };
  const long S = opt.shifts;
  if (exec == Exec::Parallel) {
#pragma omp parallel for schedule(dynamic)
    for (long sh = 0; sh < S; ++sh) run_shift(static_cast<std::size_t>(sh));
  } else {
    for (long sh = 0; sh < S; ++sh) run_shift(static_cast<std::size_t>(sh));
  }
  std::vector<long> tot_hits(E, 0);
  out.values.assign(E, 0.0);
  for (std::size_t sh = 0; sh < static_cast<std::size_t>(S); ++sh)
    for (std::size_t e = 0; e < E; ++e) {
      tot_hits[e] += hits[sh][e];
      out.values[e] += est[sh][e] / S;
    }
  out.hits = tot_hits.back();
  const long any_hits = std::accumulate(tot_hits.begin(), tot_hits.end(), 0L);
  if (any_hits == 0) {
    out.estimate = 0;
    out.error_bar = 0;
    return out;
  }
  if (out.hits < opt.min_hits)
    throw NumericalError("thin locus: only " + std::to_string(out.hits) +
                         " directions meet the smallest thickening; use a larger epsilon");
  std::vector<double> extrap(static_cast<std::size_t>(S));
  for (std::size_t sh = 0; sh < static_cast<std::size_t>(S); ++sh) {
    const auto& v = est[sh];
    if (E == 1) {
      extrap[sh] = v[0];
    } else {
      const double e1 = opt.eps[E - 2], e2 = opt.eps[E - 1];
      extrap[sh] = v[E - 1] - e2 * (v[E - 2] - v[E - 1]) / (e1 - e2);
    }
  }
  double mean = 0;
  for (double v : extrap) mean += v / S;
  double var = 0;
  for (double v : extrap) var += (v - mean) * (v - mean);
  const double sigma = S > 1 ? std::sqrt(var / (S - 1) / S) : 0.0;
  double lo = out.values.back(), hi = lo;
  for (std::size_t e = E >= 3 ? E - 3 : 0; e < E; ++e) {
    lo = std::min(lo, out.values[e]);
    hi = std::max(hi, out.values[e]);
  }
  out.estimate = mean;
  out.error_bar = std::max(sigma, hi - lo);
  return out;
}

}  // namespace qfp
