#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "qfp/analytic.hpp"
#include "qfp/common.hpp"
#include "qfp/forms.hpp"
#include "qfp/localarith.hpp"
#include "qfp/weight.hpp"

namespace qfp {

struct KeyHash {
  std::size_t operator()(const std::pair<std::int64_t, std::int64_t>& k) const {
    return std::hash<std::int64_t>()(k.first * 1000003LL ^ k.second);
  }
};

struct CountTable {
  double B = 0;
  WeightSpec weight;
  std::unordered_map<std::pair<std::int64_t, std::int64_t>, double, KeyHash> table;
  std::uint64_t lattice_points = 0;
  double mass = 0;  // sum of w_B over the whole sweep

  double at(std::int64_t n1, std::int64_t n2) const;
};

struct Window {
  std::int64_t n1_min, n1_max, n2_min, n2_max;
  bool contains(std::int64_t a, std::int64_t b) const { return a >= n1_min && a <= n1_max && b >= n2_min && b <= n2_max; }
};

// Largest integer coordinate with w(x/B) > 0.
long support_radius(double B, const WeightSpec& w);

CountTable representation_table(const Pencil& p, double B, const WeightSpec& w, const Budget& b = {},
                                Exec exec = Exec::Parallel, std::optional<Window> window = std::nullopt);

// Per-target counts by enumerating a positive definite member of the pencil.
class RepresentationCounter {
 public:
  explicit RepresentationCounter(const Pencil& p);
  bool has_definite_member() const { return definite_; }
  std::array<long, 2> combination() const { return comb_; }
  double count(const Target& n, double B, const WeightSpec& w, const Budget& b = {}) const;
  // Integer solutions with |x_i| <= radius (unweighted).
  std::uint64_t solutions(const Target& n, long radius, const Budget& b = {}) const;

 private:
  template <class F>
  void enumerate(const Target& n, long radius, const Budget& b, F&& f) const;
  Pencil p_;
  bool definite_ = false;
  std::array<long, 2> comb_{0, 0};
  std::vector<std::int64_t> c_, q1_, q2_;
  std::vector<double> diag_, mu_;  // C(x) = sum_i diag_i (x_i + sum_{j>i} mu_ij x_j)^2
};

double representation_count(const Pencil& p, const Target& n, double B, const WeightSpec& w, const Budget& b = {});

struct AnalyticConfig {
  ThickenedOptions thick;
  std::vector<double> eps_rel{0.2, 0.1, 0.05};  // thickening relative to max|mu|
  bool relative = true;
};

struct AsymptoticRow {
  double B = 0;
  double R = 0;
  double J = 0, J_err = 0;
  double main = 0;
  double ratio = 0;
};
struct AsymptoticReport {
  Target n;
  double series = 0;
  bool series_truncated = false;
  std::vector<AsymptoticRow> rows;
  double slope = 0;  // least-squares slope of |ratio - 1| against B
  bool trend_to_one = false;
  bool degenerate = false;
  std::string note;
};
AsymptoticReport asymptotic_check(const Pencil& p, const Target& n, const std::vector<double>& Bs, long p_cut,
                                  const WeightSpec& w, const AnalyticConfig& ac = {}, const LocalOptions& lo = {});

// Fixed-seed points of [-1,1]^2; targets are round(N u).
std::vector<std::array<double, 2>> unit_sample(std::size_t count, std::uint64_t seed);

struct MeanSquareRow {
  double B = 0;
  long N = 0;
  double statistic = 0;
  long pairs = 0;
  long zero_J = 0;  // pairs refuted over the reals (main term zero)
  long thin = 0;    // pairs whose thickened estimate needed the thin-locus fallback
};
MeanSquareRow mean_square_statistic(const Pencil& p, double B, long N, const std::vector<std::array<double, 2>>& sample,
                                    std::size_t pairs, long p_cut, const WeightSpec& w, const AnalyticConfig& ac = {},
                                    const LocalOptions& lo = {});

struct ExceptionalReport {
  long N = 0;
  double B = 0;
  long pairs = 0, excluded_f_zero = 0, real_unsolvable = 0, zp_unsolvable = 0, undecided = 0;
  long locally_solvable = 0, represented = 0;
  std::vector<Target> exceptional, undecided_pairs;
};
ExceptionalReport exceptional_scan(const Pencil& p, long N, double B, long p_cut, const WeightSpec& w,
                                   const LocalOptions& lo = {});

struct PrimeHit {
  std::vector<long> x;
  Int r1, r2;
  long shell = 0;
};
struct PrimeSearch {
  std::vector<PrimeHit> hits;
  std::vector<long> per_shell;
  std::vector<std::pair<Int, Int>> distinct;
  bool positive_witness = false;
};
PrimeSearch prime_pair_search(const Pencil& p, long shells, const Budget& b = {});

struct K4Row {
  long L = 0;
  long surveyed = 0;
  long zp_pass = 0;
  long zp_undecided = 0;
  long representable = 0;
};
struct K4Report {
  long N = 0;
  std::vector<K4Row> rows;
};
Pencil qpair1(long L);
K4Report k4_experiment(const std::vector<long>& Ls, long N, const LocalOptions& lo = {});

struct LineReport {
  std::array<std::array<Int, 3>, 2> coeffs;  // q_i(t) = c0 + c1 t + c2 t^2
  std::array<Int, 2> disc;                   // c1^2 - 4 c0 c2
  std::array<Int, 2> qdisc;                  // Q_i(b,a)^2 - Q_i(b) Q_i(a)
  std::array<bool, 2> qdisc_consistent{false, false};
  std::array<bool, 2> reducible{false, false};
  std::array<std::vector<long>, 2> fixed_divisors;
  std::vector<long> product_fixed_divisors;
};
LineReport line_polynomials(const Pencil& p, const std::vector<Int>& a, const std::vector<Int>& b);

}  // namespace qfp
