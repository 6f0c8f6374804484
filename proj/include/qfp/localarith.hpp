#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "qfp/common.hpp"
#include "qfp/forms.hpp"

namespace qfp {

using Target = std::array<Int, 2>;

std::vector<Int> bad_primes(const Pencil& p);

enum class PrimeKind { Bad, GoodTypeI, GoodTypeII, Unknown };
const char* to_string(PrimeKind k);

struct PrimeClass {
  long p = 0;
  PrimeKind kind = PrimeKind::Unknown;
  Target target;
  bool type1_over_fp_only = false;  // Type I decided by an F_p scan, not over the closure
  std::optional<std::vector<std::int64_t>> evidence;
};

struct LocalOptions {
  Budget budget;
  int e_max = 6;
  std::uint64_t node_cap = 20000000ULL;  // lifting recursion nodes
  Exec exec = Exec::Parallel;
};

PrimeClass classify_prime(const Pencil& p, const Target& n, long q, const LocalOptions& opt = {});

// Exhaustive enumeration of x mod q^e (the oracle).
Int count_points_naive(const Pencil& p, const Target& n, long q, int e, const LocalOptions& opt = {});
// Level-by-level enumeration of the solution sets mod q, q^2, ..., q^e.
Int count_points_tower(const Pencil& p, const Target& n, long q, int e, const LocalOptions& opt = {});
// Exact N(n;q) for an odd prime q via Gauss sums over the projective line of pencil members.
Int count_points_prime(const Pencil& p, const Target& n, long q);
// Singular points of Q(x) = n over F_q (q odd), found through kernels of pencil members.
std::vector<std::vector<std::int64_t>> singular_points_mod_p(const Pencil& p, const Target& n, long q,
                                                             const LocalOptions& opt = {});

struct LiftingError : BudgetError {
  Int partial_lower_bound;
  LiftingError(const std::string& what, Int lb) : BudgetError(what), partial_lower_bound(std::move(lb)) {}
};
Int count_points_lifted(const Pencil& p, const Target& n, long q, int e, const LocalOptions& opt = {});

enum class LocalStatus { Exact, StabilizedAt, Truncated };
const char* to_string(LocalStatus s);

struct LocalReport {
  long p = 0;
  PrimeKind kind = PrimeKind::Unknown;
  std::vector<Int> counts;  // counts[e] = N(n; p^e), counts[0] = 1
  Rat sigma;
  LocalStatus status = LocalStatus::Truncated;
  int status_e = 0;
  int k = 0;
};

Rat t_from_counts(const LocalReport& r, int e);
LocalReport sigma_p(const Pencil& p, const Target& n, long q, const LocalOptions& opt = {});
// Fills counts up to e (without the Type I shortcut); used by identity checks.
LocalReport local_counts(const Pencil& p, const Target& n, long q, int e, const LocalOptions& opt = {});

Rat sigma_lower_bound(const Pencil& p, const Target& n, long q, const std::vector<Int>& x0, int m);

struct SeriesValue {
  long p_cut = 0;
  Rat exact;
  double value = 0;
  std::vector<LocalReport> per_prime;
  bool truncated = false;
  bool not_locally_solvable = false;
  long obstructed_prime = 0;
  double tail_constant = 0;  // heuristic fit of |sigma_p - 1| p^{3/2} over Type I primes
  std::string tail_note;
};
SeriesValue singular_series(const Pencil& p, const Target& n, long p_cut, const LocalOptions& opt = {});

enum class Solvability { Solvable, Unsolvable, Undecided };
const char* to_string(Solvability s);

struct ZpResult {
  Solvability status = Solvability::Undecided;
  int m = 0;                         // precision reached
  std::vector<std::int64_t> witness; // residues mod q^m, or an exact integer solution
  bool henselian = false;
  int minor_valuation = 0;
};
ZpResult local_solvable_zp(const Pencil& p, const Target& n, long q, int m_max = 12, const LocalOptions& opt = {});

struct RealResult {
  Solvability status = Solvability::Undecided;  // Undecided = NotFound
  std::vector<double> witness;
  double residual = 0;
  std::array<long, 2> certificate{0, 0};  // nu with nu.Q psd and nu.mu < 0
  double lambda_hat = 0;
};
RealResult local_solvable_real(const Pencil& p, double mu1, double mu2, std::uint64_t seed = 1, int starts = 64);

}  // namespace qfp
