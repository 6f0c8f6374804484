#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace qfp {

// Error taxonomy; the CLI maps each class to an exit code.
struct BudgetError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct InvalidInput : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct ConditionFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct NumericalError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class Exec { Serial, Parallel };

struct Budget {
  std::uint64_t evals = 100000000ULL;     // residue evaluations per operation
  std::uint64_t lattice = 1000000000ULL;  // lattice points per sweep
};

inline void require_budget(double cost, std::uint64_t limit, const std::string& what) {
  if (cost > static_cast<double>(limit))
    throw BudgetError(what + ": cost " + std::to_string(static_cast<long double>(cost)) +
                      " exceeds budget " + std::to_string(limit));
}

}  // namespace qfp
