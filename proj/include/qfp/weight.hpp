#pragma once

#include <string>
#include <vector>

namespace qfp {

enum class WeightKind { Bump, BoxMollified };

// Product weight w(x) = prod_i w1(x_i), supported on [-rho, rho]^k.
struct WeightSpec {
  WeightKind kind = WeightKind::Bump;
  double rho = 2.0;
  double normalization = 1.0;

  double eval1(double u) const;
  double eval(const std::vector<double>& x) const;
  // Integral of w1 over the real line.
  double mass1() const;
  std::string describe() const;
};

double weight_eval(const WeightSpec& w, const std::vector<double>& x);
// Parses "bump:RHO" or "box:RHO".
WeightSpec parse_weight(const std::string& s);

}  // namespace qfp
