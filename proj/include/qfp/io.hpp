#pragma once

#include <string>
#include <vector>

#include "json.hpp"
#include "qfp/forms.hpp"
#include "qfp/localarith.hpp"

namespace qfp {

using json = nlohmann::json;

struct MalformedPencil : InvalidInput {
  using InvalidInput::InvalidInput;
};

// {"k": int, "q1": [[int]], "q2": [[int]]}; entries may be JSON integers or decimal strings.
Pencil pencil_from_json(const json& j);
Pencil load_pencil(const std::string& path);
json pencil_to_json(const Pencil& p);

// Rounds to 12 significant digits for output.
double sig12(double v);
json num(double v);
// Integers that fit in 64 bits print as numbers, larger ones as decimal strings.
json int_json(const Int& v);
json int_list(const std::vector<Int>& v);

json local_report_json(const LocalReport& r, const Target& n);

Target parse_pair(const std::string& s);
std::vector<double> parse_doubles(const std::string& s);
std::vector<long> parse_longs(const std::string& s);
std::vector<Int> parse_ints(const std::string& s);

}  // namespace qfp
