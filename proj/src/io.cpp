#include "qfp/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace qfp {

namespace {

Int entry(const json& v) {
  if (v.is_number_integer()) return Int(v.get<long>());
  if (v.is_string()) {
    Int out;
    if (out.set_str(v.get<std::string>(), 10) != 0) throw MalformedPencil("matrix entry is not an integer: " + v.dump());
    return out;
  }
  throw MalformedPencil("matrix entry is not an integer: " + v.dump());
}

IntMatrix matrix(const json& j, int k, const char* name) {
  if (!j.is_array() || static_cast<int>(j.size()) != k) throw MalformedPencil(std::string(name) + " must have k rows");
  IntMatrix m(k, k);
  for (int i = 0; i < k; ++i) {
    const auto& row = j[static_cast<std::size_t>(i)];
    if (!row.is_array() || static_cast<int>(row.size()) != k) throw MalformedPencil(std::string(name) + " must be k x k");
    for (int c = 0; c < k; ++c) m(i, c) = entry(row[static_cast<std::size_t>(c)]);
  }
  if (!m.is_symmetric()) throw MalformedPencil(std::string(name) + " is not symmetric");
  return m;
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, sep))
    if (!item.empty()) out.push_back(item);
  return out;
}

}  // namespace

Pencil pencil_from_json(const json& j) {
  if (!j.is_object() || !j.contains("k") || !j.contains("q1") || !j.contains("q2"))
    throw MalformedPencil("pencil needs fields k, q1, q2");
  if (!j["k"].is_number_integer() || j["k"].get<int>() < 1) throw MalformedPencil("k must be a positive integer");
  const int k = j["k"].get<int>();
  return make_pencil(QuadraticForm(matrix(j["q1"], k, "q1")), QuadraticForm(matrix(j["q2"], k, "q2")));
}

Pencil load_pencil(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw MalformedPencil("cannot open pencil file " + path);
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw MalformedPencil("pencil file " + path + ": " + e.what());
  }
  return pencil_from_json(j);
}

json pencil_to_json(const Pencil& p) {
  json j;
  j["k"] = p.k();
  for (const char* name : {"q1", "q2"}) {
    const auto& m = std::string(name) == "q1" ? p.q1.matrix : p.q2.matrix;
    json rows = json::array();
    for (int i = 0; i < m.rows; ++i) {
      json row = json::array();
      for (int c = 0; c < m.cols; ++c) row.push_back(int_json(m(i, c)));
      rows.push_back(row);
    }
    j[name] = rows;
  }
  return j;
}

double sig12(double v) {
  if (!std::isfinite(v) || v == 0) return v;
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return std::strtod(buf, nullptr);
}

json num(double v) { return std::isfinite(v) ? json(sig12(v)) : json(nullptr); }

json int_json(const Int& v) {
  if (fits_i64(v)) return json(to_i64(v));
  return json(v.get_str());
}

json int_list(const std::vector<Int>& v) {
  json a = json::array();
  for (const auto& x : v) a.push_back(int_json(x));
  return a;
}

json local_report_json(const LocalReport& r, const Target& n) {
  json j;
  j["schema"] = 1;
  j["n"] = {int_json(n[0]), int_json(n[1])};
  j["p"] = r.p;
  j["kind"] = to_string(r.kind);
  j["counts"] = int_list(r.counts);
  j["sigma_num"] = int_json(r.sigma.get_num());
  j["sigma_den"] = int_json(r.sigma.get_den());
  j["sigma"] = num(to_double(r.sigma));
  j["status"] = to_string(r.status);
  j["status_e"] = r.status_e;
  return j;
}

Target parse_pair(const std::string& s) {
  auto v = parse_ints(s);
  if (v.size() != 2) throw InvalidInput("expected a pair A,B: " + s);
  return {v[0], v[1]};
}

std::vector<double> parse_doubles(const std::string& s) {
  std::vector<double> out;
  for (const auto& t : split(s, ',')) {
    try {
      std::size_t pos = 0;
      out.push_back(std::stod(t, &pos));
      if (pos != t.size()) throw InvalidInput("bad number: " + t);
    } catch (const std::logic_error&) {
      throw InvalidInput("bad number: " + t);
    }
  }
  return out;
}

std::vector<long> parse_longs(const std::string& s) {
  std::vector<long> out;
  for (const auto& v : parse_ints(s)) {
    if (!v.fits_slong_p()) throw InvalidInput("integer out of range: " + v.get_str());
    out.push_back(v.get_si());
  }
  return out;
}

std::vector<Int> parse_ints(const std::string& s) {
  std::vector<Int> out;
  for (const auto& t : split(s, ',')) {
    Int v;
    std::string u = t;
    if (!u.empty() && u[0] == '+') u = u.substr(1);
    if (u.empty() || v.set_str(u, 10) != 0) throw InvalidInput("bad integer: " + t);
    out.push_back(v);
  }
  return out;
}

}  // namespace qfp
