#include "qfp/cli.hpp"

#include <omp.h>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "CLI11.hpp"
#include "qfp/analytic.hpp"
#include "qfp/counting.hpp"
#include "qfp/expsums.hpp"
#include "qfp/io.hpp"
#include "qfp/localarith.hpp"
#include "qfp/verify.hpp"

namespace qfp::cli {

namespace {

constexpr const char* kVersion = "0.1.0";

const std::vector<std::string> kCommands = {"analyze", "classify", "sigma",  "series", "jintegral", "count", "asym",
                                            "meansq",  "scan",     "primes", "k4",     "lines",     "verify"};

struct Flags {
  std::string pencil;
  std::string n;
  std::string B;
  long N = 0;
  std::string L;
  std::string weight = "bump:2";
  std::uint64_t seed = 1;
  bool seed_set = false;
  std::string format = "jsonl";
  std::uint64_t budget_evals = Budget{}.evals;
  std::uint64_t budget_lattice = Budget{}.lattice;
  int emax = LocalOptions{}.e_max;
  long pcut = 50;
  int threads = 0;
  // command specific
  std::string primes;
  std::string mu;
  std::string method = "both";
  long shells = 3;
  long pairs = 200;
  std::string a, b;
  bool table = false;
  std::vector<std::string> suites;
  std::string baselines;
  std::string write_baselines;
};

// JSON-lines or CSV; in CSV mode a new column header is printed whenever the key set changes.
class Emitter {
 public:
  Emitter(std::ostream& out, bool csv) : out_(out), csv_(csv) {}

  void header(const json& h) {
    if (csv_)
      out_ << "# " << h.dump() << '\n';
    else
      out_ << h.dump() << '\n';
  }

  void record(json rec) {
    rec["schema"] = 1;
    if (!csv_) {
      out_ << rec.dump() << '\n';
      return;
    }
    std::vector<std::string> keys;
    for (auto it = rec.begin(); it != rec.end(); ++it) keys.push_back(it.key());
    if (keys != columns_) {
      columns_ = keys;
      for (std::size_t i = 0; i < keys.size(); ++i) out_ << (i ? "," : "") << keys[i];
      out_ << '\n';
    }
    std::size_t i = 0;
    for (auto it = rec.begin(); it != rec.end(); ++it, ++i) out_ << (i ? "," : "") << cell(it.value());
    out_ << '\n';
  }

 private:
  static std::string cell(const json& v) {
    if (v.is_string()) return quote(v.get<std::string>());
    if (v.is_array()) {
      std::string s;
      for (std::size_t i = 0; i < v.size(); ++i) s += (i ? ";" : "") + (v[i].is_string() ? v[i].get<std::string>() : v[i].dump());
      return quote(s);
    }
    if (v.is_object()) return quote(v.dump());
    return v.dump();
  }
  static std::string quote(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string q = "\"";
    for (char c : s) q += c == '"' ? std::string("\"\"") : std::string(1, c);
    return q + "\"";
  }

  std::ostream& out_;
  bool csv_;
  std::vector<std::string> columns_;
};

Pencil pencil_arg(const Flags& f) {
  if (f.pencil.empty()) throw InvalidInput("--pencil is required");
  if (f.pencil.rfind("builtin:", 0) == 0) return standard_pencil(f.pencil.substr(8));
  return load_pencil(f.pencil);
}

void require_condition2(const Pencil& p) {
  if (!check_condition2(p)) throw ConditionFailure("pencil fails the nonsingularity condition (disc F = 0)");
}

Target target_arg(const Flags& f) {
  if (f.n.empty()) throw InvalidInput("--n A,B is required");
  return parse_pair(f.n);
}

std::vector<double> list_or(const std::string& s, std::vector<double> fallback) {
  return s.empty() ? fallback : parse_doubles(s);
}

LocalOptions local_opts(const Flags& f) {
  LocalOptions o;
  o.budget = {f.budget_evals, f.budget_lattice};
  if (f.emax < 1) throw InvalidInput("--emax must be positive");
  o.e_max = f.emax;
  return o;
}

Budget budget(const Flags& f) { return {f.budget_evals, f.budget_lattice}; }

json target_json(const Target& n) { return {int_json(n[0]), int_json(n[1])}; }

json doubles(const std::vector<double>& v) {
  json a = json::array();
  for (double x : v) a.push_back(num(x));
  return a;
}

json integral_json(const SingularIntegralValue& v) {
  json j;
  j["type"] = "jintegral";
  j["method"] = to_string(v.method);
  j["mu"] = doubles({v.mu[0], v.mu[1]});
  j["estimate"] = num(v.estimate);
  j["error_bar"] = num(v.error_bar);
  j["scales"] = doubles(v.scales);
  j["values"] = doubles(v.values);
  j["fitted_constant"] = num(v.fitted_constant);
  j["hits"] = v.hits;
  j["warning"] = v.warning;
  return j;
}

// ---- commands -------------------------------------------------------------

void cmd_analyze(const Flags& f, Emitter& em) {
  Pencil p = pencil_arg(f);
  json j;
  j["type"] = "analyze";
  j["k"] = p.k();
  j["diagonal"] = p.diagonal();
  j["f_coeffs"] = int_list(p.f.coeffs);
  j["disc"] = int_json(p.disc_f);
  j["condition2"] = check_condition2(p);
  if (check_condition2(p)) {
    j["bad_primes"] = int_list(bad_primes(p));
    if (p.diagonal()) j["diagonal_ratios_distinct"] = check_diagonal_ratios(p);
    std::vector<std::pair<Rat, Rat>> grid;
    for (long a = -3; a <= 3; ++a)
      for (long b = -3; b <= 3; ++b)
        if (a != 0 || b != 0) grid.emplace_back(Rat(a), Rat(b));
    j["condition4_grid"] = check_condition4(p, grid);
  }
  RepresentationCounter rc(p);
  j["definite_member"] = rc.has_definite_member();
  if (rc.has_definite_member()) j["definite_combination"] = {rc.combination()[0], rc.combination()[1]};
  em.record(j);
}

void cmd_classify(const Flags& f, Emitter& em) {
  Pencil p = pencil_arg(f);
  require_condition2(p);
  const Target n = target_arg(f);
  const LocalOptions lo = local_opts(f);
  for (long q : primes_up_to(f.pcut)) {
    auto c = classify_prime(p, n, q, lo);
    json j;
    j["type"] = "classify";
    j["n"] = target_json(n);
    j["p"] = q;
    j["kind"] = to_string(c.kind);
    j["type1_over_fp_only"] = c.type1_over_fp_only;
    if (c.evidence) j["evidence"] = *c.evidence;
    em.record(j);
  }
}

void cmd_sigma(const Flags& f, Emitter& em) {
  Pencil p = pencil_arg(f);
  require_condition2(p);
  const Target n = target_arg(f);
  if (f.primes.empty()) throw InvalidInput("--p LIST is required");
  for (long q : parse_longs(f.primes)) {
    if (q < 2 || !is_prime(Int(q))) throw InvalidInput("not a prime: " + std::to_string(q));
    json j = local_report_json(sigma_p(p, n, q, local_opts(f)), n);
    j["type"] = "sigma";
    em.record(j);
  }
}

void cmd_series(const Flags& f, Emitter& em) {
  Pencil p = pencil_arg(f);
  require_condition2(p);
  const Target n = target_arg(f);
  auto s = singular_series(p, n, f.pcut, local_opts(f));
  for (const auto& r : s.per_prime) {
    json j = local_report_json(r, n);
    j["type"] = "sigma";
    em.record(j);
  }
  json j;
  j["type"] = "series";
  j["n"] = target_json(n);
  j["p_cut"] = s.p_cut;
  j["value"] = num(s.value);
  j["exact"] = s.exact.get_str();
  j["truncated"] = s.truncated;
  j["not_locally_solvable"] = s.not_locally_solvable;
  j["obstructed_prime"] = s.obstructed_prime;
  j["tail_constant"] = num(s.tail_constant);
  j["tail_note"] = s.tail_note;
  em.record(j);
}

void cmd_jintegral(const Flags& f, Emitter& em) {
  Pencil p = pencil_arg(f);
  require_condition2(p);
  if (f.mu.empty()) throw InvalidInput("--mu A,B is required");
  auto m = parse_doubles(f.mu);
  if (m.size() != 2) throw InvalidInput("--mu expects two values");
  const std::array<double, 2> mu{m[0], m[1]};
  const WeightSpec w = parse_weight(f.weight);
  if (f.method != "both" && f.method != "truncated" && f.method != "thickened")
    throw InvalidInput("--method must be truncated, thickened or both");
  if (f.method != "thickened") em.record(integral_json(singular_integral_truncated(p, mu, w)));
  if (f.method != "truncated") {
    ThickenedOptions th;
    if (f.seed_set) th.seed = f.seed;
    em.record(integral_json(singular_integral_thickened(p, mu, w, th)));
  }
}

void cmd_count(const Flags& f, Emitter& em) {
  Pencil p = pencil_arg(f);
  require_condition2(p);
  const WeightSpec w = parse_weight(f.weight);
  const auto Bs = list_or(f.B, {8});
  if (f.table) {
    for (double B : Bs) {
      auto t = representation_table(p, B, w, budget(f));
      std::vector<std::pair<std::int64_t, std::int64_t>> keys;
      for (const auto& [key, v] : t.table) keys.push_back(key);
      std::sort(keys.begin(), keys.end());
      for (const auto& key : keys) {
        json j;
        j["type"] = "count";
        j["B"] = num(B);
        j["n"] = {key.first, key.second};
        j["R"] = num(t.table.at(key));
        em.record(j);
      }
    }
    return;
  }
  const Target n = target_arg(f);
  RepresentationCounter rc(p);
  for (double B : Bs) {
    json j;
    j["type"] = "count";
    j["B"] = num(B);
    j["n"] = target_json(n);
    j["R"] = num(rc.count(n, B, w, budget(f)));
    em.record(j);
  }
}

void cmd_asym(const Flags& f, Emitter& em) {
  Pencil p = pencil_arg(f);
  require_condition2(p);
  const Target n = target_arg(f);
  AnalyticConfig ac;
  if (f.seed_set) ac.thick.seed = f.seed;
  auto rep = asymptotic_check(p, n, list_or(f.B, {8, 12, 16}), f.pcut, parse_weight(f.weight), ac, local_opts(f));
  for (const auto& row : rep.rows) {
    json j;
    j["type"] = "asym_row";
    j["n"] = target_json(n);
    j["B"] = num(row.B);
    j["R"] = num(row.R);
    j["J"] = num(row.J);
    j["J_err"] = num(row.J_err);
    j["main"] = num(row.main);
    j["ratio"] = num(row.ratio);
    em.record(j);
  }
  json j;
  j["type"] = "asym";
  j["n"] = target_json(n);
  j["series"] = num(rep.series);
  j["series_truncated"] = rep.series_truncated;
  j["slope"] = num(rep.slope);
  j["trend_to_one"] = rep.trend_to_one;
  j["degenerate"] = rep.degenerate;
  j["note"] = rep.note;
  em.record(j);
}

void cmd_meansq(const Flags& f, Emitter& em) {
  Pencil p = pencil_arg(f);
  require_condition2(p);
  if (f.pairs < 1) throw InvalidInput("--pairs must be positive");
  const auto pairs = static_cast<std::size_t>(f.pairs);
  const auto sample = unit_sample(4 * pairs, f.seed_set ? f.seed : 2024);
  AnalyticConfig ac;
  for (double B : list_or(f.B, {8, 16})) {
    auto row = mean_square_statistic(p, B, f.N, sample, pairs, f.pcut, parse_weight(f.weight), ac, local_opts(f));
    json j;
    j["type"] = "meansq";
    j["B"] = num(row.B);
    j["N"] = row.N;
    j["statistic"] = num(row.statistic);
    j["pairs"] = row.pairs;
    j["zero_J"] = row.zero_J;
    j["thin"] = row.thin;
    em.record(j);
  }
}

void cmd_scan(const Flags& f, Emitter& em) {
  Pencil p = pencil_arg(f);
  require_condition2(p);
  const auto Bs = list_or(f.B, {8});
  const long N = f.N > 0 ? f.N : 10;
  auto r = exceptional_scan(p, N, Bs.front(), f.pcut, parse_weight(f.weight), local_opts(f));
  for (const auto& n : r.exceptional) {
    json j;
    j["type"] = "exceptional";
    j["n"] = target_json(n);
    em.record(j);
  }
  json j;
  j["type"] = "scan";
  j["N"] = r.N;
  j["B"] = num(r.B);
  j["pairs"] = r.pairs;
  j["excluded_f_zero"] = r.excluded_f_zero;
  j["real_unsolvable"] = r.real_unsolvable;
  j["zp_unsolvable"] = r.zp_unsolvable;
  j["undecided"] = r.undecided;
  j["locally_solvable"] = r.locally_solvable;
  j["represented"] = r.represented;
  j["exceptional"] = static_cast<long>(r.exceptional.size());
  em.record(j);
}

void cmd_primes(const Flags& f, Emitter& em) {
  Pencil p = pencil_arg(f);
  if (f.shells < 1) throw InvalidInput("--shells must be positive");
  auto s = prime_pair_search(p, f.shells, budget(f));
  for (const auto& h : s.hits) {
    json j;
    j["type"] = "prime_pair";
    j["x"] = h.x;
    j["r1"] = int_json(h.r1);
    j["r2"] = int_json(h.r2);
    j["shell"] = h.shell;
    em.record(j);
  }
  json j;
  j["type"] = "primes";
  j["shells"] = f.shells;
  j["per_shell"] = s.per_shell;
  j["distinct"] = static_cast<long>(s.distinct.size());
  j["positive_witness"] = s.positive_witness;
  em.record(j);
}

void cmd_k4(const Flags& f, Emitter& em) {
  const auto Ls = f.L.empty() ? std::vector<long>{10000, 40000} : parse_longs(f.L);
  const long N = f.N > 0 ? f.N : 2520;
  for (long L : Ls) require_condition2(qpair1(L));
  auto rep = k4_experiment(Ls, N, local_opts(f));
  for (const auto& row : rep.rows) {
    json j;
    j["type"] = "k4";
    j["N"] = rep.N;
    j["L"] = row.L;
    j["surveyed"] = row.surveyed;
    j["zp_pass"] = row.zp_pass;
    j["zp_undecided"] = row.zp_undecided;
    j["representable"] = row.representable;
    em.record(j);
  }
}

void cmd_lines(const Flags& f, Emitter& em) {
  Pencil p = pencil_arg(f);
  if (f.a.empty() || f.b.empty()) throw InvalidInput("--a LIST and --b LIST are required");
  auto r = line_polynomials(p, parse_ints(f.a), parse_ints(f.b));
  for (int i = 0; i < 2; ++i) {
    const auto u = static_cast<std::size_t>(i);
    json j;
    j["type"] = "line";
    j["form"] = i + 1;
    j["coeffs"] = int_list({r.coeffs[u][0], r.coeffs[u][1], r.coeffs[u][2]});
    j["disc"] = int_json(r.disc[u]);
    j["qdisc"] = int_json(r.qdisc[u]);
    j["qdisc_consistent"] = r.qdisc_consistent[u];
    j["reducible"] = r.reducible[u];
    j["fixed_divisors"] = r.fixed_divisors[u];
    em.record(j);
  }
  json j;
  j["type"] = "line_product";
  j["fixed_divisors"] = r.product_fixed_divisors;
  em.record(j);
}

int cmd_verify(const Flags& f, Emitter& em, std::ostream& err) {
  if (!f.write_baselines.empty()) {
    std::ofstream out(f.write_baselines);
    if (!out) throw InvalidInput("cannot write " + f.write_baselines);
    out << compute_baselines().dump(2) << '\n';
    json j;
    j["type"] = "baselines_written";
    j["path"] = f.write_baselines;
    em.record(j);
    return kOk;
  }
  const auto all = suite_names();
  std::vector<std::string> suites = f.suites.empty() ? all : f.suites;
  for (const auto& s : suites)
    if (std::find(all.begin(), all.end(), s) == all.end()) throw InvalidInput("unknown suite: " + s);
  const std::string path = f.baselines.empty() ? default_baseline_path() : f.baselines;
  std::vector<std::string> failed;
  for (const auto& s : suites) {
    auto r = run_suite(s, path);
    json j;
    j["type"] = "suite";
    j["suite"] = s;
    j["status"] = r.pass ? "PASS" : "FAIL";
    j["detail"] = r.detail;
    em.record(j);
    err << "verify " << s << ": " << (r.pass ? "PASS" : "FAIL") << " (" << r.seconds << " s)\n";
    if (!r.pass) failed.push_back(s);
  }
  json j;
  j["type"] = "verify";
  j["suites"] = suites.size();
  j["failed"] = failed;
  em.record(j);
  return failed.empty() ? kOk : kVerifyFailed;
}

void add_common(CLI::App& app, Flags& f) {
  app.add_option("--pencil", f.pencil, "pencil JSON file, or builtin:NAME");
  app.add_option("--n", f.n, "target A,B");
  app.add_option("--B", f.B, "list of box scales");
  app.add_option("--N", f.N, "target range");
  app.add_option("--L", f.L, "list of L values");
  app.add_option("--weight", f.weight, "bump:RHO or box:RHO");
  app.add_option("--seed", f.seed, "random seed");
  app.add_option("--format", f.format, "jsonl or csv")->check(CLI::IsMember({"jsonl", "csv"}));
  app.add_option("--budget-evals", f.budget_evals, "residue evaluations per operation");
  app.add_option("--budget-lattice", f.budget_lattice, "lattice points per sweep");
  app.add_option("--emax", f.emax, "maximal lifting exponent");
  app.add_option("--pcut", f.pcut, "singular series prime cutoff");
  app.add_option("--threads", f.threads, "worker threads (0 = all)");
}

void add_specific(const std::string& cmd, CLI::App& app, Flags& f) {
  if (cmd == "sigma") app.add_option("--p", f.primes, "list of primes");
  if (cmd == "jintegral") {
    app.add_option("--mu", f.mu, "point mu1,mu2");
    app.add_option("--method", f.method, "truncated, thickened or both");
  }
  if (cmd == "count") app.add_flag("--table", f.table, "dump the full representation table");
  if (cmd == "primes") app.add_option("--shells", f.shells, "number of sup-norm shells");
  if (cmd == "meansq") app.add_option("--pairs", f.pairs, "sample size");
  if (cmd == "lines") {
    app.add_option("--a", f.a, "direction vector");
    app.add_option("--b", f.b, "base point");
  }
  if (cmd == "verify") {
    app.add_option("--suite", f.suites, "suite to run (repeatable)");
    app.add_option("--baselines", f.baselines, "baseline file");
    app.add_option("--write-baselines", f.write_baselines, "write baselines to FILE and exit");
  }
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  if (argc < 2) {
    err << "usage: qfp COMMAND [flags]; commands:";
    for (const auto& c : kCommands) err << ' ' << c;
    err << '\n';
    return kInvalid;
  }
  const std::string cmd = argv[1];
  if (std::find(kCommands.begin(), kCommands.end(), cmd) == kCommands.end()) {
    err << "unknown command: " << cmd << '\n';
    return kUnknownCommand;
  }
  Flags f;
  CLI::App app("qfp " + cmd);
  add_common(app, f);
  add_specific(cmd, app, f);
  try {
    app.parse(argc - 1, argv + 1);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << e.what() << '\n';
    return kInvalid;
  }
  f.seed_set = app.count("--seed") > 0;
  if (f.threads < 0) {
    err << "--threads must be nonnegative\n";
    return kInvalid;
  }
  if (f.threads > 0) omp_set_num_threads(f.threads);

  Emitter em(out, f.format == "csv");
  try {
    json h;
    h["schema"] = 1;
    h["type"] = "header";
    h["command"] = cmd;
    h["pencil"] = f.pencil;
    h["seed"] = f.seed;
    h["weight"] = parse_weight(f.weight).describe();
    h["budgets"] = {{"evals", f.budget_evals}, {"lattice", f.budget_lattice}, {"emax", f.emax}, {"pcut", f.pcut}};
    h["version"] = kVersion;
    em.header(h);
    if (cmd == "analyze") cmd_analyze(f, em);
    else if (cmd == "classify") cmd_classify(f, em);
    else if (cmd == "sigma") cmd_sigma(f, em);
    else if (cmd == "series") cmd_series(f, em);
    else if (cmd == "jintegral") cmd_jintegral(f, em);
    else if (cmd == "count") cmd_count(f, em);
    else if (cmd == "asym") cmd_asym(f, em);
    else if (cmd == "meansq") cmd_meansq(f, em);
    else if (cmd == "scan") cmd_scan(f, em);
    else if (cmd == "primes") cmd_primes(f, em);
    else if (cmd == "k4") cmd_k4(f, em);
    else if (cmd == "lines") cmd_lines(f, em);
    else return cmd_verify(f, em, err);
  } catch (const MalformedPencil& e) {
    err << "malformed pencil: " << e.what() << '\n';
    return kMalformedPencil;
  } catch (const BudgetError& e) {
    err << "budget exceeded: " << e.what() << '\n';
    return kBudget;
  } catch (const NumericalError& e) {
    err << "numerical failure: " << e.what() << '\n';
    return kBudget;
  } catch (const ConditionFailure& e) {
    err << "condition failure: " << e.what() << '\n';
    return kInvalid;
  } catch (const InvalidInput& e) {
    err << "invalid input: " << e.what() << '\n';
    return kInvalid;
  } catch (const std::invalid_argument& e) {
    err << "invalid input: " << e.what() << '\n';
    return kInvalid;
  }
  return kOk;
}

}  // namespace qfp::cli
