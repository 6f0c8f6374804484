#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "qfp/cli.hpp"

namespace {

struct Run {
  int code;
  std::string out, err;
};

Run run(std::vector<std::string> args) {
  args.insert(args.begin(), "qfp");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = qfp::cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::string pencil(const std::string& name) { return std::string(QFP_DATA_DIR) + "/pencils/" + name + ".json"; }

std::vector<nlohmann::json> lines(const std::string& s) {
  std::vector<nlohmann::json> v;
  std::istringstream in(s);
  for (std::string l; std::getline(in, l);) v.push_back(nlohmann::json::parse(l));
  return v;
}

std::string temp_file(const std::string& name, const std::string& content) {
  auto path = std::filesystem::temp_directory_path() / name;
  std::ofstream(path) << content;
  return path.string();
}

}  // namespace

TEST(Cli, AnalyzeReportsDiscAndBadPrimes) {
  auto r = run({"analyze", "--pencil", pencil("p5")});
  ASSERT_EQ(r.code, 0) << r.err;
  auto v = lines(r.out);
  ASSERT_EQ(v.size(), 2u);
  EXPECT_EQ(v[0]["type"], "header");
  EXPECT_EQ(v[1]["disc"], 82944);
  EXPECT_EQ(v[1]["bad_primes"], nlohmann::json({2, 3}));
  EXPECT_EQ(v[1]["schema"], 1);
}

TEST(Cli, SeriesHasPerPrimeTable) {
  auto r = run({"series", "--pencil", pencil("p5"), "--n", "2,3", "--pcut", "50"});
  ASSERT_EQ(r.code, 0) << r.err;
  auto v = lines(r.out);
  EXPECT_EQ(v.size(), 2u + 15u);  // header, 15 primes below 50, summary
  EXPECT_EQ(v.back()["type"], "series");
  EXPECT_GT(v.back()["value"].get<double>(), 0);
}

TEST(Cli, PrimesFindsFiveThirteen) {
  auto r = run({"primes", "--pencil", pencil("fi"), "--shells", "3"});
  ASSERT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("\"r1\":5,\"r2\":13,\"schema\":1,\"shell\":3,\"type\":\"prime_pair\",\"x\":[1,1,3]"), std::string::npos);
}

TEST(Cli, ExitCodes) {
  EXPECT_EQ(run({"frobnicate"}).code, qfp::cli::kUnknownCommand);
  EXPECT_EQ(run({"analyze", "--pencil", "/nonexistent.json"}).code, qfp::cli::kMalformedPencil);
  EXPECT_EQ(run({"analyze", "--pencil", temp_file("qfp_bad.json", "{\"k\": 2, \"q1\": [[1,2],[0,1]], \"q2\": [[1,0],[0,1]]}")}).code,
            qfp::cli::kMalformedPencil);
  EXPECT_EQ(run({"analyze", "--pencil", temp_file("qfp_trunc.json", "{\"k\": 2, ")}).code, qfp::cli::kMalformedPencil);
  const auto singular = temp_file("qfp_sing.json", "{\"k\": 2, \"q1\": [[1,0],[0,1]], \"q2\": [[2,0],[0,2]]}");
  EXPECT_EQ(run({"series", "--pencil", singular, "--n", "1,2"}).code, qfp::cli::kInvalid);
  EXPECT_EQ(run({"analyze", "--pencil", singular}).code, 0);
  EXPECT_EQ(run({"series", "--pencil", pencil("p5"), "--n", "1,2,3"}).code, qfp::cli::kInvalid);
  EXPECT_EQ(run({"count", "--pencil", pencil("p5"), "--table", "--B", "8", "--budget-lattice", "100"}).code, qfp::cli::kBudget);
  EXPECT_EQ(run({"analyze", "--bogus"}).code, qfp::cli::kInvalid);
}

TEST(Cli, BuiltinPencilsAndCsv) {
  auto r = run({"count", "--pencil", "builtin:p5", "--n", "5,15", "--B", "2", "--weight", "box:2", "--format", "csv"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.out.rfind("# {", 0), 0u);
  EXPECT_NE(r.out.find("B,R,n,schema,type\n2.0,32.0,5;15,1,count\n"), std::string::npos) << r.out;
}

TEST(Cli, Deterministic) {
  const std::vector<std::string> args = {"jintegral", "--pencil", pencil("p5"), "--mu", "0.4,1.0", "--method", "thickened"};
  EXPECT_EQ(run(args).out, run(args).out);
}

TEST(Cli, VerifySingleSuite) {
  auto r = run({"verify", "--suite", "telescoping"});
  EXPECT_EQ(r.code, 0) << r.out;
  auto v = lines(r.out);
  ASSERT_EQ(v.size(), 3u);
  EXPECT_EQ(v[1]["suite"], "telescoping");
  EXPECT_EQ(v[1]["status"], "PASS");
}

TEST(Cli, CorruptedBaselinesFail) {
  const auto bad = temp_file("qfp_baselines_bad.json", "{\"schema\": 1, \"p5_disc\": \"1\"");
  auto r = run({"verify", "--suite", "baselines", "--baselines", bad});
  EXPECT_EQ(r.code, qfp::cli::kVerifyFailed);
  EXPECT_NE(r.out.find("\"failed\":[\"baselines\"]"), std::string::npos);
  const auto wrong = temp_file("qfp_baselines_wrong.json", "{\"schema\": 1, \"p5_disc\": \"1\"}");
  EXPECT_EQ(run({"verify", "--suite", "baselines", "--baselines", wrong}).code, qfp::cli::kVerifyFailed);
}

TEST(Cli, BaselinesRoundTrip) {
  const auto path = (std::filesystem::temp_directory_path() / "qfp_baselines_rt.json").string();
  ASSERT_EQ(run({"verify", "--write-baselines", path}).code, 0);
  EXPECT_EQ(run({"verify", "--suite", "baselines", "--baselines", path}).code, 0);
}
