#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "hpw/cli.hpp"

using json = nlohmann::json;

namespace {

struct Outcome {
  int code = -1;
  std::string out;
  std::string err;
  json report;
};

Outcome run(std::vector<std::string> args) {
  args.insert(args.begin(), "hpw");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  Outcome o;
  o.code = hpw::cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  o.out = out.str();
  o.err = err.str();
  if (!o.out.empty() && o.out.front() == '{') o.report = json::parse(o.out);
  return o;
}

std::string without_timing(json j) {
  j.erase("timing");
  return j.dump();
}

}  // namespace

TEST(Cli, ClassifyGaussianWeight) {
  const auto o = run({"classify-weight", "--p", "exp(t^2)"});
  EXPECT_EQ(o.code, 0);
  EXPECT_EQ(o.report["schema_version"], "1.0");
  EXPECT_EQ(o.report["subcommand"], "classify-weight");
  EXPECT_EQ(o.report["result"]["big_space"]["verdict"], "Trivial");
  EXPECT_EQ(o.report["result"]["small_space"]["verdict"], "Trivial");
}

TEST(Cli, NormOfZero) {
  const auto o = run({"norm", "--f", "0", "--p", "t"});
  EXPECT_EQ(o.code, 0);
  EXPECT_EQ(o.report["result"]["value"], 0.0);
}

TEST(Cli, AsymptoticCheckDecayingQuotient) {
  const auto o = run({"theorem3", "--f", "exp(2*i*z)/(z+i)", "--p", "t"});
  EXPECT_EQ(o.code, 0);
  EXPECT_NEAR(o.report["result"]["a_hat"].get<double>(), -2.0, 1e-2);
  EXPECT_EQ(o.report["result"]["diverges_to_minus_inf"], true);
}

TEST(Cli, AsymptoticCheckHypothesisNotMet) {
  const auto o = run({"theorem3", "--f", "1/(z+i)", "--p", "t"});
  EXPECT_EQ(o.code, 1);
  EXPECT_EQ(o.report["result"]["status"], "hypothesis-not-met");
  EXPECT_EQ(o.report["result"]["membership"]["in_small_space"], "no");
}

TEST(Cli, UsageErrors) {
  EXPECT_EQ(run({}).code, 2);
  EXPECT_EQ(run({"norm", "--p", "t"}).code, 2);
  EXPECT_EQ(run({"bogus"}).code, 2);
  EXPECT_EQ(run({"mline", "--f", "z", "--points", "2"}).code, 2);
  EXPECT_EQ(run({"mline", "--f", "z", "--tol-convexity", "0"}).code, 2);
  const auto parse_err = run({"norm", "--f", "2z", "--p", "t"});
  EXPECT_EQ(parse_err.code, 2);
  EXPECT_NE(parse_err.err.find("position"), std::string::npos);
  EXPECT_EQ(run({"classify-weight", "--p", "t-1"}).code, 2);
  EXPECT_EQ(run({"witness", "--kind", "medium", "--a", "1"}).code, 2);
  EXPECT_EQ(run({"bloch-compare", "--f", "w", "--fprime", "1"}).code, 2);
}

TEST(Cli, HelpExitsZero) {
  const auto o = run({"--help"});
  EXPECT_EQ(o.code, 0);
  EXPECT_NE(o.out.find("classify-weight"), std::string::npos);
}

TEST(Cli, WitnessTexts) {
  const auto big = run({"witness", "--kind", "big", "--a", "-1", "--b", "1"});
  EXPECT_EQ(big.code, 0);
  const auto e = hpw::parse(big.report["result"]["expression"].get<std::string>(), "z");
  EXPECT_NEAR(std::abs(hpw::eval_complex(e, {0.0, 1.0})), std::exp(-1.0 + 1.0), 1e-14);

  const auto lit = run({"witness", "--kind", "small", "--a", "-1", "--literal"});
  const auto l = hpw::parse(lit.report["result"]["expression"].get<std::string>(), "z");
  EXPECT_NEAR(std::abs(hpw::eval_complex(l, {0.0, 1.0})), 0.5, 1e-15);

  const auto derived = run({"witness", "--kind", "small", "--p", "1"});
  EXPECT_EQ(derived.code, 0);
  EXPECT_EQ(derived.report["result"]["expression"], nullptr);
}

TEST(Cli, DeterministicReports) {
  const std::vector<std::string> args{"mline", "--f", "exp(2*i*z)/(z+i)", "--points", "16"};
  const auto a = run(args);
  const auto b = run(args);
  EXPECT_EQ(without_timing(a.report), without_timing(b.report));
}

TEST(Cli, CurvesAsCsv) {
  const auto dir = std::filesystem::temp_directory_path() / "hpw_cli_curves";
  std::filesystem::remove_all(dir);
  const auto o = run({"mline", "--f", "exp(2*i*z)", "--points", "8", "--curves", dir.string()});
  ASSERT_EQ(o.code, 0);
  const std::string path = o.report["curves"]["ln_Mf"].get<std::string>();
  std::ifstream in(path, std::ios::binary);
  std::string body((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  EXPECT_EQ(body.rfind("t,value\n", 0), 0u);
  EXPECT_EQ(body.find('\r'), std::string::npos);
  std::istringstream lines(body);
  std::string line;
  std::getline(lines, line);
  std::size_t rows = 0;
  while (std::getline(lines, line)) {
    const auto comma = line.find(',');
    const double t = std::stod(line.substr(0, comma));
    const double v = std::stod(line.substr(comma + 1));
    EXPECT_DOUBLE_EQ(v, -2.0 * t);
    ++rows;
  }
  EXPECT_EQ(rows, 8u);
}

TEST(Cli, InlineCurves) {
  const auto o = run({"mline", "--f", "exp(2*i*z)", "--points", "5"});
  EXPECT_EQ(o.report["curves"]["ln_Mf"]["t"].size(), 5u);
  EXPECT_EQ(o.report["result"]["convexity"]["passed"], true);
}

TEST(Cli, OutFile) {
  const auto path = std::filesystem::temp_directory_path() / "hpw_cli_report.json";
  std::filesystem::remove(path);
  const auto o = run({"--out", path.string(), "witness", "--kind", "big", "--a", "0"});
  EXPECT_EQ(o.code, 0);
  EXPECT_TRUE(o.out.empty());
  std::ifstream in(path);
  EXPECT_EQ(json::parse(in)["subcommand"], "witness");
}

TEST(Cli, NonFiniteMarkers) {
  EXPECT_EQ(hpw::cli::num(std::numeric_limits<double>::infinity()), "+inf");
  EXPECT_EQ(hpw::cli::num(-std::numeric_limits<double>::infinity()), "-inf");
  EXPECT_EQ(hpw::cli::num(std::nan("")), "unknown");
  EXPECT_EQ(hpw::cli::num(1.5), 1.5);
}

TEST(Cli, BlochCompareSkipLittle) {
  const auto o = run({"bloch-compare", "--f", "w^2", "--skip-little"});
  EXPECT_EQ(o.code, 0);
  EXPECT_NEAR(o.report["result"]["bloch_seminorm"].get<double>(), 4.0 * std::sqrt(3.0) / 9.0, 1e-6);
  EXPECT_FALSE(o.report["result"].contains("little_bloch"));
}
