#include <gtest/gtest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "hpd/cli.hpp"
#include "hpd/format.hpp"
#include "json.hpp"

using namespace hpd;

namespace {

struct Outcome {
  int code;
  std::string out;
  std::string err;
};

Outcome run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

std::vector<std::string> lines(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream is(text);
  for (std::string l; std::getline(is, l);) out.push_back(l);
  return out;
}

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::istringstream is(line);
  for (std::string f; std::getline(is, f, sep);) out.push_back(f);
  return out;
}

double first_value(const Outcome& r) { return parse_double(lines(r.out).at(0)); }

std::filesystem::path temp_path(const std::string& name) {
  return std::filesystem::temp_directory_path() / ("hpd_cli_test_" + name);
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

// Column 2 of a CSV table body.
std::vector<double> values(const Outcome& r) {
  std::vector<double> out;
  const auto ls = lines(r.out);
  for (std::size_t i = 1; i < ls.size(); ++i) out.push_back(parse_double(split(ls[i], ',').at(1)));
  return out;
}

}  // namespace

TEST(CliEval, Phi) {
  const Outcome r = run({"eval", "--fn", "phi", "--a", "0.5", "--K", "2", "--r", "0.25"});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  EXPECT_NEAR(first_value(r), 0.8, 1e-14);
  EXPECT_EQ(lines(r.out).at(1).rfind("err_estimate: ", 0), 0u);
}

TEST(CliEval, MuSymmetricPoint) {
  const Outcome r = run({"eval", "--fn", "mu", "--a", "0.5", "--r", "0.7071067811865476"});
  ASSERT_EQ(r.code, kExitOk);
  EXPECT_NEAR(first_value(r), 1.5707963267948966, 1e-14);
}

TEST(CliEval, ModulusDomain) {
  const Outcome r = run({"eval", "--fn", "K", "--a", "0.3", "--r", "1.2"});
  EXPECT_EQ(r.code, kExitUsage);
  EXPECT_NE(r.err.find("modulus"), std::string::npos) << r.err;
}

TEST(CliEval, MissingAndExtraParameters) {
  EXPECT_EQ(run({"eval", "--fn", "phi", "--a", "0.5", "--r", "0.25"}).code, kExitUsage);
  EXPECT_EQ(run({"eval", "--fn", "R", "--a", "0.5", "--r", "0.25"}).code, kExitUsage);
  EXPECT_EQ(run({"eval", "--fn", "nosuch", "--a", "0.5"}).code, kExitUsage);
  EXPECT_EQ(run({"eval", "--fn", "K", "--a", "abc", "--r", "0.5"}).code, kExitUsage);
}

TEST(CliEval, Precision) {
  EXPECT_EQ(run({"eval", "--fn", "R", "--a", "0.5", "--precision", "1e-15"}).code, kExitUsage);
  EXPECT_EQ(run({"eval", "--fn", "R", "--a", "0.5", "--precision", "1e-3"}).code, kExitUsage);
  const Outcome r = run({"eval", "--fn", "K", "--a", "0.5", "--r", "0.5", "--precision", "1e-6"});
  ASSERT_EQ(r.code, kExitOk);
  EXPECT_NEAR(first_value(r), 1.6857503548125960429, 1e-6);
}

TEST(CliEval, EveryFunction) {
  const std::vector<std::vector<std::string>> cases = {
      {"K", "--a", "0.3", "--r", "0.5"},
      {"E", "--a", "0.3", "--r", "0.5"},
      {"mu", "--a", "0.3", "--r", "0.5"},
      {"mu-inv", "--a", "0.3", "--y", "2"},
      {"phi", "--a", "0.3", "--K", "2", "--r", "0.5"},
      {"m", "--a", "0.3", "--r", "0.5"},
      {"R", "--a", "0.3"},
      {"hyp2f1", "--a", "0.5", "--b", "0.5", "--c", "1", "--x", "0.5"},
      {"dK_dr", "--a", "0.3", "--r", "0.5"},
      {"dE_dr", "--a", "0.3", "--r", "0.5"},
      {"dmu_dr", "--a", "0.3", "--r", "0.5"},
      {"dm_dr", "--a", "0.3", "--r", "0.5"},
      {"dphi_dK", "--a", "0.3", "--K", "2", "--r", "0.5"},
      {"f1", "--a", "0.3", "--r", "0.5"},
      {"f4", "--a", "0.3", "--p", "2", "--r", "0.5"},
      {"f6", "--a", "0.3", "--t", "0.7", "--r", "0.5"},
      {"f7", "--a", "0.3", "--x", "0.2", "--r", "0.5", "--K", "2"},
      {"f11", "--a", "0.3", "--r", "0.5"},
      {"g1", "--a", "0.3", "--r", "0.5", "--t", "0.7", "--lambda", "1", "--K", "2"},
      {"g2", "--a", "0.3", "--r", "0.5", "--t", "0.7", "--tau", "1", "--K", "2"},
      {"g3", "--a", "0.3", "--r", "0.5", "--t", "0.7", "--K", "2"},
      {"g6", "--a", "0.3", "--r", "0.5", "--p", "2", "--xi", "1", "--K", "2"},
      {"g7", "--a", "0.3", "--r", "0.5", "--p", "2", "--rho", "1", "--K", "2"},
      {"g8", "--a", "0.3", "--r", "0.5", "--p", "2", "--K", "2"},
  };
  for (const auto& c : cases) {
    std::vector<std::string> args = {"eval", "--fn"};
    args.insert(args.end(), c.begin(), c.end());
    const Outcome r = run(args);
    EXPECT_EQ(r.code, kExitOk) << c[0] << ": " << r.err;
    EXPECT_TRUE(std::isfinite(first_value(r))) << c[0];
  }
  const Outcome g1 = run({"eval", "--fn", "g1", "--a", "0.3", "--r", "0.5", "--t", "0.7", "--lambda", "1",
                      "--K", "2"});
  EXPECT_NEAR(first_value(g1), 1.7144947071136198295, 1e-12);
}

TEST(CliEval, JsonAndCsv) {
  const Outcome j = run({"eval", "--fn", "R", "--a", "0.5", "--format", "json"});
  ASSERT_EQ(j.code, kExitOk);
  const auto doc = nlohmann::json::parse(j.out);
  EXPECT_NEAR(doc["value"].get<double>(), std::log(16.0), 1e-12);
  EXPECT_EQ(doc["params"]["a"], 0.5);
  const Outcome c = run({"eval", "--fn", "R", "--a", "0.5", "--format", "csv"});
  ASSERT_EQ(c.code, kExitOk);
  EXPECT_EQ(lines(c.out).at(0), "value,err_estimate");
}

TEST(CliSolve, Examples) {
  Outcome r = run({"solve-modular", "--a", "0.5", "--degree", "1", "--r", "0.42"});
  ASSERT_EQ(r.code, kExitOk);
  EXPECT_EQ(lines(r.out).at(0), "s = 0.42");
  r = run({"solve-modular", "--a", "0.5", "--degree", "2", "--r", "0.8"});
  ASSERT_EQ(r.code, kExitOk);
  EXPECT_NEAR(parse_double(lines(r.out).at(0).substr(4)), 0.25, 1e-14);
  r = run({"solve-modular", "--a", "0.3333333333333333", "--degree", "3", "--r", "0.5",
           "--format", "json"});
  ASSERT_EQ(r.code, kExitOk);
  const auto doc = nlohmann::json::parse(r.out);
  EXPECT_LE(doc["residual"].get<double>(), 1e-9);
  EXPECT_NEAR(doc["s"].get<double>(), 0.0058478208165893807363, 1e-14);
}

TEST(CliSolve, Errors) {
  EXPECT_EQ(run({"solve-modular", "--a", "0.5", "--degree", "0", "--r", "0.5"}).code, kExitUsage);
  EXPECT_EQ(run({"solve-modular", "--a", "0.5", "--r", "0.5"}).code, kExitUsage);
  EXPECT_EQ(run({"solve-modular", "--a", "0.5", "--degree", "2", "--r", "0.5", "--K", "2"}).code,
            kExitUsage);
  // A one-step Newton budget cannot reach the residual target.
  EXPECT_EQ(run({"solve-modular", "--a", "0.3", "--degree", "2.7", "--r", "0.55", "--precision",
                 "1e-14", "--max-iter", "1"})
                .code,
            kExitNoConvergence);
}

TEST(CliTable, PhiRows) {
  const Outcome r = run({"table", "--fn", "phi", "--a", "0.5", "--K", "2", "--r-range", "0.1:0.9:9",
                     "--format", "csv"});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  EXPECT_EQ(lines(r.out).at(0), "r,value,err_estimate");
  const std::vector<double> v = values(r);
  ASSERT_EQ(v.size(), 9u);
  for (std::size_t i = 1; i < v.size(); ++i) EXPECT_GT(v[i], v[i - 1]);
}

TEST(CliTable, RDecreasing) {
  const Outcome r = run({"table", "--fn", "R", "--a-range", "0.05:0.5:10"});
  ASSERT_EQ(r.code, kExitOk);
  const std::vector<double> v = values(r);
  ASSERT_EQ(v.size(), 10u);
  for (std::size_t i = 1; i < v.size(); ++i) EXPECT_LT(v[i], v[i - 1]);
  EXPECT_NEAR(v.back(), std::log(16.0), 1e-12);
}

TEST(CliTable, MVanishesAtRightEdge) {
  const Outcome r = run({"table", "--fn", "m", "--a", "0.5", "--r-range", "0.01:0.99:99"});
  ASSERT_EQ(r.code, kExitOk);
  const std::vector<double> v = values(r);
  ASSERT_EQ(v.size(), 99u);
  EXPECT_LT(v.back(), 0.1);
  EXPECT_LT(v.back(), v[v.size() - 2]);
}

TEST(CliTable, Json) {
  const Outcome r = run({"table", "--fn", "K", "--a", "0.5", "--r-range", "0:0.5:3", "--format", "json"});
  ASSERT_EQ(r.code, kExitOk);
  const auto doc = nlohmann::json::parse(r.out);
  ASSERT_EQ(doc["rows"].size(), 3u);
  EXPECT_EQ(doc["param"], "r");
  EXPECT_NEAR(doc["rows"][0]["value"].get<double>(), 1.5707963267948966, 1e-15);
}

TEST(CliTable, InvalidRanges) {
  for (const std::string bad : {"0.1:0.9:0", "0.1:0.9", "0.1:0.9:2.5", "a:0.9:3", "0.1:0.9:-1",
                                "0.1:0.2:1"}) {
    EXPECT_EQ(run({"table", "--fn", "K", "--a", "0.5", "--r-range", bad}).code, kExitUsage) << bad;
  }
  EXPECT_EQ(run({"table", "--fn", "K", "--a", "0.5"}).code, kExitUsage);
  EXPECT_EQ(run({"table", "--fn", "K", "--a-range", "0.1:0.5:3", "--r-range", "0.1:0.5:3"}).code,
            kExitUsage);
  EXPECT_EQ(run({"table", "--fn", "K", "--a", "0.5", "--r-range", "0.5:1.5:3"}).code, kExitUsage);
}

TEST(CliVerify, IdentitiesToFile) {
  const auto path = temp_path("identities.json");
  const Outcome r = run({"verify", "--suite", "identities", "--out", path.string()});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  const auto doc = nlohmann::json::parse(slurp(path));
  EXPECT_TRUE(doc["failures"].empty());
  EXPECT_EQ(doc["suite"], "identities");
  EXPECT_GT(doc["total_checks"].get<int>(), 0);
  std::filesystem::remove(path);
}

TEST(CliVerify, ThmMultCoarse) {
  const Outcome r = run({"verify", "--suite", "thm-mult", "--grid-density", "10"});
  EXPECT_EQ(r.code, kExitOk) << r.err;
}

TEST(CliVerify, SharpnessProbesRecorded) {
  const Outcome r = run({"verify", "--suite", "thm-mult", "--grid-density", "5", "--falsify-epsilon", "1e-3"});
  ASSERT_EQ(r.code, kExitOk);
  const auto doc = nlohmann::json::parse(r.out);
  ASSERT_FALSE(doc["expected_violations"].empty());
  bool near_one = false;
  for (const auto& e : doc["expected_violations"]) {
    EXPECT_EQ(e["status"], "EXPECTED_VIOLATION");
    if (e["params"]["K"].get<double>() < 1.001) near_one = true;
  }
  EXPECT_TRUE(near_one);
}

TEST(CliVerify, ByteIdenticalReruns) {
  const std::vector<std::string> args = {"verify", "--suite", "prop-pro4", "--grid-density", "6"};
  EXPECT_EQ(run(args).out, run(args).out);
}

TEST(CliVerify, GridOverridesAndFailures) {
  const Outcome ok = run({"verify", "--suite", "identities", "--a-grid", "0.5", "--r-grid", "0.2,0.4",
                      "--K-grid", "2"});
  ASSERT_EQ(ok.code, kExitOk) << ok.err;
  const auto doc = nlohmann::json::parse(ok.out);
  EXPECT_EQ(doc["spec"]["r_grid"].size(), 2u);
  // A tolerance below binary64 resolution turns tolerance checks into failures.
  const Outcome bad = run({"verify", "--suite", "identities", "--a-grid", "0.3", "--r-grid", "0.2,0.4",
                           "--K-grid", "3", "--tolerance", "1e-30"});
  EXPECT_EQ(bad.code, kExitVerificationFailed);
  EXPECT_FALSE(nlohmann::json::parse(bad.out)["failures"].empty());
  EXPECT_EQ(run({"verify", "--suite", "identities", "--tolerance", "-1"}).code, kExitUsage);
}

TEST(CliVerify, MalformedSpecification) {
  EXPECT_EQ(run({"verify", "--suite", "identities", "--r-grid", "0.1,x"}).code, kExitUsage);
  EXPECT_EQ(run({"verify", "--suite", "identities", "--r-grid", "1.5"}).code, kExitUsage);
  EXPECT_EQ(run({"verify", "--suite", "identities", "--grid-density", "1"}).code, kExitUsage);
  EXPECT_EQ(run({"verify", "--suite", "bogus"}).code, kExitUsage);
  EXPECT_EQ(run({"verify"}).code, kExitUsage);
}

TEST(Cli, UsageErrors) {
  EXPECT_EQ(run({}).code, kExitUsage);
  EXPECT_EQ(run({"frobnicate"}).code, kExitUsage);
  EXPECT_EQ(run({"eval", "--fn", "K", "--bogus", "1"}).code, kExitUsage);
  EXPECT_EQ(run({"--help"}).code, kExitOk);
}

TEST(Format, ShortestRoundTrip) {
  for (double v : {0.1, 1.0 / 3.0, 1e-300, 123456789.0, -2.5e17, 5e-324}) {
    EXPECT_EQ(parse_double(format_double(v)), v);
  }
  EXPECT_EQ(format_double(0.8), "0.8");
  EXPECT_EQ(format_double(std::nan("")), "nan");
  EXPECT_EQ(format_double(-INFINITY), "-inf");
  EXPECT_THROW(parse_double("1.5x"), std::exception);
  EXPECT_THROW(parse_double(""), std::exception);
}
