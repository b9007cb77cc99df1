#include "hypoheat/cli/cli.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include <gtest/gtest.h>
#include <json.hpp>

#include "hypoheat/cli/system_io.hpp"
#include "hypoheat/error.hpp"

namespace hypoheat::cli {
namespace {

using nlohmann::json;

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result call(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = run(args, out, err);
  return {code, out.str(), err.str()};
}

std::string write_file(const std::string& name, const std::string& text) {
  const auto path = std::filesystem::path(::testing::TempDir()) / name;
  std::ofstream(path) << text;
  return path.string();
}

const std::string& di_file() {
  static const std::string path = write_file("di.json", R"({"A": [[0, 0], [1, 0]], "B": [[1], [0]]})");
  return path;
}

const std::string& ou_file() {
  static const std::string path = write_file("ou.json", R"({"A": [[1]], "B": [[1]]})");
  return path;
}

GTEST_TEST(SystemIo, ParsesAndRejects) {
  const auto sys = parse_system(R"({"A": [[0, 0], [1, 0]], "B": [[1], [0]], "alpha": [0, 2]})");
  EXPECT_EQ(sys.n(), 2);
  EXPECT_EQ(sys.alpha()(1), 2.0);
  const auto kind_of = [](const char* text) {
    try {
      parse_system(text);
    } catch (const Error& e) {
      return e.kind();
    }
    return ErrorKind::InvalidConfig;
  };
  EXPECT_EQ(kind_of("{"), ErrorKind::ParseError);
  EXPECT_EQ(kind_of(R"({"A": [[1]]})"), ErrorKind::ParseError);
  EXPECT_EQ(kind_of(R"({"A": [[1, 2]], "B": [[1]]})"), ErrorKind::DimensionMismatch);
  EXPECT_EQ(kind_of(R"({"A": [["x"]], "B": [[1]]})"), ErrorKind::ParseError);
  EXPECT_EQ(kind_of(R"({"A": [[1, 0], [0, 1]], "B": [[1], [1]]})"), ErrorKind::NotControllable);
  EXPECT_EQ(kind_of(R"({"A": [[1, 0], [0, 1]], "B": [[1]]})"), ErrorKind::DimensionMismatch);

  const auto p = parse_point("1,-0.5, 2e-3");
  ASSERT_EQ(p.size(), 3);
  EXPECT_EQ(p(2), 2e-3);
  EXPECT_THROW(parse_point("1,,2"), Error);
  EXPECT_THROW(parse_point("abc"), Error);
}

GTEST_TEST(Cli, AnalyzeDoubleIntegrator) {
  const auto r = call({"analyze", di_file(), "--point", "1,0", "--point", "0,0"});
  ASSERT_EQ(r.code, kExitPass) << r.err;
  const json j = json::parse(r.out);
  EXPECT_EQ(j["status"], "PASS");
  EXPECT_EQ(j["filtration"]["N"], 4);
  EXPECT_NEAR(j["c0"].get<double>(), 1.0 / 12, 1e-12);
  EXPECT_NEAR(j["curvature"]["I"][0][0].get<double>(), 4.0, 1e-9);
  EXPECT_EQ(j["points"][0]["level"], 2);
  EXPECT_NEAR(j["points"][0]["C"].get<double>(), 6.0, 1e-6);
  EXPECT_EQ(j["points"][1]["regime"], "equilibrium");
}

GTEST_TEST(Cli, AnalyzeScalar) {
  const auto r = call({"analyze", ou_file(), "--point=1"});
  ASSERT_EQ(r.code, kExitPass) << r.err;
  const json j = json::parse(r.out);
  EXPECT_NEAR(j["a"][1].get<double>(), -0.5, 1e-9);
  EXPECT_NEAR(j["a"][2].get<double>(), 1.0 / 24, 1e-9);
  EXPECT_NEAR(j["a"][3].get<double>(), 1.0 / 48, 1e-9);
  EXPECT_NEAR(j["points"][0]["first_order"].get<double>(), 1.0, 1e-9);
}

GTEST_TEST(Cli, JsonIsStable) {
  const auto a = call({"analyze", di_file(), "--point", "1,0"});
  const auto b = call({"analyze", di_file(), "--point", "1,0"});
  EXPECT_EQ(a.out, b.out);
  EXPECT_EQ(json::parse(a.out).dump(2) + "\n", a.out);
}

GTEST_TEST(Cli, TextAndCsvFormats) {
  const auto text = call({"analyze", di_file(), "--format", "text"});
  ASSERT_EQ(text.code, kExitPass);
  EXPECT_NE(text.out.find("status = PASS"), std::string::npos) << text.out;
  const auto csv = call({"analyze", di_file(), "--format", "csv"});
  ASSERT_EQ(csv.code, kExitPass);
  EXPECT_EQ(csv.out.rfind("name,residual,tolerance,status\n", 0), 0u) << csv.out;
  EXPECT_EQ(call({"analyze", di_file(), "--format", "yaml"}).code, kExitUsage);
}

GTEST_TEST(Cli, ToleranceOverride) {
  // Rounding leaves a nonzero trace residual, so a zero tolerance fails.
  const auto r = call({"analyze", di_file(), "--tol", "trace_I=0"});
  EXPECT_EQ(r.code, kExitFail);
  EXPECT_EQ(json::parse(r.out)["status"], "FAIL");
  EXPECT_EQ(call({"analyze", di_file(), "--tol", "trace_I=-1"}).code, kExitUsage);
  EXPECT_EQ(call({"analyze", di_file(), "--tol", "nonsense=1"}).code, kExitUsage);
}

GTEST_TEST(Cli, Kernel) {
  const auto r = call({"kernel", di_file(), "--t", "1", "--x", "0,0", "--y", "0,0"});
  ASSERT_EQ(r.code, kExitPass) << r.err;
  const json j = json::parse(r.out);
  EXPECT_NEAR(j["density"].get<double>(), std::sqrt(3.0) / std::numbers::pi, 1e-12);
  EXPECT_NEAR(j["det_D"].get<double>(), 1.0 / 12, 1e-14);
  EXPECT_NEAR(j["S"].get<double>(), 0.0, 1e-14);
  EXPECT_EQ(call({"kernel", di_file(), "--t", "0", "--x", "0,0", "--y", "0,0"}).code, kExitUsage);
  EXPECT_EQ(call({"kernel", di_file(), "--t", "1", "--x", "0", "--y", "0,0"}).code, kExitUsage);
}

GTEST_TEST(Cli, Cost) {
  const auto r = call({"cost", di_file(), "--t", "1", "--x", "0,0", "--y", "0,1"});
  ASSERT_EQ(r.code, kExitPass) << r.err;
  EXPECT_NEAR(json::parse(r.out)["S"].get<double>(), 6.0, 1e-10);
}

GTEST_TEST(Cli, CurvatureCheck) {
  const auto r = call({"curvature", di_file(), "--check"});
  ASSERT_EQ(r.code, kExitPass) << r.err;
  const json j = json::parse(r.out);
  EXPECT_EQ(j["status"], "PASS");
  EXPECT_NEAR(j["oracle"]["I"][0][0].get<double>(), 4.0, 1e-4);
}

GTEST_TEST(Cli, SweepResidualSlope) {
  const auto r = call({"sweep", ou_file(), "--point", "0", "--order", "2", "--format", "json"});
  ASSERT_EQ(r.code, kExitPass) << r.err;
  const json j = json::parse(r.out);
  std::vector<double> lt, lr;
  for (const auto& row : j["rows"]) {
    lt.push_back(std::log(row["t"].get<double>()));
    lr.push_back(std::log(std::abs(row["normalized_residual"].get<double>())));
  }
  ASSERT_EQ(lt.size(), 20u);
  double mt = 0, mr = 0;
  for (std::size_t i = 0; i < lt.size(); ++i) {
    mt += lt[i] / lt.size();
    mr += lr[i] / lr.size();
  }
  double num = 0, den = 0;
  for (std::size_t i = 0; i < lt.size(); ++i) {
    num += (lt[i] - mt) * (lr[i] - mr);
    den += (lt[i] - mt) * (lt[i] - mt);
  }
  EXPECT_GE(num / den, 2.9);

  const auto csv = call({"sweep", ou_file(), "--point", "0", "--n", "3"});
  EXPECT_EQ(csv.out.rfind("t,p_exact,p_asym,normalized_residual,S_t\n", 0), 0u);
  EXPECT_EQ(call({"sweep", ou_file(), "--point", "0", "--n", "1"}).code, kExitUsage);
}

GTEST_TEST(Cli, Simulate) {
  const std::string samples = (std::filesystem::path(::testing::TempDir()) / "samples.csv").string();
  const auto r = call({"simulate", di_file(), "--point", "1,0", "--paths", "5000", "--dt", "0.1", "--seed", "4",
                       "--samples-csv", samples});
  ASSERT_EQ(r.code, kExitPass) << r.err;
  const json j = json::parse(r.out);
  EXPECT_EQ(j["status"], "PASS");
  EXPECT_EQ(j["config"]["steps"], 10);
  std::ifstream in(samples);
  std::string line;
  int lines = 0;
  while (std::getline(in, line)) ++lines;
  EXPECT_EQ(lines, 5001);
  EXPECT_EQ(call({"simulate", di_file(), "--point", "1,0", "--paths", "100"}).code, kExitUsage);
  EXPECT_EQ(call({"simulate", di_file(), "--point", "1,0", "--scheme", "rk4"}).code, kExitUsage);
}

GTEST_TEST(Cli, InputErrors) {
  const std::string nc = write_file("nc.json", R"({"A": [[1, 0], [0, 1]], "B": [[1], [1]]})");
  const auto r = call({"analyze", nc});
  EXPECT_EQ(r.code, kExitUsage);
  EXPECT_EQ(r.err.rfind("error: ", 0), 0u);
  EXPECT_EQ(call({"analyze", write_file("bad.json", "[")}).code, kExitUsage);
  EXPECT_EQ(call({"analyze", "/nonexistent/system.json"}).code, kExitUsage);
  EXPECT_EQ(call({}).code, kExitUsage);
  EXPECT_EQ(call({"frobnicate"}).code, kExitUsage);
  EXPECT_EQ(call({"--help"}).code, kExitPass);
}

}  // namespace
}  // namespace hypoheat::cli
