#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "peakheight/cli/commands.hpp"
#include "peakheight/cli/run_config.hpp"
#include "peakheight/cli/selftest.hpp"

using namespace peakheight::cli;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result run(std::vector<std::string> args) {
  args.insert(args.begin(), "peakheight");
  std::vector<char*> argv;
  for (auto& a : args) argv.push_back(a.data());
  std::ostringstream out, err;
  const int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::vector<std::string> lines(const std::string& s) {
  std::vector<std::string> v;
  std::stringstream ss(s);
  for (std::string l; std::getline(ss, l);) v.push_back(l);
  return v;
}

}  // namespace

TEST(Cli, NumberFormatting) {
  EXPECT_EQ(format_number(0.75), "0.75");
  EXPECT_EQ(format_number(0.1), "0.10000000000000001");
  EXPECT_EQ(format_number(-3.0), "-3");
}

TEST(Cli, GridParsing) {
  const auto g = GridSpec::parse("-3:3:0.5");
  EXPECT_EQ(g.points().size(), 13u);
  EXPECT_THROW(GridSpec::parse("3:-3:0.5"), ConfigError);
  EXPECT_THROW(GridSpec::parse("0:1:0"), ConfigError);
  EXPECT_THROW(GridSpec::parse("0:1"), ConfigError);
}

TEST(Cli, EvalProcess1d) {
  const auto r = run({"eval", "--family", "process1d", "--rho", "-0.5", "--grid", "-3:3:0.5"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto l = lines(r.out);
  ASSERT_EQ(l.size(), 14u);
  EXPECT_EQ(l[0], "u,F,h");
  EXPECT_EQ(l[7].substr(0, 7), "0,0.75,");
}

TEST(Cli, EvalCosineOneDimension) {
  const auto r = run({"eval", "--family", "cosine", "--n", "1", "--grid", "0:3:1"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto l = lines(r.out);
  ASSERT_EQ(l.size(), 5u);
  EXPECT_EQ(l[0], "u,F");
  for (int i = 0; i <= 3; ++i) {
    const double f = std::stod(l[static_cast<std::size_t>(i) + 1].substr(l[static_cast<std::size_t>(i) + 1].find(',') + 1));
    EXPECT_NEAR(f, std::exp(-0.5 * i * i), 1e-8);
  }
}

TEST(Cli, EvalAnisoDeterministic) {
  const std::vector<std::string> args{"eval", "--family", "aniso", "--n", "2", "--kappa", "1", "--u", "0",
                                      "--seed", "7", "--samples", "20000"};
  const auto a = run(args);
  const auto b = run(args);
  ASSERT_EQ(a.code, 0) << a.err;
  EXPECT_EQ(a.out, b.out);
  EXPECT_EQ(lines(a.out)[0], "u,F,F_stderr,h,h_stderr");
}

TEST(Cli, JsonOutputHasMetaAndRows) {
  const auto r = run({"eval", "--family", "process1d", "--kappa", "1", "--grid", "0:1:0.5", "--format", "json"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("\"meta\""), std::string::npos);
  EXPECT_NE(r.out.find("\"rows\""), std::string::npos);
  EXPECT_NE(r.out.find("\"versions\""), std::string::npos);
}

TEST(Cli, InvalidParametersNameTheInvariant) {
  auto r = run({"eval", "--family", "process1d", "--rho", "0.5", "--u", "0"});
  EXPECT_EQ(r.code, kExitInvalidArgs);
  EXPECT_NE(r.err.find("-1 < rho < 0"), std::string::npos);
  r = run({"eval", "--family", "planar", "--sigma1-sq", "2", "--sigma2-sq", "2", "--sigma3-sq", "2", "--u", "0"});
  EXPECT_EQ(r.code, kExitInvalidArgs);
  r = run({"eval", "--family", "aniso", "--n", "2", "--kappa", "2", "--u", "0"});
  EXPECT_EQ(r.code, kExitInvalidArgs);
  EXPECT_NE(r.err.find("(N+2)/N"), std::string::npos);
  r = run({"eval", "--family", "nope"});
  EXPECT_EQ(r.code, kExitInvalidArgs);
  r = run({"eval", "--family", "process1d", "--kappa", "1", "--grid", "1:0:0.1"});
  EXPECT_EQ(r.code, kExitInvalidArgs);
}

TEST(Cli, FlagsOverrideJsonConfig) {
  RunConfig cfg;
  apply_json(cfg, R"({"family": "process1d", "rho": -0.9, "grid": "0:1:0.5", "seed": 3})");
  EXPECT_EQ(cfg.family, Family::kProcess1d);
  EXPECT_EQ(*cfg.rho, -0.9);
  EXPECT_EQ(cfg.seed, 3u);
  EXPECT_THROW(apply_json(cfg, R"({"bogus": 1})"), ConfigError);
  EXPECT_THROW(apply_json(cfg, "[1, 2]"), ConfigError);
}

TEST(Cli, AnisoValidateUnsupported) {
  const auto r = run({"validate", "--family", "aniso", "--n", "2", "--kappa", "1"});
  EXPECT_EQ(r.code, kExitInvalidArgs);
}

TEST(Cli, ValidateReportsInsufficientPeaks) {
  const auto r = run({"validate", "--family", "cosine", "--n", "1", "--samples", "50"});
  EXPECT_EQ(r.code, kExitInsufficientPeaks);
  EXPECT_NE(r.out.find("\"n_peaks\""), std::string::npos);
}

TEST(Cli, ValidateCosinePasses) {
  const auto r = run({"validate", "--family", "cosine", "--n", "1"});
  EXPECT_EQ(r.code, kExitOk) << r.out;
  EXPECT_NE(r.out.find("\"pass\": true"), std::string::npos);
}

TEST(Selftest, TamperedConstantFails) {
  std::ostringstream os;
  EXPECT_NE(cmd_selftest(os, true), 0);
  EXPECT_NE(os.str().find("FAIL"), std::string::npos);
}

TEST(Cli, ConfigFileUnderFlags) {
  const auto path = (std::filesystem::temp_directory_path() / "peakheight_cli_config.json").string();
  std::ofstream(path) << R"({"family": "process1d", "rho": -0.9, "u": 0})";
  auto r = run({"eval", "--config", path});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(lines(r.out)[1].substr(0, 5), "0,0.9");
  r = run({"eval", "--config", path, "--rho", "-0.5"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(lines(r.out)[1].substr(0, 7), "0,0.75,");
}
