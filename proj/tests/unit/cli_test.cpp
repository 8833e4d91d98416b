#include <gtest/gtest.h>

#include <sys/wait.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "nbattack/cli.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace nbattack::cli {
namespace {

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("nbattack_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  fs::path write_config(const json& doc, const std::string& name = "config.json") {
    const fs::path p = dir_ / name;
    std::ofstream(p) << doc.dump();
    return p;
  }

  int run_tool(const std::string& args) {
    const std::string cmd = std::string(NBATTACK_TOOL) + " " + args + " >" + (dir_ / "stdout.txt").string() + " 2>" +
                            (dir_ / "stderr.txt").string();
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  }

  static json read_json(const fs::path& p) {
    std::ifstream is(p);
    return json::parse(is);
  }

  static std::string read_text(const fs::path& p) {
    std::ifstream is(p, std::ios::binary);
    std::ostringstream os;
    os << is.rdbuf();
    return os.str();
  }

  fs::path dir_;
};

json circle_config(int n, std::uint64_t samples) {
  return {{"family", {{"kind", "circle"}, {"n", n}}},
          {"chain", {{"p", 0.5}, {"seed", 7}, {"replicas", 2}, {"samples", samples}}}};
}

ErrorCode parse_code(const json& doc) {
  try {
    parse_run_config(doc);
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "expected rejection of " << doc.dump();
  return ErrorCode::io_failure;
}

TEST_F(CliTest, ConfigDefaults) {
  const RunConfig cfg = parse_run_config(circle_config(8, 100));
  EXPECT_EQ(cfg.family.kind, Family::circle);
  EXPECT_EQ(cfg.cap, 16);
  EXPECT_TRUE(cfg.stein);
  const ChainConfig c = cfg.chain_for(8);
  EXPECT_EQ(c.thinning, 8u);
  EXPECT_EQ(c.burn_in_steps, default_burn_in(8));
  // Echo and re-parse.
  const RunConfig again = parse_run_config(cfg.to_json());
  EXPECT_EQ(again.to_json(), cfg.to_json());
}

TEST_F(CliTest, ConfigRejections) {
  json bad = circle_config(8, 10);
  bad["colour"] = "red";
  EXPECT_EQ(parse_code(bad), ErrorCode::config_invalid);
  bad = circle_config(8, 10);
  bad["chain"]["p"] = 1.5;
  EXPECT_EQ(parse_code(bad), ErrorCode::config_invalid);
  bad = circle_config(8, 10);
  bad["chain"]["p"] = 0.3;  // Stein on by default
  EXPECT_EQ(parse_code(bad), ErrorCode::config_invalid);
  bad["modes"] = {{"stein", false}, {"distances", false}};
  EXPECT_NO_THROW(parse_run_config(bad));
  bad = circle_config(8, 10);
  bad["chain"]["samples"] = -3;
  EXPECT_EQ(parse_code(bad), ErrorCode::config_invalid);
  bad = circle_config(8, 10);
  bad["family"] = {{"kind", "hypercube"}, {"n", 3}};
  EXPECT_EQ(parse_code(bad), ErrorCode::config_invalid);
  bad["family"] = {{"kind", "moebius"}, {"n", 3}};
  EXPECT_EQ(parse_code(bad), ErrorCode::config_invalid);
  bad["family"] = {{"kind", "circulant"}, {"n", 9}};
  EXPECT_EQ(parse_code(bad), ErrorCode::config_invalid);
  bad = circle_config(8, 10);
  bad["cap"] = 21;
  EXPECT_EQ(parse_code(bad), ErrorCode::config_invalid);
  bad = circle_config(8, 10);
  bad["modes"] = {{"exact", "yes"}};
  EXPECT_EQ(parse_code(bad), ErrorCode::config_invalid);
}

TEST_F(CliTest, ExitCodes) {
  EXPECT_EQ(exit_code_for(ErrorCode::config_invalid), 2);
  EXPECT_EQ(exit_code_for(ErrorCode::invalid_params), 2);
  EXPECT_EQ(exit_code_for(ErrorCode::state_space_too_large), 3);
  EXPECT_EQ(exit_code_for(ErrorCode::convergence_failure), 4);
  EXPECT_EQ(exit_code_for(ErrorCode::multiple_closed_classes), 4);
}

TEST_F(CliTest, FormatDoubleRoundTrips) {
  for (double v : {0.1, 1.0 / 3.0, -2.5e-300, 123456789.0}) EXPECT_EQ(std::stod(format_double(v)), v);
  EXPECT_EQ(format_double(0.5), "0.5");
}

TEST_F(CliTest, Sha256KnownVector) {
  std::ofstream(dir_ / "abc.txt", std::ios::binary) << "abc";
  EXPECT_EQ(sha256_file(dir_ / "abc.txt"), "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

TEST_F(CliTest, SimulateWritesOutputsAndIsDeterministic) {
  json cfg = circle_config(8, 2000);
  cfg["modes"] = {{"exact", true}};
  const fs::path config = write_config(cfg);
  ASSERT_EQ(run_tool("simulate --config " + config.string() + " --out " + (dir_ / "a").string()), 0);
  ASSERT_EQ(run_tool("simulate --config " + config.string() + " --out " + (dir_ / "b").string()), 0);
  const json ma = read_json(dir_ / "a" / "manifest.json");
  const json mb = read_json(dir_ / "b" / "manifest.json");
  EXPECT_EQ(ma["outputs"], mb["outputs"]);
  EXPECT_EQ(ma["outputs"].size(), 2u);

  const std::string csv = read_text(dir_ / "a" / "samples.csv");
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "replica,sample_index,Y,W,eta,theta,m2");
  EXPECT_EQ(csv.find('\r'), std::string::npos);
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 4001);

  const json summary = read_json(dir_ / "a" / "summary.json");
  EXPECT_EQ(summary["N"], 8);
  EXPECT_EQ(summary["r_star"], 4);
  EXPECT_TRUE(summary["exact"]["sigma2_in_bracket"].get<bool>());
  EXPECT_EQ(summary["stein"]["sigma2"]["source"], "exact");
  EXPECT_TRUE(summary.contains("crosscheck"));
  EXPECT_TRUE(summary.contains("distances"));

  // A different seed changes the samples.
  ASSERT_EQ(run_tool("simulate --config " + config.string() + " --seed 8 --out " + (dir_ / "c").string()), 0);
  EXPECT_NE(read_json(dir_ / "c" / "manifest.json")["outputs"], ma["outputs"]);
  EXPECT_EQ(read_json(dir_ / "c" / "manifest.json")["seed"], 8);
}

TEST_F(CliTest, SimulateZeroSamplesIsConfigError) {
  const fs::path config = write_config(circle_config(8, 0));
  EXPECT_EQ(run_tool("simulate --config " + config.string() + " --out " + (dir_ / "o").string()), 2);
}

TEST_F(CliTest, ExactCompleteFour) {
  json cfg = {{"family", {{"kind", "complete"}, {"n", 4}}}, {"modes", {{"dump_pi", true}}}};
  const fs::path config = write_config(cfg);
  ASSERT_EQ(run_tool("exact --config " + config.string() + " --out " + (dir_ / "e").string()), 0);
  const json doc = read_json(dir_ / "e" / "exact.json");
  EXPECT_NEAR(doc["exact"]["var_y"].get<double>(), 16.0, 1e-10);
  EXPECT_LT(doc["exact"]["linearity"]["max_abs_deviation"].get<double>(), 1e-12);
  EXPECT_EQ(read_text(dir_ / "e" / "pi.csv").substr(0, 17), "state,probability");
}

TEST_F(CliTest, ExactCircleSevenRecordsFkgViolations) {
  json cfg = {{"family", {{"kind", "circle"}, {"n", 7}}}, {"modes", {{"fkg", true}}}, {"fkg_limit", 5}};
  ASSERT_EQ(run_tool("exact --config " + write_config(cfg).string() + " --out " + (dir_ / "e").string()), 0);
  const json fkg = read_json(dir_ / "e" / "exact.json")["fkg"];
  EXPECT_GT(fkg["violations_found"].get<int>(), 0);
  EXPECT_EQ(fkg["violations"].size(), 5u);
}

TEST_F(CliTest, ExactCapExceeded) {
  const fs::path config = write_config({{"family", {{"kind", "circle"}, {"n", 18}}}});
  EXPECT_EQ(run_tool("exact --config " + config.string() + " --out " + (dir_ / "x").string()), 3);
  EXPECT_EQ(run_tool("exact --config " + config.string() + " --cap 25 --out " + (dir_ / "x").string()), 3);
}

TEST_F(CliTest, MalformedInputs) {
  std::ofstream(dir_ / "broken.json") << "{ not json";
  EXPECT_EQ(run_tool("bound --config " + (dir_ / "broken.json").string()), 2);
  EXPECT_EQ(run_tool("bound --config " + (dir_ / "missing.json").string()), 2);
  EXPECT_EQ(run_tool("frobnicate"), 2);
  const fs::path disconnected = write_config({{"family", {{"kind", "circulant"}, {"n", 12}, {"offsets", {2, 4}}}}});
  EXPECT_EQ(run_tool("bound --config " + disconnected.string() + " --out " + (dir_ / "d").string()), 2);
}

TEST_F(CliTest, BoundDefaultsToAnalyticInputs) {
  const fs::path config = write_config({{"family", {{"kind", "circle"}, {"n", 1000000}}}});
  ASSERT_EQ(run_tool("bound --config " + config.string() + " --out " + (dir_ / "b").string()), 0);
  const json s = read_json(dir_ / "b" / "bound.json")["stein"];
  EXPECT_NEAR(s["theorem_delta_rstar"].get<double>(), 1.448128, 1e-5);
  EXPECT_EQ(s["sigma2"]["source"], "analytic-bound");
}

TEST_F(CliTest, SweepRows) {
  json cfg = {{"family", {{"kind", "hypercube"}, {"dim", 3}}},
              {"modes", {{"distances", false}}},
              {"sweep", {{"sizes", {3, 4, 5, 6, 7, 8, 9, 10, 11, 12, 13, 14}}}}};
  ASSERT_EQ(run_tool("sweep --config " + write_config(cfg).string() + " --out " + (dir_ / "s").string()), 0);
  std::istringstream csv(read_text(dir_ / "s" / "sweep.csv"));
  std::string line;
  std::getline(csv, line);
  EXPECT_EQ(line.rfind("kind,size,N,r,r_star,", 0), 0u);
  int d = 3;
  while (std::getline(csv, line)) {
    std::vector<std::string> cells;
    std::stringstream ss(line);
    for (std::string cell; std::getline(ss, cell, ',');) cells.push_back(cell);
    ASSERT_GE(cells.size(), 5u);
    EXPECT_EQ(std::stoi(cells[2]), 1 << d);
    EXPECT_EQ(std::stoi(cells[4]), d + d * (d - 1) / 2);
    ++d;
  }
  EXPECT_EQ(d, 15);
}

TEST_F(CliTest, SweepCircleDecreasing) {
  json cfg = {{"family", {{"kind", "circle"}, {"n", 3}}},
              {"modes", {{"distances", false}}},
              {"sweep", {{"sizes", {100, 1000, 10000, 100000, 1000000}}}}};
  ASSERT_EQ(run_tool("sweep --config " + write_config(cfg).string() + " --out " + (dir_ / "s").string()), 0);
  std::istringstream csv(read_text(dir_ / "s" / "sweep.csv"));
  std::string line;
  std::getline(csv, line);
  double prev = INFINITY;
  while (std::getline(csv, line)) {
    std::vector<std::string> cells;
    std::stringstream ss(line);
    for (std::string cell; std::getline(ss, cell, ',');) cells.push_back(cell);
    const double v = std::stod(cells[8]);
    EXPECT_LT(v, prev);
    prev = v;
  }
}

}  // namespace
}  // namespace nbattack::cli
