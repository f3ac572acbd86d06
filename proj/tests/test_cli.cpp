#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "perclab/cli.hpp"

namespace perclab {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int code = run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return std::string(std::istreambuf_iterator<char>(in), {});
}

std::size_t lines(const std::string& s) { return static_cast<std::size_t>(std::count(s.begin(), s.end(), '\n')); }

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() / ("perclab_cli_" + std::to_string(::getpid()) + "_" +
                                        ::testing::UnitTest::GetInstance()->current_test_info()->name());
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }
  std::string path(const std::string& name) const { return (dir_ / name).string(); }

  fs::path dir_;
};

TEST_F(CliTest, CurveWritesRowsAndManifest) {
  const auto r = run({"curve", "--n", "12", "--kappa", "0", "--p-grid", "0.001:0.01:10", "--trials", "500", "--seed",
                      "7", "--out", path("c.csv")});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto csv = slurp(path("c.csv"));
  EXPECT_EQ(lines(csv), 11u);
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "p,trials,empty_hits,theta_hat,ci_lo,ci_hi");
  const auto manifest = json::parse(slurp(path("c.csv.manifest.json")));
  EXPECT_EQ(manifest.at("schema"), 1);
  EXPECT_EQ(manifest.at("command"), "curve");
  EXPECT_EQ(manifest.at("config").at("seed"), 7);
  EXPECT_EQ(manifest.at("exit_status"), 0);
  EXPECT_TRUE(manifest.contains("build"));
  EXPECT_FALSE(manifest.contains("wall_time_s"));
  EXPECT_FALSE(fs::exists(path("c.csv.tmp")));
}

TEST_F(CliTest, ThresholdSingleCoordinate) {
  const auto r = run({"threshold", "--n", "1", "--kappa", "0", "--theta", "0.25", "--trials", "20000", "--seed", "1",
                      "--format", "json"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = json::parse(r.out);
  EXPECT_NEAR(j.at("rows")[0].at("p_hat").get<double>(), 0.5, 0.02);
}

TEST_F(CliTest, MrCheckGapInJson) {
  const auto r = run({"mr-check", "--n", "2", "--p", "0.5", "--dp", "0.001", "--format", "json"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_LE(json::parse(r.out).at("summary").at("gap").get<double>(), 1e-5);
}

TEST_F(CliTest, UsageErrorsExitTwo) {
  EXPECT_EQ(run({"curve", "--n", "4", "--p-grid", "0:0.1:3", "--trials", "5", "--seed", "1", "--bogus"}).code, 2);
  EXPECT_EQ(run({"curve", "--n", "4", "--p-grid", "0:0.1:3", "--trials", "5"}).code, 2);  // no seed
  EXPECT_EQ(run({"curve", "--n", "40", "--p-grid", "0:0.1:3", "--seed", "1"}).code, 2);
  EXPECT_EQ(run({"curve", "--n", "4", "--p-grid", "0:0.6:3", "--seed", "1"}).code, 2);
  EXPECT_EQ(run({"threshold", "--n", "4", "--theta", "1.5", "--seed", "1"}).code, 2);
  EXPECT_EQ(run({"mr-check", "--n", "5", "--p", "0.5"}).code, 2);
  EXPECT_EQ(run({"influence", "--n", "8", "--p", "0.1"}).code, 2);  // MC needs a seed
  EXPECT_EQ(run({"nonsense"}).code, 2);
  const auto bad = run({"curve", "--n", "4", "--p-grid", "0:0.1:3", "--seed", "1", "--out", path("missing/x.csv")});
  EXPECT_EQ(bad.code, 2);
  EXPECT_NE(bad.err.find("does not exist"), std::string::npos);
  EXPECT_EQ(lines(bad.err), 1u);
}

TEST_F(CliTest, RuntimeFailureLeavesNoOutput) {
  // At p = 1 every sampled intersection is empty, so A cannot be formed.
  const auto r = run({"removal", "--n", "6", "--p", "1", "--seed", "1", "--out", path("r.csv")});
  EXPECT_EQ(r.code, 1);
  EXPECT_FALSE(fs::exists(path("r.csv")));
  EXPECT_FALSE(fs::exists(path("r.csv.manifest.json")));
  EXPECT_FALSE(fs::exists(path("r.csv.tmp")));
}

TEST_F(CliTest, ByteIdenticalAcrossRunsAndThreadCounts) {
  const std::vector<std::vector<std::string>> commands = {
      {"curve", "--n", "10", "--p-grid", "0.002:1.5:8", "--geometric", "--trials", "300", "--seed", "3"},
      {"sharpness", "--n", "9", "--eps", "0.1", "--trials", "300", "--seed", "3"},
      {"influence", "--n", "7", "--p", "0.03", "--trials", "100", "--seed", "3"},
      {"angle-scan", "--n", "9", "--samples", "5", "--seed", "3"},
      {"boost-search", "--n", "8", "--p", "0.03", "--trials", "100", "--seed", "3"},
      {"removal", "--n", "10", "--p", "0.01", "--trials", "200", "--seed", "3"},
      {"lemma-suite", "--cases", "30", "--seed", "3"},
      {"admissibility", "--n", "256", "--k", "3", "--c2", "0.1,0.5,1", "--samples", "300", "--seed", "3"},
  };
  for (const auto& base : commands) {
    std::string first_out, first_manifest;
    int i = 0;
    for (const char* threads : {"1", "3", "1"}) {
      auto args = base;
      const auto out = path(base[0] + std::to_string(i++) + ".out");
      args.insert(args.end(), {"--threads", threads, "--out", out});
      ASSERT_EQ(run(args).code, 0) << base[0];
      const auto body = slurp(out);
      auto manifest = json::parse(slurp(out + ".manifest.json"));
      manifest.erase("output");
      if (first_out.empty()) {
        first_out = body;
        first_manifest = manifest.dump();
      } else {
        EXPECT_EQ(body, first_out) << base[0];
        EXPECT_EQ(manifest.dump(), first_manifest) << base[0];
      }
    }
  }
}

TEST_F(CliTest, LemmaSuitePassesAndMutantFails) {
  const auto ok = run({"lemma-suite", "--seed", "1", "--cases", "200"});
  EXPECT_EQ(ok.code, 0) << ok.err;
  EXPECT_EQ(ok.out.find("FAIL"), std::string::npos);
#ifdef PERCLAB_TEST_HOOKS
  for (const char* m : {"sign-switch", "decode", "witness", "gentle"}) {
    const auto bad = run({"lemma-suite", "--seed", "1", "--cases", "50", "--self-test-mutate", m});
    EXPECT_EQ(bad.code, 1) << m;
    EXPECT_NE(bad.out.find("FAIL"), std::string::npos) << m;
  }
  EXPECT_EQ(run({"lemma-suite", "--seed", "1", "--cases", "20", "--self-test-mutate"}).code, 1);
#endif
}

TEST_F(CliTest, TomlConfigWithFlagOverride) {
  {
    std::ofstream cfg(path("run.toml"));
    cfg << "[threshold]\nn = 1\ntheta = 0.25\ntrials = 4000\nseed = 9\n\n[curve]\nn = 3\n";
  }
  const auto from_file = run({"--config", path("run.toml"), "threshold", "--format", "json"});
  ASSERT_EQ(from_file.code, 0) << from_file.err;
  const auto j = json::parse(from_file.out).at("rows")[0];
  EXPECT_EQ(j.at("theta"), 0.25);
  EXPECT_EQ(j.at("trials_per_eval"), 4000);
  EXPECT_NEAR(j.at("alpha_hat").get<double>(), 0.5 * 2, 0.1);  // n = 1 from the threshold section

  const auto overridden = run({"--config", path("run.toml"), "threshold", "--theta", "0.5", "--format", "json"});
  ASSERT_EQ(overridden.code, 0) << overridden.err;
  EXPECT_EQ(json::parse(overridden.out).at("rows")[0].at("theta"), 0.5);
}

TEST_F(CliTest, TimestampsOnlyWhenRequested) {
  ASSERT_EQ(run({"mr-check", "--n", "1", "--p", "0.5", "--timestamps", "--out", path("m.csv")}).code, 0);
  const auto manifest = json::parse(slurp(path("m.csv.manifest.json")));
  EXPECT_TRUE(manifest.contains("started"));
  EXPECT_TRUE(manifest.contains("wall_time_s"));
}

TEST_F(CliTest, SolveInstanceFile) {
  {
    std::ofstream f(path("inst.json"));
    f << R"({"n": 2, "kappa": 0, "active": [3]})";
  }
  const auto r = run({"solve", "--instance", path("inst.json"), "--backend", "graycode"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("false,3,2:0x1,graycode"), std::string::npos) << r.out;
  EXPECT_EQ(run({"solve", "--instance", path("nope.json")}).code, 1);
}

TEST(PGrid, LinearAndGeometric) {
  EXPECT_EQ(parse_p_grid("0.1:0.2:3", false), (std::vector<double>{0.1, 0.1 + 0.2, 0.1 + 2 * 0.2}));
  EXPECT_EQ(parse_p_grid("0.01:2:3", true), (std::vector<double>{0.01, 0.02, 0.04}));
  EXPECT_THROW(parse_p_grid("0.1:0.2", false), std::invalid_argument);
  EXPECT_THROW(parse_p_grid("0.1:x:2", false), std::invalid_argument);
  EXPECT_THROW(parse_p_grid("0.1:0.2:0", false), std::invalid_argument);
}

}  // namespace
}  // namespace perclab
