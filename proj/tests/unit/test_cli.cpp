#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "cascade_vqa/cli.hpp"
#include "cascade_vqa/imaging.hpp"
#include "cascade_vqa/qsim.hpp"

namespace fs = std::filesystem;
using cvqa::cli::ExitCode;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result invoke(std::vector<std::string> args) {
  args.insert(args.begin(), "cascade_vqa");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out;
  std::ostringstream err;
  const int code = cvqa::cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("cvqa_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }
  std::string path(const std::string& name) const { return (dir_ / name).string(); }

  std::string small_campaign() {
    const auto out = path("camp");
    const auto r = invoke({"campaign", "--qubits", "6", "--runs", "2", "--max-evals", "100", "--seed",
                           "4", "-o", out});
    EXPECT_EQ(r.code, 0) << r.err;
    return out;
  }

  fs::path dir_;
};

nlohmann::json read_json(const std::string& p) {
  std::ifstream in(p);
  return nlohmann::json::parse(in);
}

}  // namespace

TEST_F(CliTest, SolveWritesSolution) {
  const auto r = invoke({"solve", "--qubits", "6", "-o", path("s"), "--mtx"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("E_ref -8.78020562771"), std::string::npos);
  EXPECT_NE(r.out.find("(ok)"), std::string::npos);
  const auto j = read_json(path("s/solution.json"));
  EXPECT_NEAR(j["e_ref"].get<double>(), -8.78020562770563, 1e-11);
  EXPECT_EQ(j["nodes_per_axis"], 4);
  EXPECT_EQ(cvqa::qsim::load_statevector(path("s/u_ref.bin")).qubits(), 6);
  EXPECT_TRUE(fs::exists(path("s/stiffness.mtx")));
  EXPECT_TRUE(fs::exists(path("s/load.mtx")));
}

TEST_F(CliTest, BadQubitsIsConfigError) {
  const auto r = invoke({"campaign", "--qubits", "7", "-o", path("x")});
  EXPECT_EQ(r.code, static_cast<int>(ExitCode::kConfigError));
  EXPECT_NE(r.err.find("grid.qubits: qubits must be divisible by 3"), std::string::npos);
}

TEST_F(CliTest, MissingStateIsInputError) {
  const auto r = invoke({"metrics", "--state", path("nope.bin")});
  EXPECT_EQ(r.code, static_cast<int>(ExitCode::kInputMissing));
}

TEST_F(CliTest, UnwritableOutputIsOutputError) {
  std::ofstream(path("file")) << "x";
  const auto r = invoke({"solve", "--qubits", "6", "-o", path("file") + "/sub"});
  EXPECT_EQ(r.code, static_cast<int>(ExitCode::kOutputError));
}

TEST_F(CliTest, UsageErrors) {
  EXPECT_EQ(invoke({}).code, static_cast<int>(ExitCode::kUsage));
  EXPECT_EQ(invoke({"bogus"}).code, static_cast<int>(ExitCode::kUsage));
  EXPECT_EQ(invoke({"campaign", "--runs", "many"}).code, static_cast<int>(ExitCode::kUsage));
  EXPECT_EQ(invoke({"cascade", "--qubits", "9", "-o", path("c")}).code, static_cast<int>(ExitCode::kUsage));
  EXPECT_EQ(invoke({"--help"}).code, 0);
}

TEST_F(CliTest, ConfigFileAndMissingOutput) {
  std::ofstream(path("cfg.json")) << R"({"grid": {"qubits": 6}, "ansatz": {"family": "RyCnot"},
    "runs": 1, "optimizer": {"max_evals": 80}})";
  const auto missing = invoke({"campaign", "-c", path("cfg.json")});
  EXPECT_EQ(missing.code, static_cast<int>(ExitCode::kConfigError));
  EXPECT_NE(missing.err.find("output"), std::string::npos);
  const auto r = invoke({"campaign", "-c", path("cfg.json"), "-o", path("out")});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto run = read_json(path("out/runs/run_000.json"));
  EXPECT_EQ(run["ansatz"]["family"], "RyCnot");
  EXPECT_EQ(run["result"]["evals_used"], 80);
  std::ofstream(path("bad.json")) << "{not json";
  EXPECT_EQ(invoke({"campaign", "-c", path("bad.json"), "-o", path("o2")}).code,
            static_cast<int>(ExitCode::kConfigError));
}

TEST_F(CliTest, CampaignLayoutAndCascade) {
  const auto camp = small_campaign();
  for (const char* f : {"config.json", "summary.json", "summary.txt", "timing.json", "best_state.bin",
                        "runs/run_000.json", "runs/run_001.json"}) {
    EXPECT_TRUE(fs::exists(fs::path(camp) / f)) << f;
  }
  const auto summary = read_json(camp + "/summary.json");
  EXPECT_EQ(summary["summary"]["runs"], 2);
  EXPECT_FALSE(read_json(camp + "/config.json").contains("jobs"));

  const auto gated = invoke({"cascade", "--qubits", "9", "--source", camp, "--max-evals", "230", "-o",
                             path("fine"), "--min-source-accuracy", "99.9"});
  EXPECT_EQ(gated.code, static_cast<int>(ExitCode::kConfigError));
  const auto r = invoke({"cascade", "--qubits", "9", "--source", camp, "--max-evals", "230", "-o",
                         path("fine"), "--min-source-accuracy", "0"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("6 to 9"), std::string::npos);
  const auto rec = read_json(path("fine/runs/run_000.json"));
  EXPECT_EQ(rec["strategy"], "cascade");
  EXPECT_EQ(rec["source"]["grid"]["qubits"], 6);
}

TEST_F(CliTest, SamplePrintsFourEntryTable) {
  const auto camp = small_campaign();
  const auto r = invoke({"sample", "--campaign", camp, "--shots", "5000", "--seed", "2", "-o", path("smp")});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("stoch/solution"), std::string::npos);
  EXPECT_NE(r.out.find("stoch/simulation"), std::string::npos);
  EXPECT_NE(r.out.find("Energy (%)"), std::string::npos);
  EXPECT_NE(r.out.find("Fidelity (%)"), std::string::npos);
  const auto shots = read_json(path("smp/shots.json"));
  EXPECT_EQ(shots["shots"], 5000);
  const auto again = invoke({"sample", "--campaign", camp, "--shots", "5000", "--seed", "2"});
  EXPECT_EQ(again.out, r.out);
  EXPECT_EQ(invoke({"sample", "--campaign", camp, "--shots", "0"}).code,
            static_cast<int>(ExitCode::kConfigError));
}

TEST_F(CliTest, MetricsMatchesRunRecord) {
  const auto camp = small_campaign();
  const auto r = invoke({"metrics", "--campaign", camp});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto m = nlohmann::json::parse(r.out);
  const auto summary = read_json(camp + "/summary.json");
  EXPECT_NEAR(m["energy_accuracy"].get<double>(), summary["summary"]["max_energy"].get<double>(), 1e-9);
}

TEST_F(CliTest, SliceCsvAndPgm) {
  const auto camp = small_campaign();
  const auto csv = invoke({"slice", "--campaign", camp, "--axis", "y", "--layer", "1", "-o", path("y.csv")});
  ASSERT_EQ(csv.code, 0) << csv.err;
  std::ifstream in(path("y.csv"));
  const auto rows = cvqa::imaging::read_csv(in);
  ASSERT_EQ(rows.size(), 4U);
  EXPECT_EQ(rows[0].size(), 4U);
  EXPECT_NE(csv.out.find("correlation with classical slice"), std::string::npos);

  const auto pgm = invoke({"slice", "--campaign", camp, "--format", "pgm", "--upsample", "4", "-o",
                           path("z.pgm")});
  ASSERT_EQ(pgm.code, 0) << pgm.err;
  std::ifstream p(path("z.pgm"), std::ios::binary);
  std::string magic;
  int w = 0;
  int h = 0;
  p >> magic >> w >> h;
  EXPECT_EQ(magic, "P5");
  EXPECT_EQ(w, 16);
  EXPECT_EQ(h, 16);

  std::ofstream(path("grid.json")) << R"({"grid": {"qubits": 9}})";
  const auto classical = invoke({"slice", "--classical", "-c", path("grid.json"), "-o", path("c.csv")});
  ASSERT_EQ(classical.code, 0) << classical.err;
  std::ifstream cin(path("c.csv"));
  EXPECT_EQ(cvqa::imaging::read_csv(cin).size(), 8U);
  EXPECT_EQ(invoke({"slice", "--campaign", camp, "--layer", "9", "-o", path("bad.csv")}).code,
            static_cast<int>(ExitCode::kConfigError));
}
