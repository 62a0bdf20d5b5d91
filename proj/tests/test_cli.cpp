#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <sstream>

#include "parrondo/cli.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using parrondo::cli::run_cli;

namespace {

struct CliResult {
    int code;
    std::string out;
    std::string err;
};

CliResult run(const std::vector<std::string>& args) {
    std::ostringstream out, err;
    const int code = run_cli(args, out, err);
    return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

class CliTest : public ::testing::Test {
protected:
    void SetUp() override {
        const auto* info = ::testing::UnitTest::GetInstance()->current_test_info();
        dir_ = fs::temp_directory_path() / ("parrondo_cli_" + std::string(info->name()));
        fs::remove_all(dir_);
        fs::create_directories(dir_);
    }
    void TearDown() override { fs::remove_all(dir_); }

    std::string path(const std::string& name) const { return (dir_ / name).string(); }

    fs::path dir_;
};

const std::string kFixture = std::string(PARRONDO_FIXTURE_DIR) + "/table2_sawtooth.csv";

}  // namespace

TEST_F(CliTest, NoSubcommandIsUsageError) {
    EXPECT_EQ(run({}).code, parrondo::cli::kExitUsage);
    EXPECT_EQ(run({"frobnicate"}).code, parrondo::cli::kExitUsage);
}

TEST_F(CliTest, HelpSucceeds) {
    const auto r = run({"--help"});
    EXPECT_EQ(r.code, 0);
    EXPECT_NE((r.out + r.err).find("simulate"), std::string::npos);
}

TEST_F(CliTest, GamesRejectsEpsilonOutOfRange) {
    EXPECT_EQ(run({"games", "--epsilon", "0.2"}).code, parrondo::cli::kExitUsage);
    EXPECT_EQ(run({"games", "--epsilon", "-0.01"}).code, parrondo::cli::kExitUsage);
    EXPECT_EQ(run({"games", "--rounds", "0"}).code, parrondo::cli::kExitUsage);
}

TEST_F(CliTest, GamesJsonReport) {
    const auto r = run({"games", "--rounds", "20000", "--reps", "4", "--json", "--out", path("g")});
    ASSERT_EQ(r.code, 0) << r.err;
    const auto doc = json::parse(r.out);
    ASSERT_EQ(doc["games"].size(), 3u);
    EXPECT_EQ(doc["games"][0]["game"], "A");
    EXPECT_NEAR(doc["games"][0]["analytic_drift"].get<double>(), -0.01, 1e-12);
    EXPECT_NEAR(doc["games"][2]["analytic_drift"].get<double>(), 0.015704225352112675, 1e-12);
    EXPECT_EQ(doc["config"]["epsilon"], 0.005);
    EXPECT_TRUE(fs::exists(path("g/games.json")));
    const auto manifest = json::parse(slurp(path("g/run_manifest.json")));
    EXPECT_EQ(manifest["command"], "games");
    EXPECT_EQ(manifest["outputs"]["games.json"],
              "sha256:" + std::string(manifest["outputs"]["games.json"]).substr(7));
}

TEST_F(CliTest, GamesFairBIsZeroDrift) {
    const auto r = run({"games", "--epsilon", "0", "--rounds", "1000", "--reps", "2", "--json"});
    ASSERT_EQ(r.code, 0) << r.err;
    const auto doc = json::parse(r.out);
    EXPECT_NEAR(doc["games"][1]["analytic_drift"].get<double>(), 0.0, 1e-14);
    EXPECT_NEAR(doc["games"][2]["analytic_drift"].get<double>(), 18.0 / 709.0, 1e-14);
}

TEST_F(CliTest, GamesTextReportsVerdicts) {
    const auto r = run({"games", "--rounds", "5000", "--reps", "3"});
    ASSERT_EQ(r.code, 0);
    EXPECT_NE(r.out.find("paradox:"), std::string::npos);
    EXPECT_NE(r.out.find("oracle agreement:"), std::string::npos);
}

TEST_F(CliTest, SimulateBuyAndHold) {
    const auto r = run({"simulate", "--data", kFixture, "--strategies", "bah", "--reps", "1",
                        "--json", "--out", path("bah")});
    ASSERT_EQ(r.code, 0) << r.err;
    const auto doc = json::parse(r.out);
    ASSERT_EQ(doc.size(), 1u);
    EXPECT_NEAR(doc[0]["mean_final"].get<double>(), 52196.0, 1e-6);

    const std::string summary = slurp(path("bah/summary.csv"));
    EXPECT_EQ(summary.rfind("strategy,hint_prob,mean_final,std_final,stderr\nbah,,", 0), 0u);
    const std::string traj = slurp(path("bah/trajectories.csv"));
    EXPECT_EQ(traj.rfind("strategy,day,mean_value\nbah,0,100000", 0), 0u);
    EXPECT_FALSE(fs::exists(path("bah/single_run.csv")));
}

TEST_F(CliTest, SimulateInsiderLevelsAreOrdered) {
    const auto r = run({"simulate", "--fixture", "table2", "--strategies", "insider", "--reps", "100",
                        "--json", "--out", path("ins")});
    ASSERT_EQ(r.code, 0) << r.err;
    const auto doc = json::parse(r.out);
    ASSERT_EQ(doc.size(), 3u);
    // ranking order, highest first
    EXPECT_EQ(doc[0]["label"], "insider@0.1");
    EXPECT_EQ(doc[1]["label"], "insider@0.05");
    EXPECT_EQ(doc[2]["label"], "insider@0.01");
}

TEST_F(CliTest, SimulateErrors) {
    EXPECT_EQ(run({"simulate", "--data", path("missing.csv"), "--out", path("x")}).code,
              parrondo::cli::kExitFailure);
    EXPECT_EQ(run({"simulate", "--strategies", "momentum", "--out", path("x")}).code,
              parrondo::cli::kExitUsage);
    EXPECT_EQ(run({"simulate", "--reps", "0", "--out", path("x")}).code, parrondo::cli::kExitUsage);
    EXPECT_EQ(run({"simulate", "--fixture", "table2", "--data", kFixture}).code,
              parrondo::cli::kExitUsage);

    std::ofstream(path("bad.csv")) << "date,ticker,close\n2000-01-03,A,oops\n";
    const auto bad = run({"simulate", "--data", path("bad.csv"), "--out", path("x")});
    EXPECT_EQ(bad.code, parrondo::cli::kExitFailure);
    EXPECT_NE(bad.err.find("2"), std::string::npos);
}

TEST_F(CliTest, SimulateWritesSingleRunAndManifest) {
    const auto r = run({"simulate", "--reps", "3", "--strategies", "random,blsr", "--emit-single-run",
                        "--seed", "5", "--out", path("s")});
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_TRUE(fs::exists(path("s/single_run.csv")));
    const auto manifest = json::parse(slurp(path("s/run_manifest.json")));
    EXPECT_EQ(manifest["master_seed"], 5);
    EXPECT_EQ(manifest["config"]["reps"], 3);
    EXPECT_EQ(manifest["options"]["emit_single_run"], true);
    EXPECT_EQ(manifest["input_digest"].get<std::string>().substr(0, 7), "sha256:");
    EXPECT_EQ(manifest["outputs"].size(), 3u);
}

TEST_F(CliTest, ManifestReplayReproducesOutputs) {
    ASSERT_EQ(run({"simulate", "--reps", "4", "--seed", "11", "--hint-probs", "0.02,0.2",
                   "--reinvest", "holdings", "--out", path("first")})
                  .code,
              0);
    const auto replay =
        run({"simulate", "--config", path("first/run_manifest.json"), "--out", path("second")});
    ASSERT_EQ(replay.code, 0) << replay.err;
    EXPECT_EQ(slurp(path("first/summary.csv")), slurp(path("second/summary.csv")));
    EXPECT_EQ(slurp(path("first/trajectories.csv")), slurp(path("second/trajectories.csv")));

    const auto overridden = run({"simulate", "--config", path("first/run_manifest.json"), "--seed",
                                 "12", "--out", path("third")});
    ASSERT_EQ(overridden.code, 0);
    EXPECT_NE(slurp(path("first/summary.csv")), slurp(path("third/summary.csv")));
}

TEST_F(CliTest, GenDataReproducesBundledFixture) {
    const auto r = run({"gen-data", "--out", dir_.string()});
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_EQ(slurp(path("table2_sawtooth.csv")), slurp(kFixture));
    EXPECT_EQ(slurp(path("table2_spec.json")),
              slurp(std::string(PARRONDO_FIXTURE_DIR) + "/table2_spec.json"));
}

TEST_F(CliTest, GenDataVariants) {
    ASSERT_EQ(run({"gen-data", "--days", "2", "--out", path("two")}).code, 0);
    const std::string two = slurp(path("two/table2_sawtooth.csv"));
    EXPECT_EQ(std::count(two.begin(), two.end(), '\n'), 21);

    ASSERT_EQ(run({"gen-data", "--seed", "1", "--out", path("other")}).code, 0);
    const std::string other = slurp(path("other/table2_sawtooth.csv"));
    EXPECT_NE(other, slurp(kFixture));
    EXPECT_NE(other.find("2001-02-15,ABB,83.33\n"), std::string::npos);
    const auto spec = json::parse(slurp(path("other/table2_spec.json")));
    EXPECT_FALSE(spec.contains("note"));

    EXPECT_EQ(run({"gen-data", "--endpoints", "120,50", "--out", path("bad")}).code,
              parrondo::cli::kExitUsage);
    EXPECT_EQ(run({"gen-data", "--tickers", "X,Y", "--out", path("bad")}).code,
              parrondo::cli::kExitUsage);
}
