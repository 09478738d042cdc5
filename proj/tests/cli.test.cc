#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "tcsim/cli.h"

namespace tcsim::cli {
namespace {

std::string error_of(const std::string &text) {
    RunConfig cfg;
    try {
        parse_config(cfg, text, "run.cfg");
        cfg.validate();
    } catch (const ConfigError &e) {
        return e.what();
    }
    return "";
}

TEST(Cli, ParsesKeysListsAndComments) {
    RunConfig cfg;
    parse_config(cfg,
                 "# header\n"
                 "mode = phenomenological\n"
                 "sizes = 3, 5 # trailing comment\n"
                 "\n"
                 "p_flip = 0.01,0.02\n"
                 "trials=12\n",
                 "run.cfg");
    EXPECT_EQ(cfg.mode, NoiseMode::phenomenological);
    EXPECT_EQ(cfg.sizes, (std::vector<int>{3, 5}));
    EXPECT_EQ(cfg.p_flip, (std::vector<double>{0.01, 0.02}));
    EXPECT_EQ(cfg.trials, 12u);
    EXPECT_EQ(grid_points(cfg).size(), 4u);
}

TEST(Cli, ErrorsNameTheLine) {
    EXPECT_EQ(error_of("sizes = 9\nR = seven\n"), "run.cfg:2: invalid value 'seven' for R");
    EXPECT_EQ(error_of("\n\nfoo = 1\n"), "run.cfg:3: unknown key 'foo'");
    EXPECT_EQ(error_of("trials 100\n"), "run.cfg:1: expected 'key = value'");
    EXPECT_EQ(error_of("mode = quantum\n").rfind("run.cfg:1:", 0), 0u);
    EXPECT_EQ(error_of("p_C = \n"), "p_C: empty grid");
    EXPECT_EQ(error_of("p_L = 1.5\n"), "p_L: probabilities must lie in [0,1]");
    EXPECT_EQ(error_of("sizes = 17\n"), "sizes: d=17 exceeds max_d=15");
    EXPECT_EQ(error_of("trials = 0\n"), "trials: must be at least 1");
}

TEST(Cli, OverridesApplyAfterTheFile) {
    RunConfig cfg;
    parse_config(cfg, "trials = 10\n", "a.cfg");
    apply_override(cfg, "trials=20");
    EXPECT_EQ(cfg.trials, 20u);
    EXPECT_THROW(apply_override(cfg, "trials"), ConfigError);
    EXPECT_THROW(apply_override(cfg, "nope=1"), ConfigError);
}

TEST(Cli, ResolvedConfigRoundTrips) {
    RunConfig cfg;
    parse_config(cfg, "p_C = 0.0005, 0.0011\nseed = 9\nloss_policy = herald\n", "a.cfg");
    std::string text;
    for (const auto &[k, v] : cfg.resolved()) text += k + " = " + v + "\n";
    RunConfig again;
    parse_config(again, text, "resolved");
    EXPECT_EQ(again.resolved(), cfg.resolved());
    EXPECT_EQ(again.p_C, cfg.p_C);
}

TEST(Cli, MissingFileIsAnIoError) { EXPECT_THROW(load_config("/nonexistent/run.cfg"), IoError); }

RunConfig phenomenological(double p_flip) {
    RunConfig cfg;
    cfg.mode = NoiseMode::phenomenological;
    cfg.sizes = {3};
    cfg.p_flip = {p_flip};
    return cfg;
}

TEST(Cli, EmptyTrialDump) {
    std::ostringstream out;
    ASSERT_EQ(cmd_sample(phenomenological(0), out, 0, {}, "-"), 0);
    auto j = nlohmann::json::parse(out.str());
    EXPECT_TRUE(j["flips"].empty());
    EXPECT_TRUE(j["syndrome"].empty());
    EXPECT_EQ(j["failed"], false);
}

TEST(Cli, DumpIsByteIdentical) {
    RunConfig cfg = phenomenological(0.05);
    std::ostringstream a, b;
    cmd_sample(cfg, a, 3, {}, "-");
    cmd_sample(cfg, b, 3, {}, "-");
    EXPECT_EQ(a.str(), b.str());
    EXPECT_FALSE(nlohmann::json::parse(a.str())["flips"].empty());
}

TEST(Cli, InjectedFlipGivesTwoDefects) {
    std::ostringstream out;
    cmd_sample(phenomenological(0), out, 0, {7}, "-");
    auto j = nlohmann::json::parse(out.str());
    EXPECT_EQ(j["syndrome"].size(), 2u);
    EXPECT_EQ(j["flips"], nlohmann::json::array({7}));
    EXPECT_EQ(j["correction"], nlohmann::json::array({7}));
    EXPECT_EQ(j["failed"], false);
    EXPECT_THROW(cmd_sample(phenomenological(0), out, 0, {81}, "-"), ConfigError);
}

TEST(Cli, VerifyExitCodes) {
    std::ostringstream good, bad;
    EXPECT_EQ(cmd_verify(good), 0);
    EXPECT_NE(good.str().find("XZI / ZXZ / IZX"), std::string::npos);
    EXPECT_EQ(cmd_verify(bad, true), 1);
    EXPECT_NE(bad.str().find("expected:"), std::string::npos);
}

TEST(Cli, SweepWritesCsvAndSummary) {
    namespace fs = std::filesystem;
    fs::path dir = fs::temp_directory_path() / ("tcsim_cli_test_" + std::to_string(::testing::UnitTest::GetInstance()->random_seed()));
    fs::remove_all(dir);
    RunConfig cfg = phenomenological(0.02);
    cfg.trials = 20;
    cfg.output = dir.string();
    ASSERT_EQ(cmd_sweep(cfg), 0);
    std::ifstream csv(dir / "sweep.csv");
    std::string line, last;
    bool header = false;
    while (std::getline(csv, line)) {
        if (line == "d,p_C,p_L,R,mode,trials,failures,rate,ci_low,ci_high,seed") header = true;
        last = line;
    }
    EXPECT_TRUE(header);
    EXPECT_EQ(last.rfind("3,0.02,0,7,phenomenological,20,", 0), 0u);
    auto summary = nlohmann::json::parse(std::ifstream(dir / "run_summary.json"));
    EXPECT_EQ(summary["command"], "sweep");
    EXPECT_TRUE(summary.contains("wall_time_s"));
    EXPECT_EQ(summary["config"]["trials"], "20");
    fs::remove_all(dir);
}

TEST(Cli, ThresholdNeedsOneFixedValue) {
    RunConfig cfg;
    cfg.p_L = {0, 1e-4};
    cfg.trials = 1;
    EXPECT_THROW(run_threshold(cfg), ConfigError);
}

}  // namespace
}  // namespace tcsim::cli
