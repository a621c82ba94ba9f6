// Copyright 2026 The eswish Authors
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "eswish/cli.hpp"

namespace eswish::cli {
namespace {

namespace fs = std::filesystem;

struct Result {
    int code;
    std::string out;
    std::string err;
};

Result run_cli(std::vector<std::string> args) {
    std::ostringstream out, err;
    const int code = run(args, out, err);
    return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::vector<std::string> split_words(const std::string& line) {
    std::istringstream in(line);
    std::vector<std::string> words;
    for (std::string w; in >> w;) words.push_back(w);
    return words;
}

// "config: eswish <args...>" -> <args...>
std::vector<std::string> config_args(const std::string& output) {
    const auto line = output.substr(0, output.find('\n'));
    auto words = split_words(line);
    EXPECT_GE(words.size(), 2u);
    EXPECT_EQ(words[0], "config:");
    return {words.begin() + 2, words.end()};
}

class CliDir : public ::testing::Test {
protected:
    void SetUp() override {
        dir_ = fs::temp_directory_path() /
               ("eswish_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
        fs::remove_all(dir_);
    }
    void TearDown() override { fs::remove_all(dir_); }
    std::string out(const std::string& sub = "") const { return (dir_ / sub).string(); }
    fs::path dir_;
};

TEST(GradCheckCommand, BetaListPasses) {
    const auto r = run_cli({"grad-check", "--beta", "1,1.5,2"});
    EXPECT_EQ(r.code, kOk) << r.out << r.err;
    EXPECT_NE(r.out.find("eswish:1.5"), std::string::npos);
    EXPECT_EQ(r.out.find("FAIL"), std::string::npos);
}

TEST(GradCheckCommand, UnachievableToleranceFails) {
    const auto r = run_cli({"grad-check", "--tol", "1e-12"});
    EXPECT_EQ(r.code, kFailed);
    EXPECT_NE(r.out.find("scalar tolerance exceeded at x="), std::string::npos);
}

TEST(GradCheckCommand, ReluSkipsAndReportsKink) {
    const auto r = run_cli({"grad-check", "--act", "relu"});
    EXPECT_EQ(r.code, kOk) << r.out;
    EXPECT_NE(r.out.find("kink at x=0 skipped"), std::string::npos);
}

TEST(ScalarCheck, EveryActivationPassesAtDefaultTolerance) {
    for (const auto& a : all_activations()) {
        const auto s = check_scalar_derivative(a, 1e-5, 1e-6);
        EXPECT_TRUE(s.passed) << to_string(a) << " worst x=" << s.worst_x;
    }
}

TEST(Usage, UnknownFlagsAndSubcommandsAreUsageErrors) {
    EXPECT_EQ(run_cli({"grad-check", "--bogus"}).code, kUsage);
    EXPECT_EQ(run_cli({"frobnicate"}).code, kUsage);
    EXPECT_EQ(run_cli({}).code, kUsage);
    EXPECT_EQ(run_cli({"train-mnist", "--preset", "huge"}).code, kUsage);
    EXPECT_EQ(run_cli({"grad-check", "--act", "gelu"}).code, kUsage);
    EXPECT_EQ(run_cli({"train-depth", "--synthetic", "--lr", "-1"}).code, kUsage);
    EXPECT_EQ(run_cli({"train-depth", "--synthetic", "--depths", "0"}).code, kUsage);
    EXPECT_EQ(run_cli({"landscape", "--resolution", "2"}).code, kUsage);
    EXPECT_EQ(run_cli({"--help"}).code, kOk);
}

TEST(Usage, MissingDataWithoutSyntheticIsUsageError) {
    ::unsetenv("ESWISH_DATA_DIR");
    const auto r = run_cli({"train-mnist"});
    EXPECT_EQ(r.code, kUsage);
    EXPECT_NE(r.err.find("--synthetic"), std::string::npos);
}

TEST(Usage, UnreadableDataDirIsIoError) {
    EXPECT_EQ(run_cli({"train-mnist", "--data-dir", "/nonexistent/eswish"}).code, kIo);
}

TEST_F(CliDir, LandscapeSlopesIncreaseWithBeta) {
    const auto r = run_cli({"landscape", "--act", "eswish:1,eswish:1.5,eswish:2", "--seed", "7", "--resolution",
                            "64", "--out", out()});
    ASSERT_EQ(r.code, kOk) << r.err;
    std::istringstream in(slurp(dir_ / "slopes.csv"));
    std::string line;
    std::getline(in, line);
    EXPECT_EQ(line, "activation,beta,rms_slope");
    double previous = 0.0;
    int rows = 0;
    while (std::getline(in, line)) {
        const double slope = std::stod(line.substr(line.rfind(',') + 1));
        EXPECT_GT(slope, previous) << line;
        previous = slope;
        ++rows;
    }
    EXPECT_EQ(rows, 3);
}

TEST_F(CliDir, LandscapeFileContractAndDeterminism) {
    const std::vector<std::string> args{"landscape", "--act", "relu,elu,swish", "--seed", "7", "--resolution", "32"};
    auto first = args;
    first.insert(first.end(), {"--out", out("a")});
    auto second = args;
    second.insert(second.end(), {"--out", out("b")});
    ASSERT_EQ(run_cli(first).code, kOk);
    ASSERT_EQ(run_cli(second).code, kOk);
    std::size_t files = 0;
    for (const auto& e : fs::directory_iterator(dir_ / "a")) {
        ++files;
        EXPECT_EQ(slurp(e.path()), slurp(dir_ / "b" / e.path().filename()));
    }
    EXPECT_EQ(files, 4u);
    const std::string grid = slurp(dir_ / "a" / "landscape_relu_seed7.csv");
    EXPECT_EQ(grid.substr(0, 6), "x,y,z\n");
    EXPECT_EQ(std::count(grid.begin(), grid.end(), '\n'), 32 * 32 + 1);
}

TEST_F(CliDir, CurvesDefaultFamily) {
    const auto r = run_cli({"curves", "--out", out()});
    ASSERT_EQ(r.code, kOk);
    const std::string csv = slurp(dir_ / "curves.csv");
    // five groups of 1201 points on [-6, 6] plus the header
    EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 5 * 1201 + 1);
    EXPECT_NE(csv.find("\n1.5,0,0,0.75,0,0.5\n"), std::string::npos);
}

TEST_F(CliDir, TrainDepthPrintsBatchNormTopology) {
    const auto r = run_cli({"train-depth", "--synthetic", "--depths", "3", "--act", "eswish:1.5", "--seeds", "1",
                            "--width", "16", "--epochs", "1", "--data-fraction", "0.02", "--out", out()});
    ASSERT_EQ(r.code, kOk) << r.err;
    EXPECT_NE(r.out.find("batch norm after Dense indices 1)"), std::string::npos) << r.out;
    EXPECT_NE(r.out.find("[2] Dense(16->16)\n  [3] BatchNorm(16)\n"), std::string::npos) << r.out;
    EXPECT_TRUE(fs::exists(dir_ / "depth_eswish-1.5_3_1.csv"));
    EXPECT_TRUE(fs::exists(dir_ / "depth_summary.csv"));
}

TEST_F(CliDir, TrainMnistWritesOneFilePerRunPlusSummaries) {
    const auto r = run_cli({"train-mnist", "--synthetic", "--act", "relu,swish,eswish:1.5,eswish:2", "--seeds",
                            "1,2,3", "--epochs", "1", "--data-fraction", "0.02", "--out", out(), "--save-weights",
                            out("w")});
    ASSERT_EQ(r.code, kOk) << r.err;
    int runs = 0, medians = 0;
    for (const auto& e : fs::directory_iterator(dir_)) {
        const auto name = e.path().filename().string();
        runs += name.find("_mlp_") != std::string::npos;
        medians += name.ends_with("_median.csv");
    }
    EXPECT_EQ(runs, 12);
    EXPECT_EQ(medians, 4);
    EXPECT_TRUE(fs::exists(dir_ / "mnist_summary.csv"));
    const auto eval = run_cli({"train-mnist", "--synthetic", "--data-fraction", "0.02", "--load-weights",
                               out("w/mnist_eswish-2_mlp_3.eswnet")});
    EXPECT_EQ(eval.code, kOk) << eval.err;
    EXPECT_NE(eval.out.find("test_acc="), std::string::npos);
}

TEST(ResolvedConfig, ReparsesToTheSameRun) {
    const std::vector<std::vector<std::string>> cases{
        {"grad-check", "--beta", "1,1.5"},
        {"grad-check"},
        {"landscape", "--act", "relu", "--init-scale", "0.5"},
        {"train-depth", "--preset", "paper", "--plateau-patience", "0", "--milestones", "3,6"},
        {"train-depth", "--synthetic", "--early-stop-patience", "0"},
        {"train-mnist", "--synthetic", "--lr", "0.05", "--act", "eswish:1.25"},
        {"curves", "--beta", "1,2", "--step", "0.5"},
    };
    for (const auto& args : cases) {
        const CliConfig first = parse(args);
        const std::string line = resolved_command(first);
        auto words = split_words(line);
        const CliConfig second = parse({words.begin() + 1, words.end()});
        EXPECT_EQ(resolved_command(second), line);
    }
}

TEST(ResolvedConfig, PrintedBeforeRunning) {
    const auto r = run_cli({"curves", "--beta", "1.5", "--out", (fs::temp_directory_path() / "eswish_cfg").string()});
    ASSERT_EQ(r.code, kOk);
    const auto args = config_args(r.out);
    EXPECT_EQ(args.front(), "curves");
    fs::remove_all(fs::temp_directory_path() / "eswish_cfg");
}

TEST(ResolvedConfig, PresetsMaterialize) {
    const auto full = resolve_depth(parse({"train-depth", "--preset", "paper"}));
    EXPECT_EQ(full.depths.front(), 23);
    EXPECT_EQ(full.depths.back(), 44);
    EXPECT_EQ(full.width, 512u);
    ASSERT_TRUE(full.train.plateau);
    EXPECT_EQ(full.train.plateau->factor, 0.35);
    EXPECT_EQ(full.train.early_stop_patience, 5);
    const auto desk = resolve_depth(parse({"train-depth"}));
    EXPECT_EQ(desk.depths, (std::vector<int>{8, 16, 24}));
    EXPECT_EQ(desk.width, 128u);
    const auto mlp = resolve_mnist(parse({"train-mnist", "--preset", "paper"}));
    EXPECT_EQ(mlp.train.lr, 0.1);
    EXPECT_EQ(mlp.train.momentum, 0.0);
    EXPECT_EQ(mlp.train.batch_size, 64u);
    EXPECT_EQ(mlp.train.epochs, 20);
    EXPECT_EQ(mlp.dropout, 0.2);
}

}  // namespace
}  // namespace eswish::cli
