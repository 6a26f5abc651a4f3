#include <gtest/gtest.h>

#include <sys/wait.h>

#include <array>
#include <cstdio>
#include <sstream>
#include <string>
#include <vector>

namespace {

struct RunResult {
    int exit_code = -1;
    std::string out;
};

RunResult run(const std::string& args) {
    const std::string cmd = std::string(DELAYBS_CLI) + " " + args + " 2>/dev/null";
    RunResult r;
    FILE* pipe = popen(cmd.c_str(), "r");
    if (pipe == nullptr) return r;
    std::array<char, 4096> buf{};
    std::size_t n = 0;
    while ((n = fread(buf.data(), 1, buf.size(), pipe)) > 0) r.out.append(buf.data(), n);
    const int status = pclose(pipe);
    r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return r;
}

RunResult run_stderr(const std::string& args) {
    return run(args + " 2>&1 1>/dev/null; exit $?");
}

std::string config(const char* name) { return std::string("--config ") + DELAYBS_CONFIG_DIR + "/" + name; }

std::vector<std::string> lines(const std::string& s) {
    std::vector<std::string> out;
    std::istringstream in(s);
    for (std::string line; std::getline(in, line);) out.push_back(line);
    return out;
}

std::vector<std::string> fields(const std::string& line) {
    std::vector<std::string> out;
    std::istringstream in(line);
    for (std::string f; std::getline(in, f, ',');) out.push_back(f);
    return out;
}

}  // namespace

TEST(Cli, ClassicalPrice) {
    const auto r = run("price --method classical " + config("constant_vol.json"));
    ASSERT_EQ(r.exit_code, 0);
    const auto ls = lines(r.out);
    ASSERT_EQ(ls.size(), 2u);
    EXPECT_EQ(ls[0], "method,value,std_error,n_paths");
    const auto f = fields(ls[1]);
    ASSERT_EQ(f.size(), 4u);
    EXPECT_EQ(f[0], "classical");
    EXPECT_NEAR(std::stod(f[1]), 10.450584, 5e-7);
}

TEST(Cli, ClosedInFinalBlock) {
    const auto r = run("price --method closed --t 0.8 " + config("constant_vol.json"));
    ASSERT_EQ(r.exit_code, 0);
    const auto closed = std::stod(fields(lines(r.out)[1])[1]);
    const auto c = run("price --method classical --t 0.8 " + config("constant_vol.json"));
    ASSERT_EQ(c.exit_code, 0);
    EXPECT_NEAR(closed, std::stod(fields(lines(c.out)[1])[1]), 1e-12);
}

TEST(Cli, ClosedBeforeConditioningTimeIsUsageError) {
    EXPECT_EQ(run("price --method closed --t 0.2 " + config("constant_vol.json")).exit_code, 2);
}

TEST(Cli, MissingConfigNamesPath) {
    const auto r = run_stderr("price --method closed --config /nonexistent/market.json");
    EXPECT_EQ(r.exit_code, 2);
    EXPECT_NE(r.out.find("/nonexistent/market.json"), std::string::npos);
}

TEST(Cli, UnknownMethodIsUsageError) {
    EXPECT_EQ(run("price --method binomial " + config("constant_vol.json")).exit_code, 2);
    EXPECT_EQ(run("frobnicate " + config("constant_vol.json")).exit_code, 2);
}

TEST(Cli, ZeroPathsIsUsageError) {
    EXPECT_EQ(run("price --method semi --paths 0 " + config("state_dependent.json")).exit_code, 2);
}

TEST(Cli, InvalidMarketIsConfigError) {
    EXPECT_EQ(run("price --method closed --t 0.75 " + config("bad_gmin.json")).exit_code, 2);
}

TEST(Cli, SimulateExactShape) {
    const auto r = run("simulate --paths 3 --scheme exact " + config("state_dependent.json"));
    ASSERT_EQ(r.exit_code, 0);
    const auto ls = lines(r.out);
    ASSERT_EQ(ls[0], "time,value,stream_id");
    // Block schedule 0, 0.25, 0.5, 0.75, 0.9 per path.
    ASSERT_EQ(ls.size(), 1u + 3u * 5u);
    std::vector<std::string> ids;
    for (std::size_t i = 1; i < ls.size(); ++i) {
        const auto f = fields(ls[i]);
        ASSERT_EQ(f.size(), 3u);
        EXPECT_GT(std::stod(f[1]), 0.0);
        if (ids.empty() || ids.back() != f[2]) ids.push_back(f[2]);
    }
    EXPECT_EQ(ids, (std::vector<std::string>{"0", "1", "2"}));
}

TEST(Cli, SimulateEulerGrid) {
    const auto r = run("simulate --paths 1 --scheme em --dt 0.0078125 " + config("fixed_delay.json"));
    ASSERT_EQ(r.exit_code, 0);
    const auto ls = lines(r.out);
    EXPECT_EQ(ls.size(), 1u + 129u);
    EXPECT_EQ(fields(ls.back())[0], "1");
}

TEST(Cli, SimulateBadStepIsUsageError) {
    EXPECT_EQ(run("simulate --paths 1 --scheme split --dt 0.3 " + config("fixed_delay.json")).exit_code, 2);
}

TEST(Cli, HedgeLadderRows) {
    const auto r = run("hedge --ladder 4,16,64 --paths 2000 " + config("state_dependent.json"));
    ASSERT_EQ(r.exit_code, 0);
    const auto ls = lines(r.out);
    ASSERT_EQ(ls.size(), 4u);
    EXPECT_EQ(ls[0], "n_rebalance,mean_error,rmse,n_paths");
    EXPECT_EQ(fields(ls[1])[0], "4");
    EXPECT_EQ(fields(ls[3])[0], "64");
}

TEST(Cli, CheckPassesWhenDriftIsRate) {
    const auto r = run("check --paths 20000 " + config("risk_neutral_drift.json"));
    EXPECT_EQ(r.exit_code, 0) << r.out;
    EXPECT_EQ(r.out.find("FAIL"), std::string::npos);
    EXPECT_NE(r.out.find("density_mean"), std::string::npos);
}

TEST(Cli, CheckReportsBypassedValidation) {
    const auto r = run("check --no-validate --paths 1000 " + config("bad_gmin.json"));
    EXPECT_EQ(r.exit_code, 1);
    EXPECT_NE(r.out.find("validation"), std::string::npos);
    EXPECT_NE(r.out.find("FAIL"), std::string::npos);
}

TEST(Cli, McOutputIndependentOfWorkers) {
    const auto a = run("price --method mc --paths 50000 --seed 42 --workers 1 " + config("state_dependent.json"));
    const auto b = run("price --method mc --paths 50000 --seed 42 --workers 4 " + config("state_dependent.json"));
    ASSERT_EQ(a.exit_code, 0);
    EXPECT_EQ(a.out, b.out);
}
