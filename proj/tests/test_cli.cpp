#include "relscatter_app/commands.hpp"
#include "relscatter_app/config.hpp"

#include <gtest/gtest.h>

#include <unistd.h>

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

using namespace relscatter;
using namespace relscatter::app;
namespace fs = std::filesystem;

namespace {

struct Outcome {
    int code;
    std::string out, err;
};

Outcome run(std::vector<std::string> args) {
    std::ostringstream o, e;
    int c = run_command(args, o, e);
    return {c, o.str(), e.str()};
}

fs::path scratch_dir() {
    fs::path d = fs::temp_directory_path() / ("relscatter_cli_" + std::to_string(::getpid()));
    fs::create_directories(d);
    return d;
}

std::string slurp(const fs::path& p) {
    std::ifstream f(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(f), {}};
}

void write(const fs::path& p, const std::string& text) { std::ofstream(p) << text; }

}  // namespace

TEST(Config, RoundTrip) {
    RunConfig c;
    c.lambda = 0.7853981633974483;
    c.sign = Sign::minus;
    c.direction = {0.6, 0.0, 0.8};
    c.R_dom = 7.25;
    c.N_r = 9;
    c.N_ang = 7;
    c.N_phi = 14;
    c.profile = "oscillating";
    c.C = 0.1 / 3.0;
    c.sigma = 3.5;
    c.coupling = -1.5;
    c.mode = "nystrom-radial";
    c.tol = 1e-9;
    c.max_iter = 77;
    c.relaxation = 0.8;
    c.r_min = 12.0;
    c.r_max = 140.0;
    c.ratio = 1.15;
    c.suites = {"kernels", "spectral"};
    c.expect_fail = {"2", "boundary_limit"};
    c.tolerances = {{"identity", 1e-12}, {"decay_envelope", 1.3}};
    c.json_path = "out/meta.json";
    c.csv_path = "out/data.csv";
    c.seed = 99;
    RunConfig back = parse_config(serialize_config(c));
    EXPECT_TRUE(back == c);
    EXPECT_TRUE(parse_config(serialize_config(RunConfig{})) == RunConfig{});
}

TEST(Config, Rejections) {
    EXPECT_THROW(parse_config("[grid]\nbogus = 1\n"), ConfigError);
    EXPECT_THROW(parse_config("[nowhere]\nR_dom = 1\n"), ConfigError);
    EXPECT_THROW(parse_config("[grid]\nR_dom = abc\n"), ConfigError);
    RunConfig c;
    c.mode = "magic";
    EXPECT_THROW(c.validate(false), ConfigError);
    c = RunConfig{};
    c.tolerances["identity"] = -1.0;
    EXPECT_THROW(c.validate(false), ConfigError);
    c = RunConfig{};
    c.sigma = 1.5;
    EXPECT_NO_THROW(c.validate(false));
    EXPECT_THROW(c.validate(true), ConfigError);
}

TEST(Config, NumberFormats) {
    EXPECT_EQ(format_double(0.1), "0.1");
    EXPECT_EQ(std::stod(format_double(1.0 / 3.0)), 1.0 / 3.0);
    EXPECT_EQ(csv_double(0.1), "0.10000000000000001");
}

TEST(Cli, EvalKernelPrintsOneRow) {
    Outcome r = run({"eval-kernel", "--lambda", "1", "--sign", "+", "--r", "2"});
    EXPECT_EQ(r.code, 0);
    EXPECT_EQ(std::count(r.out.begin(), r.out.end(), '\n'), 1);
    EXPECT_NE(r.out.find("\"riesz\""), std::string::npos);
    EXPECT_EQ(run({"eval-kernel", "--lambda", "1", "--sign", "?", "--r", "2"}).code, 2);
    EXPECT_EQ(run({"eval-kernel", "--lambda", "-1", "--sign", "+", "--r", "2"}).code, 2);
}

TEST(Cli, SolveRejectsSlowDecay) {
    Outcome r = run({"solve", "--sigma", "1.5"});
    EXPECT_EQ(r.code, 2);
    EXPECT_NE(r.err.find("sigma > 2"), std::string::npos);
}

TEST(Cli, UsageErrors) {
    EXPECT_EQ(run({"frobnicate"}).code, 2);
    EXPECT_EQ(run({}).code, 2);
    EXPECT_EQ(run({"report"}).code, 2);
    EXPECT_EQ(run({"report", "/nonexistent/file.json"}).code, 2);
    EXPECT_EQ(run({"-c", "/nonexistent/run.ini", "solve"}).code, 2);
}

TEST(Cli, ReportMergesLastWins) {
    fs::path d = scratch_dir();
    write(d / "a.json", R"({"checks":[{"check":"alpha","value":1,"bound":2,"relation":"<=","pass":true},
                                    {"check":"beta","value":5,"bound":2,"relation":"<=","pass":false}]})");
    write(d / "b.json", R"({"checks":[{"check":"beta","value":1.5,"bound":2,"relation":"<=","pass":true},
                                    {"check":"gamma","value":0,"bound":1,"relation":"<=","pass":true}]})");
    write(d / "bad.json", "not json");
    Outcome r = run({"report", (d / "a.json").string(), (d / "b.json").string()});
    EXPECT_EQ(r.code, 0);
    EXPECT_NE(r.err.find("warning: check beta"), std::string::npos);
    for (const char* name : {"alpha", "beta", "gamma"}) EXPECT_NE(r.out.find(name), std::string::npos);
    EXPECT_NE(r.out.find("1.5"), std::string::npos);
    EXPECT_EQ(r.out.find(" no"), std::string::npos);
    // Reverse order: the failing beta wins and the report says so.
    Outcome rev = run({"report", (d / "b.json").string(), (d / "a.json").string(), "-o", (d / "t.txt").string()});
    EXPECT_EQ(rev.code, 1);
    EXPECT_NE(slurp(d / "t.txt").find("beta"), std::string::npos);
    EXPECT_EQ(run({"report", (d / "bad.json").string()}).code, 2);
    fs::remove_all(d);
}

TEST(Cli, VerifyKernelsSuite) {
    fs::path d = scratch_dir();
    Outcome r = run({"verify", "--suite", "kernels", "--json", (d / "v.json").string()});
    EXPECT_EQ(r.code, 0) << r.err;
    std::string doc = slurp(d / "v.json");
    EXPECT_NE(doc.find("\"expected_failure\": true"), std::string::npos);
    EXPECT_EQ(run({"verify", "--suite", "nonsense"}).code, 2);
    fs::remove_all(d);
}

TEST(Cli, CsvIndependentOfThreadCount) {
    fs::path d = scratch_dir();
    write(d / "run.ini", "[grid]\nR_dom = 3\nN_r = 6\nN_ang = 5\nN_phi = 10\n[output]\njson = " +
                             (d / "meta.json").string() + "\n");
    std::string csv[2];
    int threads[2] = {1, 4};
    for (int i = 0; i < 2; ++i) {
        ::setenv("RELSCATTER_THREADS", std::to_string(threads[i]).c_str(), 1);
        fs::path p = d / ("phi" + std::to_string(i) + ".csv");
        Outcome r = run({"-c", (d / "run.ini").string(), "solve", "--csv", p.string()});
        ASSERT_EQ(r.code, 0) << r.err;
        csv[i] = slurp(p);
    }
    ::unsetenv("RELSCATTER_THREADS");
    EXPECT_EQ(csv[0].rfind("x1,x2,x3,re_phi,im_phi\n", 0), 0u);
    EXPECT_EQ(std::count(csv[0].begin(), csv[0].end(), '\n'), 1 + 6 * 5 * 10);
    EXPECT_EQ(csv[0], csv[1]);
    fs::remove_all(d);
}
