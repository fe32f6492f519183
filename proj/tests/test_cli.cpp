#include "spiraldim/cli.hpp"
#include "spiraldim/csv.hpp"

#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

#include <filesystem>
#include <fstream>
#include <sstream>

using namespace spiraldim;

namespace {

struct Result {
    int code = 0;
    std::string out;
    std::string err;
};

Result run(std::vector<std::string> args) {
    std::ostringstream out, err;
    const int code = run_cli(args, out, err);
    return {code, out.str(), err.str()};
}

std::string tmp(const std::string& name) { return std::string(SPIRALDIM_TEST_TMP) + "/" + name; }

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace

TEST(Cli, SpiralFirstRow) {
    const auto r = run({"spiral", "--alpha", "0.5", "--phi1", "6.2832", "--phi2", "1256.6"});
    ASSERT_EQ(r.code, 0) << r.err;
    std::istringstream in(r.out);
    std::string header, first;
    std::getline(in, header);
    std::getline(in, first);
    EXPECT_EQ(header, "phi,f");
    const auto comma = first.find(',');
    EXPECT_NEAR(std::stod(first.substr(0, comma)), 6.2832, 1e-12);
    EXPECT_NEAR(std::stod(first.substr(comma + 1)), 0.3989, 5e-5);
}

TEST(Cli, ExitCodes) {
    EXPECT_EQ(run({}).code, 2);
    EXPECT_EQ(run({"frobnicate"}).code, 2);
    EXPECT_EQ(run({"spiral", "--alpha", "abc"}).code, 2);
    EXPECT_EQ(run({"dim", "--method", "ruler"}).code, 2);
    EXPECT_EQ(run({"spiral", "--config", tmp("missing.cfg")}).code, 2);
    const auto bad = run({"spiral", "--alpha", "1.5"});
    EXPECT_EQ(bad.code, 1);
    EXPECT_FALSE(bad.err.empty());
    EXPECT_EQ(run({"simulate", "--x0", "0", "--y0", "0"}).code, 1);
    EXPECT_EQ(run({"dim", "--curve", tmp("missing_curve.csv")}).code, 2);
}

TEST(Cli, HelpSucceeds) {
    const auto r = run({"--help"});
    EXPECT_EQ(r.code, 0);
    EXPECT_NE(r.out.find("reproduce-table"), std::string::npos);
}

TEST(Cli, SimulateWritesTrajectoryAndSvg) {
    const auto csv = tmp("sim.csv");
    const auto svg = tmp("sim.svg");
    const auto r = run({"simulate", "--lambda", "1", "--gamma", "1", "--t-end", "50", "--out", csv, "--svg", svg});
    ASSERT_EQ(r.code, 0) << r.err;
    const auto text = slurp(csv);
    EXPECT_EQ(text.substr(0, 6), "t,x,y\n");
    EXPECT_NE(text.find("\n1,1,0\n"), std::string::npos);
    EXPECT_NE(slurp(svg).find("<polyline"), std::string::npos);
}

TEST(Cli, DeterministicOutputs) {
    const std::vector<std::string> args{"verify-criteria", "--lambda", "1", "--gamma", "1", "--t-end", "2000",
                                        "--probes", "100", "--seed", "3"};
    const auto a = run(args);
    const auto b = run(args);
    ASSERT_EQ(a.code, 0) << a.err;
    EXPECT_EQ(a.out, b.out);
    const auto j = nlohmann::json::parse(a.out);
    EXPECT_EQ(j.at("reports").size(), 4u);
    EXPECT_LT(j.at("checks").at("polar_ode_max_rel_err_r").get<double>(), 1e-5);

    const auto d1 = run({"dim", "--lambda", "1", "--t-end", "1e4", "--eps-max", "0.1", "--eps-min", "5e-3"});
    const auto d2 = run({"dim", "--lambda", "1", "--t-end", "1e4", "--eps-max", "0.1", "--eps-min", "5e-3"});
    ASSERT_EQ(d1.code, 0) << d1.err;
    EXPECT_EQ(d1.out, d2.out);
}

TEST(Cli, DimReportNearFourThirds) {
    const auto profile = tmp("profile.csv");
    const auto r = run({"dim", "--damping", "powerlaw", "--lambda", "1", "--gamma", "1", "--t-end", "1e5",
                        "--eps-max", "1e-1", "--eps-min", "5e-3", "--profile", profile});
    ASSERT_EQ(r.code, 0) << r.err;
    const auto j = nlohmann::json::parse(r.out);
    EXPECT_NEAR(j.at("dim_estimate").get<double>(), 4.0 / 3.0, 0.05);
    EXPECT_NEAR(j.at("predicted").get<double>(), 4.0 / 3.0, 1e-9);
    EXPECT_EQ(j.at("verdict"), "MATCH");
    EXPECT_EQ(slurp(profile).substr(0, 20), "epsilon,area,method\n");
}

TEST(Cli, DimOnCurveFile) {
    const auto curve = tmp("curve.csv");
    ASSERT_EQ(run({"spiral", "--alpha", "0.5", "--phi1", "6.283185307179586", "--phi2", "2000", "--out", curve}).code,
              0);
    const auto r = run({"dim", "--curve", curve, "--eps-max", "0.1", "--eps-min", "1e-3", "--method", "boxcount"});
    ASSERT_EQ(r.code, 0) << r.err;
    const auto j = nlohmann::json::parse(r.out);
    EXPECT_EQ(j.at("method"), "BoxCount");
    EXPECT_TRUE(j.at("predicted").is_null());
    EXPECT_EQ(j.at("verdict"), "NO_PREDICTION");
}

TEST(Cli, RectifiabilityJson) {
    const auto out = tmp("rect.json");
    ASSERT_EQ(run({"rectifiability", "--lambda", "3", "--gamma", "0.75", "--out", out}).code, 0);
    EXPECT_EQ(nlohmann::json::parse(slurp(out)).at("conclusion"), "RECTIFIABLE");
    const auto r = run({"rectifiability", "--lambda", "2", "--gamma", "1"});
    EXPECT_EQ(nlohmann::json::parse(r.out).at("conclusion"), "NON_RECTIFIABLE");
}

TEST(Cli, ConfigFileSuppliesDefaults) {
    const auto cfg = tmp("run.cfg");
    write_text_file(cfg, "# spiral defaults\nalpha = 0.25\nspiral.phi1 = 2\nphi2 = 40\ndim.eps-max = 9\n");
    const auto r = run({"spiral", "--config", cfg});
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_NE(r.out.find("\n2,0.8408964152537145\n"), std::string::npos) << r.out.substr(0, 80);
    // Command-line flags win over the file.
    const auto o = run({"spiral", "--config", cfg, "--alpha", "0.5"});
    ASSERT_EQ(o.code, 0) << o.err;
    EXPECT_NE(o.out.find("\n2,0.70710678118654757\n"), std::string::npos);
    EXPECT_NE(run({"spiral", "--config", cfg, "--alpha", "1"}).out.find("\n2,0.5\n"), std::string::npos);

    write_text_file(cfg, "command = rectifiability\nlambda = 3\ngamma = 1\n");
    const auto c = run({"--config", cfg});
    ASSERT_EQ(c.code, 0) << c.err;
    EXPECT_EQ(nlohmann::json::parse(c.out).at("conclusion"), "RECTIFIABLE");

    write_text_file(cfg, "alpha 0.5\n");
    EXPECT_EQ(run({"spiral", "--config", cfg}).code, 2);
}

TEST(Cli, ReproduceTableRejectsImpossibleTolerance) {
    const auto r = run({"reproduce-table", "--t-end", "2e3", "--tolerance", "1e-9"});
    EXPECT_EQ(r.code, 1);
    EXPECT_NE(r.out.find("FAIL"), std::string::npos);
}
