// SPDX-License-Identifier: Apache-2.0
#include <gtest/gtest.h>

#include <sys/wait.h>

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "json.hpp"
#include "mirelay/matching.hpp"
#include "mirelay/network_io.hpp"
#include "support.hpp"

using namespace mirelay;
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct CliRun {
    int code = -1;
    std::string out;
};

CliRun run(const std::string& args) {
    const std::string cmd = std::string(MIRELAY_CLI_PATH) + " " + args + " 2>&1";
    CliRun r;
    FILE* pipe = ::popen(cmd.c_str(), "r");
    if (pipe == nullptr) {
        return r;
    }
    char buf[4096];
    std::size_t n = 0;
    while ((n = std::fread(buf, 1, sizeof buf, pipe)) > 0) {
        r.out.append(buf, n);
    }
    const int status = ::pclose(pipe);
    r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return r;
}

/// Value of "key: value" in CLI output.
std::string field(const std::string& out, const std::string& key) {
    std::istringstream in(out);
    std::string line;
    while (std::getline(in, line)) {
        if (line.rfind(key + ": ", 0) == 0) {
            return line.substr(key.size() + 2);
        }
    }
    return "";
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

class Cli : public ::testing::Test {
protected:
    void SetUp() override {
        dir_ = fs::temp_directory_path() /
               ("mirelay_cli_" + std::to_string(::getpid()) + "_" +
                ::testing::UnitTest::GetInstance()->current_test_info()->name());
        fs::remove_all(dir_);
        fs::create_directories(dir_);
    }
    void TearDown() override { fs::remove_all(dir_); }

    fs::path write(const std::string& name, const json& doc) {
        const fs::path p = dir_ / name;
        std::ofstream(p) << doc.dump(2);
        return p;
    }

    fs::path dir_;
};

json two_coil() {
    return json{{"schema_version", 1},
                {"design_frequency", 13.56e6},
                {"tx", {{"position", {0, 0, 0}}, {"orientation", {0, 0, 1}}}},
                {"rx", {{"position", {0, 0, 0.3}}, {"orientation", {0, 0, 1}}}}};
}

} // namespace

TEST_F(Cli, GainOfTwoCoilsMatchesClosedForm) {
    const CliRun r = run("gain " + write("net.json", two_coil()).string());
    ASSERT_EQ(r.code, 0) << r.out;
    const CoilParams p;
    const double m = oracle::coaxial_mutual(p.radius, p.radius, 0.3, p.turns, p.turns);
    const double q = 2.0 * oracle::kPi * 13.56e6 * p.self_inductance / p.resistance;
    const double expect = power_gain_direct(m / p.self_inductance, q, q);
    EXPECT_NEAR(std::stod(field(r.out, "eta")), expect, 1e-6 * expect);
    EXPECT_FALSE(field(r.out, "z_in").empty());
}

TEST_F(Cli, OpenRelayEqualsDeletedRelay) {
    json with = two_coil();
    with["relays"] = json::array(
        {{{"position", {0.02, 0, 0.15}}, {"orientation", {0, 0, 1}}, {"load", {{"type", "open"}}}},
         {{"position", {-0.03, 0, 0.1}}, {"orientation", {0, 0, 1}}}});
    json without = two_coil();
    without["relays"] = json::array({with["relays"][1]});
    const CliRun a = run("gain " + write("a.json", with).string());
    const CliRun b = run("gain " + write("b.json", without).string());
    ASSERT_EQ(a.code, 0) << a.out;
    ASSERT_EQ(b.code, 0) << b.out;
    EXPECT_EQ(a.out, b.out);
    const CliRun c = run("gain " + write("a.json", with).string() + " --state 01");
    EXPECT_EQ(c.out, b.out);
}

TEST_F(Cli, BadOrientationIsGeometryError) {
    json doc = two_coil();
    doc["relays"] = json::array({{{"position", {0, 0, 0.1}}, {"orientation", {0, 0, 2}}}});
    const CliRun r = run("gain " + write("bad.json", doc).string());
    EXPECT_EQ(r.code, 3);
    EXPECT_NE(r.out.find("relay 0"), std::string::npos) << r.out;
}

TEST_F(Cli, ConfigErrorsExitWithTwo) {
    json doc = two_coil();
    doc["colour"] = "red";
    EXPECT_EQ(run("gain " + write("bad.json", doc).string()).code, 2);
    EXPECT_EQ(run("gain " + (dir_ / "missing.json").string()).code, 2);
    EXPECT_EQ(run("frobnicate").code, 2);
}

TEST_F(Cli, OptimizeSchemes) {
    const fs::path net_path = dir_ / "net.json";
    const Network net = oracle::sampled_network(3, 11);
    write_network_file(net_path, net);

    const CliRun g1 = run("optimize " + net_path.string() + " --seed 7 --generations 40");
    const CliRun g2 = run("optimize " + net_path.string() + " --seed 7 --generations 40");
    ASSERT_EQ(g1.code, 0) << g1.out;
    EXPECT_EQ(g1.out, g2.out);

    const CliRun one = run("optimize " + net_path.string() + " --scheme one");
    ASSERT_EQ(one.code, 0) << one.out;
    std::size_t best = 0;
    double best_eta = -1.0;
    for (std::size_t i = 0; i < 3; ++i) {
        const double e =
            power_gain(rho_chi(effective_two_port(net, 13.56e6, SwitchState::single(3, i))));
        if (e > best_eta) {
            best_eta = e;
            best = i;
        }
    }
    EXPECT_EQ(field(one.out, "active_relay"), std::to_string(best));
    EXPECT_NEAR(std::stod(field(one.out, "eta")), best_eta, 1e-12 * best_eta);

    const CliRun f = run("optimize " + write("direct.json", two_coil()).string() +
                      " --scheme freq --band 12e6:14e6 --grid 21");
    ASSERT_EQ(f.code, 0) << f.out;
    EXPECT_DOUBLE_EQ(std::stod(field(f.out, "f_star_hz")), 14e6);
}

TEST_F(Cli, SampleAndSweep) {
    const fs::path p = dir_ / "s.json";
    const CliRun s = run("sample --out " + p.string() + " --count 5 --seed 3 --scenario random-orientations");
    ASSERT_EQ(s.code, 0) << s.out;
    EXPECT_EQ(read_network_file(p).relay_count(), 5u);
    const CliRun w = run("sweep " + p.string() + " --grid 11");
    ASSERT_EQ(w.code, 0) << w.out;
    EXPECT_EQ(std::count(w.out.begin(), w.out.end(), '\n'), 12);
}

TEST_F(Cli, ExperimentIsReproducible) {
    const json cfg{{"schema_version", 1},
                   {"name", "tiny"},
                   {"relay_densities", {0.0, 0.05}},
                   {"trials", 4},
                   {"schemes", {"none", "all", "genetic"}},
                   {"genetic", {{"generations", 10}}},
                   {"seed", 3}};
    const fs::path cfg_path = write("cfg.json", cfg);
    const CliRun a = run("experiment --quiet --config " + cfg_path.string() + " --out " +
                      (dir_ / "a").string());
    const CliRun b = run("experiment --quiet --workers 2 --config " + cfg_path.string() + " --out " +
                      (dir_ / "b").string());
    ASSERT_EQ(a.code, 0) << a.out;
    ASSERT_EQ(b.code, 0) << b.out;
    for (const char* f : {"trials.csv", "summary.csv", "rates.csv", "eta_cdf.dat", "gain_cdf.dat"}) {
        EXPECT_EQ(slurp(dir_ / "a" / f), slurp(dir_ / "b" / f)) << f;
    }
    const json manifest = json::parse(slurp(dir_ / "a" / "manifest.json"));
    EXPECT_EQ(manifest.at("master_seed"), 3);
    EXPECT_EQ(manifest.at("trials"), 8);
    EXPECT_EQ(manifest.at("excluded"), 0);
}
