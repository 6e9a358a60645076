#include <catch_amalgamated.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "cli.hpp"

using namespace sl2;

namespace {

struct Run {
    int code;
    std::string out;
    std::string err;
};

Run run(const std::vector<std::string>& args) {
    std::ostringstream out, err;
    const int code = cli::run_cli(args, out, err);
    return {code, out.str(), err.str()};
}

std::string temp_path(const std::string& name) {
    return (std::filesystem::temp_directory_path() / ("sl2osc_test_" + name)).string();
}

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace

TEST_CASE("catalog listing") {
    const auto all = run({"catalog"});
    CHECK(all.code == 0);
    for (auto k : catalog::kAllKinds) CHECK(all.out.find(std::string(catalog::name(k))) != std::string::npos);

    const auto d = run({"catalog", "--kind", "darboux3-A"});
    CHECK(d.code == 0);
    CHECK(d.out.find("a > 0") != std::string::npos);
    CHECK(d.out.find("(a + q^2)") != std::string::npos);

    const auto g = run({"catalog", "--kind", "euclidean-osc", "--deltas", "0.1"});
    CHECK(g.code == 0);
    CHECK(g.out.find("radial Garnier") != std::string::npos);

    CHECK(run({"catalog", "--kind", "nope"}).code == 1);
}

TEST_CASE("verify a perturbed curved oscillator") {
    const auto r = run({"verify", "--kind", "beltrami-osc", "--n", "4", "--kappa", "-1", "--omega", "1", "--deltas",
                        "0.2", "--seed", "7", "--samples", "60", "--workers", "2"});
    INFO(r.err);
    CHECK(r.code == 0);
    const auto j = nlohmann::json::parse(r.out);
    CHECK(j["verdict_qms"] == "pass");
    CHECK(j["verdict_ms"] == "not-applicable");
    CHECK(j["seed"] == 7);
}

TEST_CASE("verify a DSL Darboux Hamiltonian with its extra integrals") {
    const auto r = run({"verify", "--expr", "(Jp+omega^2*Jm)/(a+Jm)", "--params", "omega=1,a=1", "--n", "3", "--ms",
                        "--extra", "darboux", "--samples", "60"});
    INFO(r.err);
    CHECK(r.code == 0);
    CHECK(nlohmann::json::parse(r.out)["verdict_ms"] == "pass");
}

TEST_CASE("claimed MS on a perturbed system exits with a numeric failure") {
    const auto r = run({"verify", "--kind", "euclidean-osc", "--n", "3", "--omega", "1", "--deltas", "0.1", "--ms",
                        "--samples", "40"});
    CHECK(r.code == 2);
    const auto j = nlohmann::json::parse(r.out);
    CHECK(j["verdict_ms"] == "fail");
    CHECK(j["verdict_qms"] == "pass");
    CHECK(r.err.find("candidate") != std::string::npos);
}

TEST_CASE("expression parse errors exit with 3 and a position") {
    const auto r = run({"verify", "--expr", "Jm + )"});
    CHECK(r.code == 3);
    CHECK(r.err.find("column 6") != std::string::npos);
    CHECK(run({"verify", "--expr", "Jm + kappa"}).code == 3);
}

TEST_CASE("usage errors exit with 1") {
    CHECK(run({}).code == 1);
    CHECK(run({"frobnicate"}).code == 1);
    CHECK(run({"verify", "--kind", "nope"}).code == 1);
    CHECK(run({"verify", "--kind", "darboux3-A", "--a", "-1"}).code == 1);
    CHECK(run({"verify", "--samples", "0"}).code == 1);
    CHECK(run({"verify", "--deltas", "0.1,x"}).code == 1);
    CHECK(run({"verify", "--expr", "Jm", "--params", "a"}).code == 1);
    CHECK(run({"verify", "--expr", "Jm", "--ms"}).code == 1);
    CHECK(run({"simulate", "--q", "1,0", "--p", "0"}).code == 1);
    CHECK(run({"simulate", "--q", "1", "--p", "0", "--dt", "0"}).code == 1);
    CHECK(run({"--help"}).code == 0);
}

TEST_CASE("reports are byte-identical for a fixed seed") {
    const std::vector<std::string> args{"verify", "--kind", "darboux3-B", "--n", "3", "--omega", "1",
                                        "--deltas", "0.1,0.01", "--seed", "11", "--samples", "50"};
    const auto a = run(args), b = run(args);
    CHECK(a.code == 0);
    CHECK(a.out == b.out);
    auto with_workers = args;
    with_workers.insert(with_workers.end(), {"--workers", "3"});
    CHECK(run(with_workers).out == a.out);
}

TEST_CASE("verify writes the report to a file") {
    const auto path = temp_path("report.json");
    const auto r = run({"verify", "--kind", "euclidean-osc", "--n", "2", "--omega", "1", "--samples", "30", "--out", path});
    CHECK(r.code == 0);
    CHECK(r.out.find("verdict_qms: pass") != std::string::npos);
    CHECK(nlohmann::json::parse(slurp(path))["n"] == 2);
    std::remove(path.c_str());
}

TEST_CASE("config file supplies values the flags do not override") {
    const auto cfg = temp_path("run.cfg");
    {
        std::ofstream f(cfg);
        f << catalog::to_kv({catalog::Kind::beltrami_osc, 3, 1.0, -0.5, 1.0, {0.2, 0.01}});
        f << "seed = 5\nsamples = 40\n";
    }
    const auto r = run({"verify", "--config", cfg, "--n", "2"});
    INFO(r.err);
    REQUIRE(r.code == 0);
    const auto j = nlohmann::json::parse(r.out);
    CHECK(j["system"]["kind"] == "beltrami-osc");
    CHECK(j["system"]["kappa"] == -0.5);
    CHECK(j["system"]["deltas"].size() == 2);
    CHECK(j["n"] == 2);
    CHECK(j["seed"] == 5);
    CHECK(j["samples"] == 40);
    std::remove(cfg.c_str());
}

TEST_CASE("seed falls back to the environment") {
    const std::vector<std::string> args{"verify", "--kind", "euclidean-osc", "--n", "2", "--samples", "20"};
    ::setenv("SL2OSC_SEED", "99", 1);
    const auto r = run(args);
    ::unsetenv("SL2OSC_SEED");
    CHECK(nlohmann::json::parse(r.out)["seed"] == 99);
    CHECK(nlohmann::json::parse(run(args).out)["seed"] == 1);
}

TEST_CASE("simulate writes a trajectory and a drift summary") {
    const auto path = temp_path("traj.csv");
    const auto r = run({"simulate", "--kind", "euclidean-osc", "--omega", "1", "--q", "1,0", "--p", "0,1", "--dt",
                        "1e-3", "--t-end", "50", "--watch", "H,C2", "--stride", "1000", "--out", path});
    INFO(r.err);
    REQUIRE(r.code == 0);
    CHECK(r.out.find("max drift C2") != std::string::npos);
    std::istringstream summary(r.out);
    for (std::string line; std::getline(summary, line);) {
        if (line.rfind("max drift ", 0) != 0) continue;
        CHECK(std::stod(line.substr(line.find(':') + 1)) <= 1e-6);
    }
    std::istringstream csv(slurp(path));
    std::string header;
    std::getline(csv, header);
    CHECK(header == "t,q1,q2,p1,p2,H,C2");
    int rows = 0;
    for (std::string line; std::getline(csv, line);) ++rows;
    CHECK(rows == 51);
    std::remove(path.c_str());
}

TEST_CASE("simulate shows the stale extra integral drifting") {
    const auto r = run({"simulate", "--kind", "darboux3-B", "--omega", "1", "--deltas", "0.5", "--q", "0.4,-0.2,0.1",
                        "--p", "0.1,0.3,0.2", "--dt", "1e-3", "--t-end", "10", "--watch", "universal,I1"});
    INFO(r.err);
    REQUIRE(r.code == 0);
    std::istringstream summary(r.out);
    for (std::string line; std::getline(summary, line);) {
        if (line.rfind("max drift ", 0) != 0) continue;
        const double d = std::stod(line.substr(line.find(':') + 1));
        if (line.find("I1") != std::string::npos)
            CHECK(d > 1e-3);
        else
            CHECK(d <= 1e-6);
    }
}

TEST_CASE("simulate with zero horizon prints the initial row") {
    const auto r = run({"simulate", "--kind", "euclidean-osc", "--omega", "1", "--q", "1", "--p", "0", "--t-end", "0",
                        "--watch", "Jm", "--out", "-"});
    CHECK(r.code == 0);
    CHECK(r.out == "t,q1,p1,H,Jm\n0,1,0,0.5,1\n");
}

TEST_CASE("simulate rejects initial states outside the chart") {
    const auto r = run({"simulate", "--kind", "beltrami-osc", "--kappa", "-1", "--omega", "1", "--q", "1.2", "--p", "0"});
    CHECK(r.code == 1);
    CHECK(r.err.find("domain") != std::string::npos);
}

TEST_CASE("simulate reports step failures with their time") {
    const auto r = run({"simulate", "--kind", "free-beltrami", "--kappa", "1", "--q", "0", "--p", "1", "--dt", "1e-2",
                        "--t-end", "5"});
    CHECK(r.code == 2);
    CHECK(r.err.find("at t = ") != std::string::npos);
}

TEST_CASE("simulate a DSL Hamiltonian") {
    const auto r = run({"simulate", "--expr", "Jp/2 + omega^2*Jm/2", "--params", "omega=2", "--extra", "euclidean",
                        "--q", "1,0.5", "--p", "0,0.3", "--t-end", "5", "--watch", "extra,L1_2"});
    INFO(r.err);
    CHECK(r.code == 0);
    CHECK(r.out.find("max drift I2") != std::string::npos);
    CHECK(r.out.find("max drift L1_2") != std::string::npos);
}

TEST_CASE("bracket table") {
    const auto r = run({"bracket-table", "--set", "sl2", "--n", "2", "--format", "json", "--seed", "4"});
    REQUIRE(r.code == 0);
    const auto j = nlohmann::json::parse(r.out);
    const double jm = j["values"][0], jp = j["values"][1], j3 = j["values"][2];
    CHECK(std::abs(double(j["brackets"][0][1]) - 4 * j3) <= 1e-12 * (1 + std::abs(j3)));
    CHECK(std::abs(double(j["brackets"][2][1]) - 2 * jp) <= 1e-12 * (1 + jp));
    CHECK(std::abs(double(j["brackets"][2][0]) + 2 * jm) <= 1e-12 * (1 + jm));
    const auto t = run({"bracket-table", "--set", "so", "--n", "3"});
    CHECK(t.code == 0);
    CHECK(t.out.find("L2_3") != std::string::npos);
    CHECK(run({"bracket-table", "--set", "nope"}).code == 1);
}
