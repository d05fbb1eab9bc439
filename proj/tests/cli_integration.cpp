#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "json.hpp"

#include <sys/wait.h>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <string>

// End-to-end checks against the installed binary: flag handling, exit
// codes, report schemas, and byte-level reproducibility. The binary path
// comes in through a compile definition.
namespace {

struct RunResult {
    int exit_code;
    std::string out;
};

RunResult run_cli(const std::string& args, const std::string& env_prefix = "") {
    std::string cmd;
    if (!env_prefix.empty()) cmd += "env " + env_prefix + " ";
    cmd += std::string(CVT_CLI_BIN) + " " + args + " 2>/dev/null";
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    std::string out;
    char buf[4096];
    size_t n = 0;
    while ((n = fread(buf, 1, sizeof(buf), pipe)) > 0) out.append(buf, n);
    const int status = pclose(pipe);
    return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, out};
}

nlohmann::json run_json(const std::string& args, int expected_exit = 0) {
    const auto res = run_cli(args);
    REQUIRE(res.exit_code == expected_exit);
    return nlohmann::json::parse(res.out);
}

}  // namespace

TEST_SUITE_BEGIN("cli_integration");

TEST_CASE("teleport with a squeezed resource reports the known fidelity") {
    const auto j = run_json("teleport --resource tmss:1 --input coherent");
    CHECK(std::abs(j["fidelity"].get<double>() - 0.8807970779778823) < 1e-6);
    CHECK(j["realizability"]["verdict"] == "Physical");
    CHECK(j["realizability"]["mirror_entangled"].get<bool>());
    CHECK(j["variant"] == "standard");
    CHECK(j["perfect"].get<bool>() == false);
}

TEST_CASE("teleport with the EPR limit is perfect") {
    const auto j = run_json("teleport --resource epr --input coherent");
    CHECK(j["fidelity"].get<double>() == 1.0);
    CHECK(j["perfect"].get<bool>());
    CHECK(j["ensemble_perfect"].get<bool>());
    CHECK(j["noise_q"].get<double>() == 0.0);
}

TEST_CASE("teleport with the null-covariance tuple is ensemble-only") {
    const auto j = run_json("teleport --resource 0,0,0,0 --input coherent");
    CHECK(j["realizability"]["verdict"] == "Nonphysical");
    CHECK(j["ensemble_perfect"].get<bool>());
    CHECK(j["perfect"].get<bool>() == false);
}

TEST_CASE("engine errors exit 3 with the error name in the report") {
    const auto res = run_cli("teleport --resource mirror --variant standard");
    CHECK(res.exit_code == 3);
    const auto j = nlohmann::json::parse(res.out);
    CHECK(j["error"] == "ImproperLimitCombination");
}

TEST_CASE("parse errors exit 2") {
    CHECK(run_cli("teleport --resource bogus").exit_code == 2);
    CHECK(run_cli("teleport").exit_code == 2);
    CHECK(run_cli("check --resource 1,2,3").exit_code == 2);
    CHECK(run_cli("mc --resource tmss:1 --samples 100").exit_code == 2);
    CHECK(run_cli("nonsense").exit_code == 2);
    CHECK(run_cli("sweep 2 1 10").exit_code == 2);
}

TEST_CASE("check reports all four products with the saturated set") {
    const auto vac = run_json("check --resource 0.5,0.5,0,0");
    CHECK(vac["verdict"] == "Physical");
    CHECK(vac["saturated"].size() == 4);

    const auto tmss = run_json("check --resource tmss:2");
    CHECK(tmss["verdict"] == "Physical");
    CHECK(tmss["mirror_entangled"].get<bool>());

    const auto mirror = run_json("check --resource mirror-tmss:2");
    CHECK(mirror["verdict"] == "Nonphysical");
    CHECK(mirror["diff_product"].get<double>() ==
          doctest::Approx(std::exp(-8.0)).epsilon(1e-9));

    const auto epr = run_json("check --resource epr");
    CHECK(epr["single_mode_2"].is_null());
    CHECK(epr["verdict"] == "Physical");
}

TEST_CASE("sweep writes the gnuplot-ready CSV") {
    const std::string path = "/tmp/cvteleport_sweep_test.csv";
    const auto res = run_cli("sweep 0 3 61 " + path);
    REQUIRE(res.exit_code == 0);

    std::ifstream in(path, std::ios::binary);
    REQUIRE(in.good());
    std::string content((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    CHECK(content.rfind("r,f_tmss,f_mirror\n", 0) == 0);
    CHECK(content.find('\r') == std::string::npos);

    int rows = 0;
    double prev_t = -1.0, prev_m = 2.0;
    std::istringstream lines(content);
    std::string line;
    std::getline(lines, line);  // header
    while (std::getline(lines, line)) {
        double r = 0, ft = 0, fm = 0;
        REQUIRE(std::sscanf(line.c_str(), "%lf,%lf,%lf", &r, &ft, &fm) == 3);
        CHECK(std::isfinite(ft));
        CHECK(ft > prev_t);   // 1/(1+e^-2r) increases
        CHECK(fm < prev_m);   // 1/(2 cosh r) decreases
        CHECK(std::abs(ft - 1.0 / (1.0 + std::exp(-2.0 * r))) < 1e-11);
        CHECK(std::abs(fm - 1.0 / (2.0 * std::cosh(r))) < 1e-11);
        prev_t = ft;
        prev_m = fm;
        ++rows;
    }
    CHECK(rows == 61);
    std::remove(path.c_str());

    CHECK(run_cli("sweep 0 3 61 /nonexistent_dir_xyz/out.csv").exit_code == 4);
}

TEST_CASE("mc runs are byte-identical for identical configurations") {
    const std::string args = "mc --resource tmss:1 --input coherent --samples 20000 --seed 11";
    const auto a = run_cli(args);
    const auto b = run_cli(args);
    REQUIRE(a.exit_code == 0);
    CHECK(a.out == b.out);

    // GT_SEED is the fallback seed source.
    const auto via_env =
        run_cli("mc --resource tmss:1 --input coherent --samples 20000", "GT_SEED=11");
    CHECK(via_env.out == a.out);

    const auto j = nlohmann::json::parse(a.out);
    CHECK(j["seed"].get<std::uint64_t>() == 11);
    for (const auto& [key, value] : j["z_scores"].items()) {
        if (value.is_null()) continue;
        CHECK(std::abs(value.get<double>()) < 6.0);
    }
}

TEST_CASE("mc with the point resource flags single-shot deltas") {
    const auto j = run_json("mc --resource point --samples 20000 --seed 5");
    CHECK(j["single_shot_delta"].get<bool>());
    CHECK(std::abs(j["z_scores"]["mean_q"].get<double>()) < 5.0);
    CHECK(std::abs(j["z_scores"]["var_q"].get<double>()) < 5.0);
    CHECK(run_cli("mc --resource epr --variant classical --samples 20000").exit_code == 3);
}

TEST_CASE("config files feed every subcommand, flags take precedence") {
    const std::string path = "/tmp/cvteleport_itest_config.txt";
    {
        std::ofstream out(path);
        out << "resource = tmss:1\nsamples = 20000\nseed = 11\n";
    }
    const auto from_file = run_cli("mc --config " + path + " --input coherent");
    const auto from_flags =
        run_cli("mc --resource tmss:1 --input coherent --samples 20000 --seed 11");
    CHECK(from_file.out == from_flags.out);

    // A flag overrides the file entry.
    const auto overridden = run_cli("mc --config " + path + " --input coherent --seed 12");
    CHECK(nlohmann::json::parse(overridden.out)["seed"].get<std::uint64_t>() == 12);
    std::remove(path.c_str());
}

TEST_SUITE_END();
