#include "scenario.hpp"

#include "CLI11.hpp"

#include <cstdlib>
#include <fstream>
#include <iostream>

namespace {

using cvt::cli::ParseError;
using cvt::cli::ScenarioConfig;

struct CommonFlags {
    std::string config_path;
    std::string resource;
    std::string input;
    std::string input_mean;
    std::string input_cov;
    std::string variant;
};

void add_common(CLI::App* cmd, CommonFlags& flags) {
    cmd->add_option("--config", flags.config_path, "flat key=value config file");
    cmd->add_option("--resource", flags.resource,
                    "a,b,c1,c2 | tmss:R | mirror-tmss:R | epr | mirror | point");
    cmd->add_option("--input", flags.input, "coherent | q,p,vqq,vqp,vpp (default coherent)");
    cmd->add_option("--input-mean", flags.input_mean, "q,p input mean override");
    cmd->add_option("--input-cov", flags.input_cov, "vqq,vqp,vpp input covariance override");
    cmd->add_option("--variant", flags.variant, "standard | classical (default standard)");
}

ScenarioConfig build_scenario(const CommonFlags& flags, bool resource_required) {
    ScenarioConfig cfg;
    if (!flags.config_path.empty()) {
        cvt::cli::apply_config_file(flags.config_path, cfg);
    }
    if (!flags.resource.empty()) {
        cfg.resource = cvt::cli::parse_resource(flags.resource);
        cfg.resource_label = flags.resource;
        cfg.resource_set = true;
    }
    if (resource_required && !cfg.resource_set) {
        throw ParseError("--resource is required (or provide it via --config)");
    }
    if (!flags.input.empty()) cfg.input = cvt::cli::parse_input(flags.input);
    if (!flags.input_mean.empty()) {
        const auto v = cvt::cli::parse_numbers(flags.input_mean, 2, "--input-mean");
        Eigen::VectorXd mean(2);
        mean << v[0], v[1];
        cfg.input = cvt::GaussianState(mean, cfg.input.cov());
    }
    if (!flags.input_cov.empty()) {
        const auto v = cvt::cli::parse_numbers(flags.input_cov, 3, "--input-cov");
        Eigen::MatrixXd cov(2, 2);
        cov << v[0], v[1], v[1], v[2];
        try {
            cfg.input = cvt::GaussianState(cfg.input.mean(), cov);
        } catch (const cvt::Error& e) {
            throw ParseError(std::string("--input-cov: ") + e.what());
        }
    }
    if (!flags.variant.empty()) {
        if (flags.variant == "standard") {
            cfg.variant = cvt::ProtocolVariant::Standard;
        } else if (flags.variant == "classical") {
            cfg.variant = cvt::ProtocolVariant::ClassicalVariant;
        } else {
            throw ParseError("--variant must be standard or classical");
        }
    }
    return cfg;
}

void print_json(const nlohmann::json& j) { std::cout << j.dump(2) << "\n"; }

int engine_error(const cvt::Error& e) {
    print_json({{"error", e.kind()}, {"message", e.what()}});
    return 3;
}

// Seed precedence: --seed flag, then the config file, then GT_SEED, then 42.
std::uint64_t resolve_seed(bool flag_given, std::uint64_t flag_seed,
                           const std::optional<std::uint64_t>& config_seed) {
    if (flag_given) return flag_seed;
    if (config_seed) return *config_seed;
    if (const char* env = std::getenv("GT_SEED")) {
        try {
            return std::stoull(env);
        } catch (const std::exception&) {
            throw ParseError(std::string("GT_SEED is not a valid seed: '") + env + "'");
        }
    }
    return 42;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Gaussian phase-space teleportation toolkit"};
    app.require_subcommand(1);

    CommonFlags teleport_flags;
    auto* teleport = app.add_subcommand(
        "teleport", "classify a resource and compute the averaged teleported state");
    add_common(teleport, teleport_flags);

    CommonFlags check_flags;
    auto* check = app.add_subcommand("check", "uncertainty-bound realizability report");
    check->add_option("--resource", check_flags.resource,
                      "a,b,c1,c2 | tmss:R | mirror-tmss:R | epr | mirror | point");

    double r_min = 0.0, r_max = 3.0;
    int steps = 61;
    std::string sweep_out;
    auto* sweep = app.add_subcommand("sweep", "fidelity sweep over the squeezing families (CSV)");
    sweep->add_option("r_min", r_min, "lower squeezing bound")->required();
    sweep->add_option("r_max", r_max, "upper squeezing bound")->required();
    sweep->add_option("steps", steps, "grid size (>= 2)")->required();
    sweep->add_option("out", sweep_out, "output path (stdout when omitted)");

    CommonFlags mc_flags;
    std::int64_t mc_samples = 1'000'000;
    std::uint64_t mc_seed = 0;
    int mc_streams = 8;
    std::string mc_beta;
    double mc_beta_tol = 0.05;
    auto* mc = app.add_subcommand("mc", "Monte Carlo validation run against the analytic engine");
    add_common(mc, mc_flags);
    auto* samples_opt = mc->add_option("--samples", mc_samples, "sample count (>= 10000)");
    auto* seed_opt = mc->add_option("--seed", mc_seed, "RNG seed (default: GT_SEED env, then 42)");
    auto* streams_opt =
        mc->add_option("--streams", mc_streams, "deterministic stream count (default 8)");
    mc->add_option("--beta", mc_beta, "q,p window center: validate the conditional state");
    auto* beta_tol_opt =
        mc->add_option("--beta-tol", mc_beta_tol, "window half-width (default 0.05)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);  // --help
        std::cerr << e.what() << "\n";
        return 2;
    }

    try {
        if (teleport->parsed()) {
            const auto cfg = build_scenario(teleport_flags, true);
            print_json(cvt::cli::teleport_report(cfg));
            return 0;
        }

        if (check->parsed()) {
            if (check_flags.resource.empty()) {
                throw ParseError("--resource is required");
            }
            print_json(cvt::cli::realizability_json(cvt::cli::parse_resource(check_flags.resource)));
            return 0;
        }

        if (sweep->parsed()) {
            const auto rows = cvt::cli::sweep_rows(r_min, r_max, steps);
            const std::string csv = cvt::cli::sweep_csv(rows);
            if (sweep_out.empty()) {
                std::cout << csv;
            } else {
                std::ofstream out(sweep_out, std::ios::binary);
                if (!out || !(out << csv) || !out.flush()) {
                    std::cerr << "cannot write '" << sweep_out << "'\n";
                    return 4;
                }
            }
            return 0;
        }

        if (mc->parsed()) {
            auto cfg = build_scenario(mc_flags, true);
            if (samples_opt->count() > 0) cfg.samples = mc_samples;
            if (streams_opt->count() > 0) cfg.streams = mc_streams;
            cfg.seed = resolve_seed(seed_opt->count() > 0, mc_seed, cfg.seed);
            if (!mc_beta.empty()) {
                const auto v = cvt::cli::parse_numbers(mc_beta, 2, "--beta");
                cfg.beta_center = cvt::PhasePoint{v[0], v[1]};
            }
            if (beta_tol_opt->count() > 0) cfg.beta_tolerance = mc_beta_tol;
            if (cfg.samples < 10000) {
                throw ParseError("--samples must be at least 10000");
            }
            print_json(cvt::cli::mc_report(cfg));
            return 0;
        }
    } catch (const ParseError& e) {
        std::cerr << e.what() << "\n";
        return 2;
    } catch (const cvt::Error& e) {
        return engine_error(e);
    }
    return 2;
}
