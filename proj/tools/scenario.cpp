#include "scenario.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

namespace cvt::cli {

namespace {

double parse_double(const std::string& text, const char* what) {
    try {
        size_t pos = 0;
        const double v = std::stod(text, &pos);
        while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
        if (pos != text.size() || !std::isfinite(v)) {
            throw ParseError(std::string(what) + ": '" + text + "' is not a finite number");
        }
        return v;
    } catch (const ParseError&) {
        throw;
    } catch (const std::exception&) {
        throw ParseError(std::string(what) + ": '" + text + "' is not a number");
    }
}

std::vector<std::string> split(const std::string& text, char sep) {
    std::vector<std::string> out;
    std::string item;
    std::istringstream in(text);
    while (std::getline(in, item, sep)) out.push_back(item);
    if (!text.empty() && text.back() == sep) out.emplace_back();
    return out;
}

std::string trim(const std::string& s) {
    const auto begin = s.find_first_not_of(" \t\r");
    if (begin == std::string::npos) return "";
    const auto end = s.find_last_not_of(" \t\r");
    return s.substr(begin, end - begin + 1);
}

double named_parameter(const std::string& text, const std::string& prefix) {
    const auto value = text.substr(prefix.size());
    const double r = parse_double(value, "squeezing parameter");
    if (r < 0.0) {
        throw ParseError("squeezing parameter must be >= 0, got " + value);
    }
    return r;
}

}  // namespace

std::vector<double> parse_numbers(const std::string& text, size_t count, const char* what) {
    const auto parts = split(text, ',');
    if (parts.size() != count) {
        throw ParseError(std::string(what) + ": expected " + std::to_string(count) +
                         " comma-separated numbers, got '" + text + "'");
    }
    std::vector<double> out;
    out.reserve(count);
    for (const auto& p : parts) out.push_back(parse_double(trim(p), what));
    return out;
}

Resource parse_resource(const std::string& text) {
    const std::string t = trim(text);
    if (t == "epr") return LimitKind::Epr;
    if (t == "mirror") return LimitKind::Mirror;
    if (t == "point") return LimitKind::ClassicalPoint;
    if (t.rfind("tmss:", 0) == 0) {
        return make_tmss(named_parameter(t, "tmss:")).resource;
    }
    if (t.rfind("mirror-tmss:", 0) == 0) {
        return make_mirror_tmss(named_parameter(t, "mirror-tmss:")).resource;
    }
    const auto v = parse_numbers(t, 4, "resource");
    try {
        return ResourceParams(v[0], v[1], v[2], v[3]);
    } catch (const Error& e) {
        throw ParseError(std::string("resource: ") + e.what());
    }
}

GaussianState parse_input(const std::string& text) {
    const std::string t = trim(text);
    if (t == "coherent") return coherent_state();
    const auto v = parse_numbers(t, 5, "input (q,p,vqq,vqp,vpp)");
    Eigen::VectorXd mean(2);
    mean << v[0], v[1];
    Eigen::MatrixXd cov(2, 2);
    cov << v[2], v[3], v[3], v[4];
    try {
        return {std::move(mean), std::move(cov)};
    } catch (const Error& e) {
        throw ParseError(std::string("input: ") + e.what());
    }
}

void apply_config_file(const std::string& path, ScenarioConfig& cfg) {
    std::ifstream in(path);
    if (!in) {
        throw ParseError("cannot open config file '" + path + "'");
    }
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const std::string stripped = trim(line);
        if (stripped.empty() || stripped[0] == '#') continue;
        const auto eq = stripped.find('=');
        if (eq == std::string::npos) {
            throw ParseError("config line " + std::to_string(lineno) + ": expected key=value");
        }
        const std::string key = trim(stripped.substr(0, eq));
        const std::string value = trim(stripped.substr(eq + 1));
        if (key == "resource") {
            cfg.resource = parse_resource(value);
            cfg.resource_label = value;
            cfg.resource_set = true;
        } else if (key == "input") {
            cfg.input = parse_input(value);
        } else if (key == "input_mean") {
            const auto v = parse_numbers(value, 2, "input_mean");
            Eigen::VectorXd mean(2);
            mean << v[0], v[1];
            cfg.input = GaussianState(mean, cfg.input.cov());
        } else if (key == "input_cov") {
            const auto v = parse_numbers(value, 3, "input_cov");
            Eigen::MatrixXd cov(2, 2);
            cov << v[0], v[1], v[1], v[2];
            try {
                cfg.input = GaussianState(cfg.input.mean(), cov);
            } catch (const Error& e) {
                throw ParseError(std::string("input_cov: ") + e.what());
            }
        } else if (key == "variant") {
            if (value == "standard") {
                cfg.variant = ProtocolVariant::Standard;
            } else if (value == "classical") {
                cfg.variant = ProtocolVariant::ClassicalVariant;
            } else {
                throw ParseError("variant must be standard or classical, got '" + value + "'");
            }
        } else if (key == "samples") {
            cfg.samples = static_cast<std::int64_t>(parse_double(value, "samples"));
        } else if (key == "seed") {
            cfg.seed = static_cast<std::uint64_t>(parse_double(value, "seed"));
        } else if (key == "streams") {
            cfg.streams = static_cast<int>(parse_double(value, "streams"));
        } else if (key == "beta") {
            const auto v = parse_numbers(value, 2, "beta");
            cfg.beta_center = PhasePoint{v[0], v[1]};
        } else if (key == "beta_tol") {
            cfg.beta_tolerance = parse_double(value, "beta_tol");
        } else {
            throw ParseError("config line " + std::to_string(lineno) + ": unknown key '" + key +
                             "'");
        }
    }
}

nlohmann::json realizability_json(const Resource& resource) {
    const RealizabilityReport rep = check(resource);
    nlohmann::json saturated = nlohmann::json::array();
    for (const auto b : rep.saturated) saturated.push_back(to_string(b));
    // Non-finite products (the divergent limits) serialize as null.
    return {
        {"single_mode_2", rep.single_mode_2},
        {"single_mode_3", rep.single_mode_3},
        {"sum_product", rep.sum_product},
        {"diff_product", rep.diff_product},
        {"verdict", to_string(rep.verdict)},
        {"saturated", saturated},
        {"mirror_entangled", rep.mirror_entangled},
    };
}

nlohmann::json state_json(const GaussianState& state) {
    nlohmann::json mean = nlohmann::json::array();
    for (Eigen::Index i = 0; i < state.mean().size(); ++i) mean.push_back(state.mean()(i));
    nlohmann::json cov = nlohmann::json::array();
    for (Eigen::Index i = 0; i < state.cov().rows(); ++i) {
        nlohmann::json row = nlohmann::json::array();
        for (Eigen::Index j = 0; j < state.cov().cols(); ++j) row.push_back(state.cov()(i, j));
        cov.push_back(row);
    }
    return {{"mean", mean}, {"cov", cov}};
}

nlohmann::json teleport_report(const ScenarioConfig& cfg) {
    const NoisePair noise = added_noise(cfg.resource, cfg.variant);
    const GaussianState averaged = averaged_output(cfg.input, cfg.resource, cfg.variant);
    nlohmann::json out = {
        {"variant", to_string(cfg.variant)},
        {"resource", cfg.resource_label},
        {"realizability", realizability_json(cfg.resource)},
        {"noise_q", noise.q},
        {"noise_p", noise.p},
        {"averaged_output", state_json(averaged)},
        {"fidelity", fidelity(cfg.input, averaged)},
        {"perfect", is_perfect(cfg.resource, cfg.variant)},
        {"ensemble_perfect", is_ensemble_perfect(cfg.resource, cfg.variant)},
    };
    if (cfg.variant == ProtocolVariant::ClassicalVariant) {
        // The measured pair is conjugate; no measuring technique exists.
        out["note"] = "classical variant: not physically measurable";
    }
    return out;
}

namespace {

nlohmann::json estimate_json(const mc::McEstimate& est) {
    using namespace cvt::mc;
    return {
        {"mean", {est.mean(0), est.mean(1)}},
        {"cov",
         {{est.cov(0, 0), est.cov(0, 1)}, {est.cov(1, 0), est.cov(1, 1)}}},
        {"fidelity", est.fidelity_estimate},
        {"standard_errors",
         {{"mean_q", est.standard_errors(kSeMeanQ)},
          {"mean_p", est.standard_errors(kSeMeanP)},
          {"var_q", est.standard_errors(kSeVarQ)},
          {"cov_qp", est.standard_errors(kSeCovQP)},
          {"var_p", est.standard_errors(kSeVarP)},
          {"fidelity", est.standard_errors(kSeFidelity)}}},
        {"accepted", est.accepted},
        {"acceptance_rate", est.acceptance_rate},
    };
}

double zscore(double emp, double ref, double se) {
    if (!(se > 0.0)) return std::numeric_limits<double>::quiet_NaN();
    return (emp - ref) / se;
}

}  // namespace

nlohmann::json mc_report(const ScenarioConfig& cfg) {
    const mc::McConfig run_cfg{cfg.seed.value_or(42), cfg.samples, cfg.streams};

    mc::McEstimate est;
    GaussianState reference = cfg.input;
    nlohmann::json mode;
    if (cfg.beta_center) {
        est = mc::conditioned_run(cfg.input, cfg.resource, cfg.variant,
                                  {*cfg.beta_center, cfg.beta_tolerance}, run_cfg);
        reference = conditional_output(cfg.input, cfg.resource, *cfg.beta_center, cfg.variant);
        mode = {{"mode", "conditioned"},
                {"beta", {cfg.beta_center->q, cfg.beta_center->p}},
                {"beta_tolerance", cfg.beta_tolerance}};
    } else {
        est = mc::run_protocol(cfg.input, cfg.resource, cfg.variant, run_cfg);
        reference = averaged_output(cfg.input, cfg.resource, cfg.variant);
        mode = {{"mode", "averaged"}};
    }

    double ref_fidelity = std::numeric_limits<double>::quiet_NaN();
    try {
        ref_fidelity = fidelity(cfg.input, reference);
    } catch (const DegenerateCovariance&) {
        // Delta-limit reference states have no finite overlap fidelity.
    }

    using namespace cvt::mc;
    nlohmann::json analytic = state_json(reference);
    analytic["fidelity"] = ref_fidelity;

    nlohmann::json z = {
        {"mean_q", zscore(est.mean(0), reference.mean()(0), est.standard_errors(kSeMeanQ))},
        {"mean_p", zscore(est.mean(1), reference.mean()(1), est.standard_errors(kSeMeanP))},
        {"var_q", zscore(est.cov(0, 0), reference.cov()(0, 0), est.standard_errors(kSeVarQ))},
        {"var_p", zscore(est.cov(1, 1), reference.cov()(1, 1), est.standard_errors(kSeVarP))},
        {"cov_qp", zscore(est.cov(0, 1), reference.cov()(0, 1), est.standard_errors(kSeCovQP))},
        {"fidelity",
         zscore(est.fidelity_estimate, ref_fidelity, est.standard_errors(kSeFidelity))},
    };

    nlohmann::json out = {
        {"variant", to_string(cfg.variant)},
        {"resource", cfg.resource_label},
        {"samples", cfg.samples},
        {"seed", cfg.seed.value_or(42)},
        {"streams", cfg.streams},
        {"empirical", estimate_json(est)},
        {"analytic", analytic},
        {"z_scores", z},
        {"single_shot_delta", single_shot_delta(cfg.input, cfg.resource, cfg.variant)},
    };
    out.update(mode);
    return out;
}

std::vector<SweepRow> sweep_rows(double r_min, double r_max, int steps) {
    if (!(r_min >= 0.0) || !(r_max > r_min) || steps < 2) {
        throw ParseError("sweep needs 0 <= r_min < r_max and steps >= 2");
    }
    const GaussianState input = coherent_state();
    std::vector<SweepRow> rows;
    rows.reserve(static_cast<size_t>(steps));
    for (int i = 0; i < steps; ++i) {
        const double r = r_min + (r_max - r_min) * static_cast<double>(i) / (steps - 1);
        const auto tmss = make_tmss(r).resource;
        const auto mirror = make_mirror_tmss(r).resource;
        const double f_tmss =
            fidelity(input, averaged_output(input, tmss, ProtocolVariant::Standard));
        const double f_mirror =
            fidelity(input, averaged_output(input, mirror, ProtocolVariant::Standard));
        rows.push_back({r, f_tmss, f_mirror});
    }
    return rows;
}

std::string sweep_csv(const std::vector<SweepRow>& rows) {
    std::string out = "r,f_tmss,f_mirror\n";
    char buf[128];
    for (const auto& row : rows) {
        std::snprintf(buf, sizeof(buf), "%.12g,%.12g,%.12g\n", row.r, row.f_tmss, row.f_mirror);
        out += buf;
    }
    return out;
}

}  // namespace cvt::cli
