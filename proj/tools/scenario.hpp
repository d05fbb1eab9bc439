#pragma once

#include "cvteleport/cvteleport.hpp"

#include "json.hpp"

#include <optional>
#include <string>
#include <vector>

namespace cvt::cli {

/// Everything one invocation needs. Flags override config-file entries;
/// the file format is flat key=value lines with '#' comments.
struct ScenarioConfig {
    GaussianState input = coherent_state();
    Resource resource = ResourceParams(0.5, 0.5, 0.0, 0.0);
    std::string resource_label = "0.5,0.5,0,0";
    bool resource_set = false;
    ProtocolVariant variant = ProtocolVariant::Standard;
    std::optional<std::uint64_t> seed;  // unresolved: GT_SEED then 42
    std::int64_t samples = 1'000'000;
    int streams = 8;
    std::optional<PhasePoint> beta_center;
    double beta_tolerance = 0.05;
};

/// Thrown on malformed user input; the CLI maps it to exit code 2.
class ParseError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// "a,b,c1,c2" | "tmss:R" | "mirror-tmss:R" | "epr" | "mirror" | "point".
Resource parse_resource(const std::string& text);

/// "coherent" or "q,p,vqq,vqp,vpp".
GaussianState parse_input(const std::string& text);

/// Comma-separated doubles, exactly `count` of them.
std::vector<double> parse_numbers(const std::string& text, size_t count, const char* what);

/// Flat key=value config file. Unknown keys are an error.
void apply_config_file(const std::string& path, ScenarioConfig& cfg);

nlohmann::json realizability_json(const Resource& resource);
nlohmann::json state_json(const GaussianState& state);

/// The teleport report: realizability, channel noise, averaged output,
/// fidelity, and the perfection flags.
nlohmann::json teleport_report(const ScenarioConfig& cfg);

/// The Monte Carlo report: empirical moments with standard errors, the
/// analytic reference, and per-quantity z-scores.
nlohmann::json mc_report(const ScenarioConfig& cfg);

/// One fidelity-sweep row, computed through the full analytic pipeline
/// (averaged output then overlap fidelity), not the closed forms.
struct SweepRow {
    double r;
    double f_tmss;
    double f_mirror;
};

std::vector<SweepRow> sweep_rows(double r_min, double r_max, int steps);

/// CSV with header `r,f_tmss,f_mirror`, 12 significant digits, LF endings.
std::string sweep_csv(const std::vector<SweepRow>& rows);

}  // namespace cvt::cli
