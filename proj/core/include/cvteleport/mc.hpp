#pragma once

#include "cvteleport/teleport.hpp"

#include <cstdint>

namespace cvt::mc {

/// Reproducibility contract: identical (seed, samples, streams) produce
/// bit-identical results regardless of how many worker threads execute the
/// streams. The sample index space is split contiguously across streams,
/// each stream owns a generator seeded by a splitmix-style derivation from
/// (seed, stream index), and per-stream accumulators are merged in stream
/// order.
struct McConfig {
    std::uint64_t seed = 42;
    std::int64_t samples = 1'000'000;
    int streams = 8;
};

/// Indices into McEstimate::standard_errors.
enum SeIndex : int {
    kSeMeanQ = 0,
    kSeMeanP = 1,
    kSeVarQ = 2,
    kSeCovQP = 3,
    kSeVarP = 4,
    kSeFidelity = 5,
    kSeCount = 6
};

/// Empirical moments of the sampled output ensemble.
///
/// fidelity_estimate is the Gaussian-moment plug-in: fit (mean, cov) to the
/// ensemble and take the closed-form overlap fidelity against the analytic
/// input. Its standard error comes from batch means over the streams and
/// is NaN when fewer than two streams carry enough samples.
struct McEstimate {
    Eigen::Vector2d mean;
    Eigen::Matrix2d cov;
    double fidelity_estimate;
    Eigen::VectorXd standard_errors;  // kSeCount entries, see SeIndex
    std::int64_t samples = 0;         // requested
    std::int64_t accepted = 0;        // retained (== samples unless windowed)
    double acceptance_rate = 1.0;
};

/// Rejection window around a measurement outcome.
struct BetaWindow {
    PhasePoint center;
    double tolerance;  // half-width per coordinate, > 0
};

/// Sample the protocol end to end: draw the input point and the resource
/// pair independently, measure beta per the variant, displace the receiving
/// mode, record the output point. Exact limits are sampled through their
/// constraint structure (the Epr/Mirror internal coordinates use a wide
/// N(0, 100 I) proposal; the recorded output is proposal-independent).
/// Throws ImproperLimitCombination for limit/variant mismatches and
/// NonPositiveSamples for an empty sample plan.
McEstimate run_protocol(const GaussianState& input, const Resource& resource,
                        ProtocolVariant variant, const McConfig& cfg);

/// Like run_protocol but keeps only samples whose beta lands inside the
/// window — the rejection-sampling realization of the delta measurement.
/// Finite resources only (ExactLimitUnsupported). Throws WindowTooNarrow
/// when fewer than 1000 samples are accepted.
McEstimate conditioned_run(const GaussianState& input, const Resource& resource,
                           ProtocolVariant variant, const BetaWindow& window,
                           const McConfig& cfg);

}  // namespace cvt::mc
