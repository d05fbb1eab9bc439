#include "cvteleport/mc.hpp"

#include "cvteleport/errors.hpp"
#include "cvteleport/gaussian_ops.hpp"

#include <Eigen/Eigenvalues>

#include <atomic>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <thread>
#include <vector>

namespace cvt::mc {

namespace {

// Wide proposal used for the unconstrained internal coordinates of the
// Epr/Mirror limits; the recorded output point does not depend on it.
constexpr double kProposalSigma = 10.0;  // variance 100 per coordinate

// Minimum per-stream sample count admitted to the batch-means fidelity SE.
constexpr int64_t kMinBatchSamples = 32;

uint64_t splitmix64_next(uint64_t& state) {
    state += 0x9E3779B97F4A7C15ULL;
    uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

// Per-stream generator seed: fold the stream index into the base seed and
// whiten twice. Independent of thread scheduling by construction.
uint64_t stream_seed(uint64_t seed, int stream) {
    uint64_t state = seed ^ (0x9E3779B97F4A7C15ULL * static_cast<uint64_t>(stream + 1));
    splitmix64_next(state);
    return splitmix64_next(state);
}

// Box-Muller normal sampler over mt19937_64. Fixed, documented draw order
// so that equal seeds reproduce bit-identical sequences.
class NormalSampler {
public:
    explicit NormalSampler(uint64_t seed) : eng_(seed) {}

    double next() {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        const double u1 = to_unit(eng_());
        const double u2 = to_unit(eng_());
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double t = 2.0 * std::numbers::pi * u2;
        spare_ = r * std::sin(t);
        has_spare_ = true;
        return r * std::cos(t);
    }

private:
    // 53-bit mantissa shifted into (0, 1] so the log stays finite.
    static double to_unit(uint64_t x) { return static_cast<double>((x >> 11) + 1) * 0x1.0p-53; }

    std::mt19937_64 eng_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

// Spectral square root of a PSD covariance. Exact zero eigenvalues give
// zero columns, so constrained combinations come out identically at their
// deterministic values rather than through an epsilon fudge.
Eigen::MatrixXd sampling_factor(const Eigen::MatrixXd& cov) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(cov);
    const double scale = std::max(1.0, cov.cwiseAbs().maxCoeff());
    Eigen::VectorXd lam = es.eigenvalues();
    for (Eigen::Index i = 0; i < lam.size(); ++i) {
        if (lam(i) < -1e-12 * scale) {
            throw InvalidGaussian("sampling factor: covariance not PSD");
        }
        lam(i) = lam(i) > 0.0 ? std::sqrt(lam(i)) : 0.0;
    }
    return es.eigenvectors() * lam.asDiagonal();
}

enum class SampleMode { Finite, Epr, Mirror, Point };

struct ScenarioSampler {
    SampleMode mode = SampleMode::Finite;
    bool standard = true;
    Eigen::Vector2d in_mean = Eigen::Vector2d::Zero();
    Eigen::Matrix2d in_factor = Eigen::Matrix2d::Zero();
    Eigen::Matrix4d res_factor = Eigen::Matrix4d::Zero();

    struct Draw {
        Eigen::Vector2d output;
        Eigen::Vector2d beta;
    };

    Draw next(NormalSampler& rng) const {
        const Eigen::Vector2d z(rng.next(), rng.next());
        const Eigen::Vector2d a1 = in_mean + in_factor * z;

        double q2, p2, q3, p3;
        switch (mode) {
            case SampleMode::Finite: {
                const Eigen::Vector4d w(rng.next(), rng.next(), rng.next(), rng.next());
                const Eigen::Vector4d eta = res_factor * w;
                q2 = eta(0);
                p2 = eta(1);
                q3 = eta(2);
                p3 = eta(3);
                break;
            }
            case SampleMode::Epr:
                q2 = kProposalSigma * rng.next();
                p2 = kProposalSigma * rng.next();
                q3 = q2;
                p3 = -p2;
                break;
            case SampleMode::Mirror:
                q2 = kProposalSigma * rng.next();
                p2 = kProposalSigma * rng.next();
                q3 = q2;
                p3 = p2;
                break;
            case SampleMode::Point:
            default:
                q2 = p2 = q3 = p3 = 0.0;
                break;
        }

        const double q_beta = q2 - a1(0);
        const double p_beta = standard ? p2 + a1(1) : p2 - a1(1);
        const double q_out = q3 - q_beta;
        const double p_out = standard ? p3 + p_beta : p3 - p_beta;
        return {{q_out, p_out}, {q_beta, p_beta}};
    }
};

ScenarioSampler build_sampler(const GaussianState& input, const Resource& resource,
                              ProtocolVariant variant) {
    if (input.dim() != 2) {
        throw DimensionMismatch("input must be a one-mode state");
    }
    ScenarioSampler s;
    s.standard = variant == ProtocolVariant::Standard;
    s.in_mean = input.mean();
    s.in_factor = sampling_factor(input.cov());

    if (const auto* limit = std::get_if<LimitKind>(&resource)) {
        switch (*limit) {
            case LimitKind::Epr:
                if (variant != ProtocolVariant::Standard) {
                    throw ImproperLimitCombination(
                        "the EPR limit diverges under the classical variant");
                }
                s.mode = SampleMode::Epr;
                break;
            case LimitKind::Mirror:
                if (variant != ProtocolVariant::ClassicalVariant) {
                    throw ImproperLimitCombination(
                        "the mirror limit diverges under the standard variant");
                }
                s.mode = SampleMode::Mirror;
                break;
            case LimitKind::ClassicalPoint:
                s.mode = SampleMode::Point;
                break;
        }
    } else {
        s.mode = SampleMode::Finite;
        s.res_factor = sampling_factor(std::get<ResourceParams>(resource).to_state().cov());
    }
    return s;
}

struct StreamResult {
    int64_t drawn = 0;
    int64_t kept = 0;
    Eigen::Vector2d sum = Eigen::Vector2d::Zero();
    Eigen::Matrix2d sumsq = Eigen::Matrix2d::Zero();
};

struct WindowFilter {
    bool enabled = false;
    double center_q = 0.0, center_p = 0.0, tol = 0.0;

    bool accepts(const Eigen::Vector2d& beta) const {
        if (!enabled) return true;
        return std::abs(beta(0) - center_q) <= tol && std::abs(beta(1) - center_p) <= tol;
    }
};

StreamResult run_stream(const ScenarioSampler& sampler, const WindowFilter& window,
                        uint64_t seed, int stream, int64_t first, int64_t last) {
    NormalSampler rng(stream_seed(seed, stream));
    StreamResult r;
    for (int64_t i = first; i < last; ++i) {
        const auto draw = sampler.next(rng);
        ++r.drawn;
        if (!window.accepts(draw.beta)) continue;
        ++r.kept;
        r.sum += draw.output;
        r.sumsq += draw.output * draw.output.transpose();
    }
    return r;
}

double plug_in_fidelity(const GaussianState& input, const Eigen::Vector2d& mean,
                        const Eigen::Matrix2d& cov) {
    return fidelity(input, GaussianState(mean, cov));
}

Eigen::Matrix2d moments_to_cov(const Eigen::Vector2d& sum, const Eigen::Matrix2d& sumsq,
                               int64_t n) {
    const Eigen::Vector2d mean = sum / static_cast<double>(n);
    Eigen::Matrix2d cov =
        (sumsq - static_cast<double>(n) * mean * mean.transpose()) / static_cast<double>(n - 1);
    return ((cov + cov.transpose()) / 2.0).eval();
}

McEstimate finalize(const GaussianState& input, const std::vector<StreamResult>& results,
                    int64_t samples) {
    // Deterministic reduction in stream order.
    int64_t kept = 0;
    Eigen::Vector2d sum = Eigen::Vector2d::Zero();
    Eigen::Matrix2d sumsq = Eigen::Matrix2d::Zero();
    for (const auto& r : results) {
        kept += r.kept;
        sum += r.sum;
        sumsq += r.sumsq;
    }

    McEstimate est;
    est.samples = samples;
    est.accepted = kept;
    est.acceptance_rate = static_cast<double>(kept) / static_cast<double>(samples);
    est.mean = sum / static_cast<double>(kept);
    est.cov = moments_to_cov(sum, sumsq, kept);
    est.fidelity_estimate = plug_in_fidelity(input, est.mean, est.cov);

    const auto n = static_cast<double>(kept);
    est.standard_errors = Eigen::VectorXd::Zero(kSeCount);
    est.standard_errors(kSeMeanQ) = std::sqrt(est.cov(0, 0) / n);
    est.standard_errors(kSeMeanP) = std::sqrt(est.cov(1, 1) / n);
    est.standard_errors(kSeVarQ) = est.cov(0, 0) * std::sqrt(2.0 / (n - 1.0));
    est.standard_errors(kSeVarP) = est.cov(1, 1) * std::sqrt(2.0 / (n - 1.0));
    est.standard_errors(kSeCovQP) =
        std::sqrt((est.cov(0, 0) * est.cov(1, 1) + est.cov(0, 1) * est.cov(0, 1)) / (n - 1.0));

    // Batch-means standard error of the plug-in fidelity over the streams.
    std::vector<double> batch;
    batch.reserve(results.size());
    for (const auto& r : results) {
        if (r.kept < kMinBatchSamples) continue;
        try {
            batch.push_back(plug_in_fidelity(input, r.sum / static_cast<double>(r.kept),
                                             moments_to_cov(r.sum, r.sumsq, r.kept)));
        } catch (const Error&) {
            // A degenerate batch contributes nothing to the spread estimate.
        }
    }
    if (batch.size() >= 2) {
        double m = 0.0;
        for (double f : batch) m += f;
        m /= static_cast<double>(batch.size());
        double ss = 0.0;
        for (double f : batch) ss += (f - m) * (f - m);
        const auto k = static_cast<double>(batch.size());
        est.standard_errors(kSeFidelity) = std::sqrt(ss / (k - 1.0) / k);
    } else {
        est.standard_errors(kSeFidelity) = std::numeric_limits<double>::quiet_NaN();
    }
    return est;
}

std::vector<StreamResult> execute(const ScenarioSampler& sampler, const WindowFilter& window,
                                  const McConfig& cfg) {
    if (cfg.samples < 2) {
        throw NonPositiveSamples("need at least 2 samples, got " + std::to_string(cfg.samples));
    }
    if (cfg.streams < 1) {
        throw NonPositiveSamples("need at least 1 stream, got " + std::to_string(cfg.streams));
    }

    const int streams = cfg.streams;
    std::vector<StreamResult> results(static_cast<size_t>(streams));
    auto stream_range = [&](int s) {
        const int64_t first = cfg.samples * s / streams;
        const int64_t last = cfg.samples * (s + 1) / streams;
        return std::pair<int64_t, int64_t>{first, last};
    };

    const unsigned hw = std::thread::hardware_concurrency();
    const int workers = std::max(1, std::min<int>(streams, hw > 0 ? static_cast<int>(hw) : 1));

    if (workers == 1) {
        for (int s = 0; s < streams; ++s) {
            const auto [first, last] = stream_range(s);
            results[static_cast<size_t>(s)] =
                run_stream(sampler, window, cfg.seed, s, first, last);
        }
        return results;
    }

    std::atomic<int> next{0};
    auto work = [&] {
        for (int s; (s = next.fetch_add(1)) < streams;) {
            const auto [first, last] = stream_range(s);
            results[static_cast<size_t>(s)] =
                run_stream(sampler, window, cfg.seed, s, first, last);
        }
    };
    std::vector<std::thread> pool;
    pool.reserve(static_cast<size_t>(workers));
    for (int t = 0; t < workers; ++t) pool.emplace_back(work);
    for (auto& th : pool) th.join();
    return results;
}

}  // namespace

McEstimate run_protocol(const GaussianState& input, const Resource& resource,
                        ProtocolVariant variant, const McConfig& cfg) {
    const ScenarioSampler sampler = build_sampler(input, resource, variant);
    const auto results = execute(sampler, WindowFilter{}, cfg);
    return finalize(input, results, cfg.samples);
}

McEstimate conditioned_run(const GaussianState& input, const Resource& resource,
                           ProtocolVariant variant, const BetaWindow& window,
                           const McConfig& cfg) {
    if (is_limit(resource)) {
        throw ExactLimitUnsupported("conditioned runs need a finite-squeezing resource");
    }
    if (!is_finite(window.center) || !(window.tolerance > 0.0)) {
        throw WindowTooNarrow("window tolerance must be positive and finite");
    }
    const ScenarioSampler sampler = build_sampler(input, resource, variant);
    WindowFilter filter;
    filter.enabled = true;
    filter.center_q = window.center.q;
    filter.center_p = window.center.p;
    filter.tol = window.tolerance;

    const auto results = execute(sampler, filter, cfg);
    int64_t kept = 0;
    for (const auto& r : results) kept += r.kept;
    if (kept < 1000) {
        throw WindowTooNarrow("only " + std::to_string(kept) +
                              " samples fell in the window (need 1000); widen the window or "
                              "raise the sample count");
    }
    return finalize(input, results, cfg.samples);
}

}  // namespace cvt::mc
