#include "cvteleport/teleport.hpp"

#include "cvteleport/errors.hpp"
#include "cvteleport/gaussian_ops.hpp"

#include <cmath>
#include <numbers>

namespace cvt {

std::string to_string(ProtocolVariant v) {
    return v == ProtocolVariant::Standard ? "standard" : "classical";
}

namespace {

constexpr double kProperEigTol = 1e-10;

void require_one_mode(const GaussianState& state, const char* what) {
    if (state.dim() != 2) {
        throw DimensionMismatch(std::string(what) + " must be a one-mode state");
    }
}

void require_finite_beta(PhasePoint beta) {
    if (!is_finite(beta)) {
        throw InvalidGaussian("measurement result beta must be finite");
    }
}

/// Linear map from (q1, p1, q2, p2, q3, p3) to (q_out, p_out, q_beta, p_beta).
/// The output variables substitute the displacement into the receiving mode:
///   q_out = q1 + (q3 - q2)               (both variants)
///   p_out = p1 + (p2 + p3)  standard     p1 + (p3 - p2)  classical
///   q_beta = q2 - q1                      (both variants)
///   p_beta = p2 + p1        standard      p2 - p1        classical
Eigen::Matrix<double, 4, 6> protocol_map(ProtocolVariant variant) {
    Eigen::Matrix<double, 4, 6> t = Eigen::Matrix<double, 4, 6>::Zero();
    t(0, 0) = 1;  t(0, 2) = -1;  t(0, 4) = 1;
    t(2, 0) = -1; t(2, 2) = 1;
    if (variant == ProtocolVariant::Standard) {
        t(1, 1) = 1;  t(1, 3) = 1;  t(1, 5) = 1;
        t(3, 1) = 1;  t(3, 3) = 1;
    } else {
        t(1, 1) = 1;  t(1, 3) = -1; t(1, 5) = 1;
        t(3, 1) = -1; t(3, 3) = 1;
    }
    return t;
}

/// Joint Gaussian of (q_out, p_out, q_beta, p_beta) for a finite resource,
/// propagated exactly from the product initial state.
GaussianState protocol_joint(const GaussianState& input, const ResourceParams& params,
                             ProtocolVariant variant) {
    const GaussianState res = params.to_state();
    Eigen::Matrix<double, 6, 1> mu = Eigen::Matrix<double, 6, 1>::Zero();
    mu.head<2>() = input.mean();
    Eigen::Matrix<double, 6, 6> sigma = Eigen::Matrix<double, 6, 6>::Zero();
    sigma.topLeftCorner<2, 2>() = input.cov();
    sigma.bottomRightCorner<4, 4>() = res.cov();

    const Eigen::Matrix<double, 4, 6> t = protocol_map(variant);
    Eigen::VectorXd mean = t * mu;
    Eigen::MatrixXd cov = t * sigma * t.transpose();
    return {std::move(mean), std::move(cov)};
}

bool limit_matches_variant(LimitKind limit, ProtocolVariant variant) {
    switch (limit) {
        case LimitKind::Epr:
            return variant == ProtocolVariant::Standard;
        case LimitKind::Mirror:
            return variant == ProtocolVariant::ClassicalVariant;
        case LimitKind::ClassicalPoint:
            return true;
    }
    return false;
}

[[noreturn]] void throw_improper(LimitKind limit, ProtocolVariant variant) {
    throw ImproperLimitCombination("the " +
                                   std::string(limit == LimitKind::Epr ? "EPR" : "mirror") +
                                   " limit diverges under the " + to_string(variant) +
                                   " variant");
}

}  // namespace

NoisePair added_noise(const Resource& resource, ProtocolVariant variant) {
    if (const auto* limit = std::get_if<LimitKind>(&resource)) {
        if (!limit_matches_variant(*limit, variant)) throw_improper(*limit, variant);
        return {0.0, 0.0};
    }
    const auto& p = std::get<ResourceParams>(resource);
    const double nq = p.a + p.b - 2.0 * p.c1;
    const double np = variant == ProtocolVariant::Standard ? p.a + p.b + 2.0 * p.c2
                                                           : p.a + p.b - 2.0 * p.c2;
    return {nq, np};
}

GaussianState measurement_distribution(const GaussianState& input, const Resource& resource,
                                       ProtocolVariant variant) {
    require_one_mode(input, "input");
    if (input.min_cov_eigenvalue() < kProperEigTol) {
        throw DegenerateInput("input covariance must be proper (smallest eigenvalue > 1e-10)");
    }
    if (const auto* limit = std::get_if<LimitKind>(&resource)) {
        if (*limit != LimitKind::ClassicalPoint) {
            throw ExactLimitUnsupported(
                "the measurement-outcome distribution is improper in this limit; "
                "use a finite-squeezing resource");
        }
        return marginal(protocol_joint(input, ResourceParams(0, 0, 0, 0), variant), {2, 3});
    }
    return marginal(protocol_joint(input, std::get<ResourceParams>(resource), variant), {2, 3});
}

GaussianState conditional_output(const GaussianState& input, const Resource& resource,
                                 PhasePoint beta, ProtocolVariant variant) {
    require_one_mode(input, "input");
    require_finite_beta(beta);

    if (const auto* limit = std::get_if<LimitKind>(&resource)) {
        if (!limit_matches_variant(*limit, variant)) throw_improper(*limit, variant);
        if (*limit == LimitKind::ClassicalPoint) {
            // Both resource modes sit at the origin, so the displaced output
            // is the delta state at (-q_beta, +/-p_beta).
            Eigen::VectorXd mean(2);
            mean << -beta.q,
                (variant == ProtocolVariant::Standard ? beta.p : -beta.p);
            return {std::move(mean), Eigen::MatrixXd::Zero(2, 2)};
        }
        // Epr under Standard, Mirror under ClassicalVariant: the outcome is
        // uniform and uninformative, the output reproduces the input for
        // every beta.
        return input;
    }

    const GaussianState joint = protocol_joint(input, std::get<ResourceParams>(resource), variant);
    Eigen::VectorXd values(2);
    values << beta.q, beta.p;
    return condition(joint, {2, 3}, values);
}

GaussianState averaged_output(const GaussianState& input, const Resource& resource,
                              ProtocolVariant variant) {
    require_one_mode(input, "input");
    const NoisePair noise = added_noise(resource, variant);
    if (noise.q < 0.0 || noise.p < 0.0) {
        throw NegativeNoise("added noise (" + std::to_string(noise.q) + ", " +
                            std::to_string(noise.p) +
                            ") is negative; the averaging kernel does not exist");
    }
    Eigen::MatrixXd noise_cov = Eigen::MatrixXd::Zero(2, 2);
    noise_cov(0, 0) = noise.q;
    noise_cov(1, 1) = noise.p;
    return convolve(input, noise_cov);
}

SenderMarginal sender_marginal(const Resource& /*resource*/, PhasePoint beta,
                               ProtocolVariant /*variant*/) {
    require_finite_beta(beta);
    // The post-measurement state of subsystems (1, 2) is the delta ridge
    // fixed by beta, normalized by 1/2pi; integrating out subsystem 2
    // leaves the constant density regardless of beta, resource, or variant.
    return {1.0 / (2.0 * std::numbers::pi), true};
}

bool is_perfect(const Resource& resource, ProtocolVariant variant) {
    if (const auto* limit = std::get_if<LimitKind>(&resource)) {
        return *limit != LimitKind::ClassicalPoint && limit_matches_variant(*limit, variant);
    }
    // Finite resources correlate the measurement outcome with the input, so
    // conditioning always alters the state; zero added noise alone gives
    // only ensemble perfection.
    return false;
}

bool is_ensemble_perfect(const Resource& resource, ProtocolVariant variant) {
    if (const auto* limit = std::get_if<LimitKind>(&resource)) {
        return limit_matches_variant(*limit, variant);
    }
    const NoisePair noise = added_noise(resource, variant);
    return noise.q == 0.0 && noise.p == 0.0;
}

bool single_shot_delta(const GaussianState& input, const Resource& resource,
                       ProtocolVariant variant) {
    const GaussianState cond = conditional_output(input, resource, {0.0, 0.0}, variant);
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> es(cond.cov());
    return es.eigenvalues().maxCoeff() <= kProperEigTol;
}

double fidelity(const GaussianState& input, const GaussianState& output) {
    require_one_mode(input, "input");
    require_one_mode(output, "output");
    return 2.0 * std::numbers::pi * overlap(input, output);
}

double fidelity_coherent_closed_form(const ResourceParams& p) {
    const double fq = p.a + p.b - 2.0 * p.c1 + 1.0;
    const double fp = p.a + p.b + 2.0 * p.c2 + 1.0;
    if (fq <= 0.0 || fp <= 0.0) {
        throw UndefinedFidelity("fidelity factors (" + std::to_string(fq) + ", " +
                                std::to_string(fp) + ") must be positive");
    }
    return 1.0 / std::sqrt(fq * fp);
}

TeleportOutcome run_teleport(const GaussianState& input, const Resource& resource,
                             ProtocolVariant variant, PhasePoint beta) {
    GaussianState conditional = conditional_output(input, resource, beta, variant);
    GaussianState averaged = averaged_output(input, resource, variant);
    const NoisePair noise = added_noise(resource, variant);
    const double f = fidelity(input, averaged);
    return {beta, std::move(conditional), std::move(averaged), noise.q, noise.p, f, variant};
}

}  // namespace cvt
