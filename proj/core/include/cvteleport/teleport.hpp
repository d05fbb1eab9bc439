#pragma once

#include "cvteleport/gaussian_state.hpp"
#include "cvteleport/resource.hpp"

#include <string>

namespace cvt {

/// Measurement/displacement convention of the protocol.
///
/// Standard measures (q2 - q1, p2 + p1) at the transmitting port and
/// displaces the receiving mode by (-q_beta, +p_beta). ClassicalVariant
/// measures (q2 - q1, p2 - p1) and displaces by (-q_beta, -p_beta); the
/// measured pair is conjugate, so no physical measuring technique exists
/// for it — it is a mathematical protocol.
enum class ProtocolVariant { Standard, ClassicalVariant };

[[nodiscard]] std::string to_string(ProtocolVariant v);

/// Added noise variances of the averaged channel.
struct NoisePair {
    double q;
    double p;
};

/// Noise the averaged protocol adds per quadrature:
///   Standard          q: a+b-2c1   p: a+b+2c2
///   ClassicalVariant  q: a+b-2c1   p: a+b-2c2
/// Exact limits give zero noise when the variant matches their constraint
/// structure and throw ImproperLimitCombination otherwise (the mismatched
/// combination diverges). Finite parameters may produce negative entries;
/// consumers decide whether that is an error.
NoisePair added_noise(const Resource& resource, ProtocolVariant variant);

/// Distribution of the measurement outcome beta = (q_beta, p_beta) for a
/// one-mode input, computed by exact linear-Gaussian propagation of the
/// product initial state. Finite resources only: the Epr and Mirror limits
/// make the outcome distribution improper (ExactLimitUnsupported). The
/// input covariance must be proper (DegenerateInput).
GaussianState measurement_distribution(const GaussianState& input, const Resource& resource,
                                       ProtocolVariant variant);

/// Conditional output state given measurement result beta: the joint
/// Gaussian of (q_out, p_out, q_beta, p_beta) conditioned on beta. The
/// conditional covariance is beta-independent (Schur complement).
///
/// Limit paths: Epr under Standard and Mirror under ClassicalVariant
/// return the input unchanged for every beta; ClassicalPoint returns the
/// delta state at (-q_beta, +/-p_beta); mismatched limit/variant pairs
/// throw ImproperLimitCombination.
GaussianState conditional_output(const GaussianState& input, const Resource& resource,
                                 PhasePoint beta, ProtocolVariant variant);

/// Output state averaged over all measurement outcomes:
/// convolve(input, diag(noise_q, noise_p)). Exact limits with a matching
/// variant add zero noise. Negative finite noise entries are an error
/// (NegativeNoise) — the averaging kernel does not exist there.
GaussianState averaged_output(const GaussianState& input, const Resource& resource,
                              ProtocolVariant variant);

/// Post-measurement marginal of the transmitting-port mode. The
/// measurement leaves subsystems (1, 2) on the delta ridge
/// delta(q2-q1-q_beta) delta(p2+-p1-p_beta) / 2pi, whose mode-1 marginal is
/// the uniform density 1/(2 pi) for every resource and every beta: the
/// input is completely erased at its initial port.
struct SenderMarginal {
    double density;         // always 1/(2 pi)
    bool uniform_in_beta;   // always true
};

SenderMarginal sender_marginal(const Resource& resource, PhasePoint beta,
                               ProtocolVariant variant = ProtocolVariant::Standard);

/// Single-shot perfection: the conditional output equals the input for
/// every beta. True exactly for the Epr limit under Standard and the
/// Mirror limit under ClassicalVariant, where the measurement outcome is
/// (improperly) uniform and carries no information about the input. Finite
/// resources — including zero-noise degenerate ones such as (0,0,0,0) —
/// are never single-shot perfect: their measurement outcome is correlated
/// with the input, so conditioning narrows the state.
bool is_perfect(const Resource& resource, ProtocolVariant variant);

/// Ensemble perfection: the averaged output equals the input (zero added
/// noise in both quadratures). Covers the single-shot-perfect limits and
/// also the pure-classical point resource, whose single shots are deltas
/// but whose ensemble reproduces the input.
bool is_ensemble_perfect(const Resource& resource, ProtocolVariant variant);

/// True when a single run collapses the receiving mode to a phase-space
/// point (the conditional output is degenerate in every direction), as for
/// the pure-classical point resource.
bool single_shot_delta(const GaussianState& input, const Resource& resource,
                       ProtocolVariant variant);

/// Overlap fidelity F = 2 pi * overlap(input, output) for one-mode states.
/// Equals 1 for perfect teleportation of a pure Gaussian; lies in [0, 1]
/// whenever both arguments are physical states and the input is pure.
double fidelity(const GaussianState& input, const GaussianState& output);

/// Closed form of the averaged-channel fidelity for the coherent-style
/// input (vacuum variances):
///   F = 1 / sqrt((a+b-2c1+1)(a+b+2c2+1)).
/// Throws UndefinedFidelity when a factor is <= 0.
double fidelity_coherent_closed_form(const ResourceParams& params);

/// One full analytic protocol evaluation.
struct TeleportOutcome {
    PhasePoint beta;
    GaussianState conditional_output;
    GaussianState averaged_output;
    double noise_q;
    double noise_p;
    double fidelity;  // ensemble level: input vs averaged output
    ProtocolVariant variant;
};

TeleportOutcome run_teleport(const GaussianState& input, const Resource& resource,
                             ProtocolVariant variant, PhasePoint beta = {});

}  // namespace cvt
