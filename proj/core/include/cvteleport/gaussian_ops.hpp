#pragma once

#include "cvteleport/gaussian_state.hpp"

#include <Eigen/Dense>

#include <span>
#include <vector>

namespace cvt {

/// Density (2 pi)^(-d/2) det(V)^(-1/2) exp(-eta' V^-1 eta / 2) at `point`,
/// with eta = point - mean. Requires a strictly positive-definite
/// covariance: throws DegenerateCovariance if any eigenvalue is below 1e-10
/// (delta-limit states must go through the limit-aware engine paths
/// instead), DimensionMismatch if the point has the wrong length.
double density_at(const GaussianState& state, const Eigen::VectorXd& point);

/// Marginal over the kept coordinate indices (0-based, distinct, in range);
/// integration over the dropped coordinates just restricts mean and
/// covariance. The kept order is preserved.
GaussianState marginal(const GaussianState& state, std::span<const int> keep);
GaussianState marginal(const GaussianState& state, std::initializer_list<int> keep);

/// Marginal of one full mode (coordinates 2*mode, 2*mode + 1).
GaussianState marginal_mode(const GaussianState& state, int mode);

/// Overlap integral of the two densities,
///   exp(-delta' (V1+V2)^-1 delta / 2) / ((2 pi)^(d/2) sqrt(det(V1+V2))),
/// delta = mean1 - mean2. For states this equals (2 pi)^(-n) Tr[rho1 rho2].
/// Requires V1+V2 positive definite (DegenerateCovariance otherwise).
double overlap(const GaussianState& s1, const GaussianState& s2);

/// Gaussian smearing: mean unchanged, cov -> cov + noise_cov. noise_cov
/// must be symmetric (NonSymmetricNoise) and positive semidefinite
/// (NegativeNoise); matching dimension (DimensionMismatch).
GaussianState convolve(const GaussianState& state, const Eigen::MatrixXd& noise_cov);

/// Condition the joint Gaussian on observed coordinates taking `values`.
/// Returns the Gaussian over the unobserved coordinates with
///   mean  mu_u + S_uo S_oo^-1 (values - mu_o)
///   cov   S_uu - S_uo S_oo^-1 S_ou       (Schur complement).
/// The conditional covariance never depends on the observed values. The
/// observed block must have smallest eigenvalue > 1e-10
/// (DegenerateObservedBlock).
GaussianState condition(const GaussianState& joint, std::span<const int> observed,
                        const Eigen::VectorXd& values);
GaussianState condition(const GaussianState& joint, std::initializer_list<int> observed,
                        const Eigen::VectorXd& values);

}  // namespace cvt
