#pragma once

#include "cvteleport/phase_point.hpp"

#include <Eigen/Dense>

namespace cvt {

/// Gaussian phase-space distribution: mean vector plus symmetric covariance.
///
/// Coordinates are ordered (q1, p1, q2, p2, ...). Single-coordinate
/// marginals are supported, so the dimension need not be even; modes() is
/// only meaningful for full phase-space states and rejects odd dimensions.
///
/// Construction enforces the representation invariants: the covariance must
/// be symmetric to 1e-12 relative tolerance and positive semidefinite with
/// eigenvalues >= -1e-12 * scale. Exact zero eigenvalues are permitted and
/// mark degenerate (delta-limit) directions; density evaluation refuses
/// them, while the protocol engine treats them analytically as limits.
class GaussianState {
public:
    /// Validates and stores the pair; the covariance is symmetrized after
    /// the symmetry check so downstream algebra sees an exactly symmetric
    /// matrix.
    GaussianState(Eigen::VectorXd mean, Eigen::MatrixXd cov);

    [[nodiscard]] int dim() const { return static_cast<int>(mean_.size()); }

    /// Number of phase-space modes; throws DimensionMismatch for odd
    /// dimensions (partial marginals have no mode count).
    [[nodiscard]] int modes() const;

    [[nodiscard]] const Eigen::VectorXd& mean() const { return mean_; }
    [[nodiscard]] const Eigen::MatrixXd& cov() const { return cov_; }

    /// Smallest covariance eigenvalue; degenerate directions show up as
    /// (numerically) zero entries.
    [[nodiscard]] double min_cov_eigenvalue() const;

private:
    Eigen::VectorXd mean_;
    Eigen::MatrixXd cov_;
};

/// Single-mode Gaussian with vacuum variances (1/2, 1/2) centered at
/// `center`; the default is the standard coherent-style input with density
/// (1/pi) exp(-q^2 - p^2).
GaussianState coherent_state(PhasePoint center = {});

}  // namespace cvt
