#include "cvteleport/gaussian_state.hpp"

#include "cvteleport/errors.hpp"

#include <Eigen/Eigenvalues>

namespace cvt {

namespace {

constexpr double kSymmetryRelTol = 1e-12;
constexpr double kPsdRelTol = 1e-12;

}  // namespace

GaussianState::GaussianState(Eigen::VectorXd mean, Eigen::MatrixXd cov)
    : mean_(std::move(mean)), cov_(std::move(cov)) {
    const auto d = mean_.size();
    if (d < 1) {
        throw DimensionMismatch("GaussianState requires at least one coordinate");
    }
    if (cov_.rows() != d || cov_.cols() != d) {
        throw DimensionMismatch("covariance is " + std::to_string(cov_.rows()) + "x" +
                                std::to_string(cov_.cols()) + ", expected " + std::to_string(d) +
                                "x" + std::to_string(d));
    }
    if (!mean_.allFinite() || !cov_.allFinite()) {
        throw InvalidGaussian("mean/covariance entries must be finite");
    }

    const double scale = cov_.cwiseAbs().maxCoeff();
    const double asym = (cov_ - cov_.transpose()).cwiseAbs().maxCoeff();
    if (asym > kSymmetryRelTol * scale) {
        throw InvalidGaussian("covariance is not symmetric (max asymmetry " +
                              std::to_string(asym) + ")");
    }
    cov_ = ((cov_ + cov_.transpose()) / 2.0).eval();

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(cov_, Eigen::EigenvaluesOnly);
    const double min_eig = es.eigenvalues().minCoeff();
    if (min_eig < -kPsdRelTol * scale) {
        throw InvalidGaussian("covariance is not positive semidefinite (min eigenvalue " +
                              std::to_string(min_eig) + ")");
    }
}

int GaussianState::modes() const {
    if (dim() % 2 != 0) {
        throw DimensionMismatch("state of dimension " + std::to_string(dim()) +
                                " has no whole mode count");
    }
    return dim() / 2;
}

double GaussianState::min_cov_eigenvalue() const {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(cov_, Eigen::EigenvaluesOnly);
    return es.eigenvalues().minCoeff();
}

GaussianState coherent_state(PhasePoint center) {
    Eigen::VectorXd mean(2);
    mean << center.q, center.p;
    Eigen::MatrixXd cov = 0.5 * Eigen::MatrixXd::Identity(2, 2);
    return {std::move(mean), std::move(cov)};
}

}  // namespace cvt
