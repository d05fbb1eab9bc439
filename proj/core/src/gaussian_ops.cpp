#include "cvteleport/gaussian_ops.hpp"

#include "cvteleport/errors.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <numbers>

namespace cvt {

namespace {

constexpr double kDegenerateEigTol = 1e-10;

void check_indices(std::span<const int> idx, int dim, const char* what) {
    if (idx.empty()) {
        throw DimensionMismatch(std::string(what) + ": index set is empty");
    }
    std::vector<int> seen(idx.begin(), idx.end());
    std::sort(seen.begin(), seen.end());
    if (std::adjacent_find(seen.begin(), seen.end()) != seen.end()) {
        throw DimensionMismatch(std::string(what) + ": duplicate index");
    }
    if (seen.front() < 0 || seen.back() >= dim) {
        throw DimensionMismatch(std::string(what) + ": index out of range for dimension " +
                                std::to_string(dim));
    }
}

}  // namespace

double density_at(const GaussianState& state, const Eigen::VectorXd& point) {
    const int d = state.dim();
    if (point.size() != d) {
        throw DimensionMismatch("point has length " + std::to_string(point.size()) +
                                ", state dimension is " + std::to_string(d));
    }

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(state.cov());
    const Eigen::VectorXd& eig = es.eigenvalues();
    if (eig.minCoeff() < kDegenerateEigTol) {
        throw DegenerateCovariance("covariance eigenvalue " + std::to_string(eig.minCoeff()) +
                                   " below 1e-10; use the limit-aware engine paths");
    }

    const Eigen::VectorXd eta = point - state.mean();
    const Eigen::VectorXd w = es.eigenvectors().transpose() * eta;
    const double quad = (w.array().square() / eig.array()).sum();
    const double log_det = eig.array().log().sum();
    const double log_density =
        -0.5 * quad - 0.5 * log_det - 0.5 * d * std::log(2.0 * std::numbers::pi);
    return std::exp(log_density);
}

GaussianState marginal(const GaussianState& state, std::span<const int> keep) {
    check_indices(keep, state.dim(), "marginal");
    const auto k = static_cast<Eigen::Index>(keep.size());
    Eigen::VectorXd mean(k);
    Eigen::MatrixXd cov(k, k);
    for (Eigen::Index i = 0; i < k; ++i) {
        mean(i) = state.mean()(keep[i]);
        for (Eigen::Index j = 0; j < k; ++j) {
            cov(i, j) = state.cov()(keep[i], keep[j]);
        }
    }
    return {std::move(mean), std::move(cov)};
}

GaussianState marginal(const GaussianState& state, std::initializer_list<int> keep) {
    return marginal(state, std::span<const int>(keep.begin(), keep.size()));
}

GaussianState marginal_mode(const GaussianState& state, int mode) {
    if (mode < 0 || 2 * mode + 1 >= state.dim()) {
        throw DimensionMismatch("mode " + std::to_string(mode) + " out of range");
    }
    return marginal(state, {2 * mode, 2 * mode + 1});
}

double overlap(const GaussianState& s1, const GaussianState& s2) {
    const int d = s1.dim();
    if (s2.dim() != d) {
        throw DimensionMismatch("overlap of states with dimensions " + std::to_string(d) +
                                " and " + std::to_string(s2.dim()));
    }

    const Eigen::MatrixXd sum = s1.cov() + s2.cov();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(sum);
    const Eigen::VectorXd& eig = es.eigenvalues();
    if (eig.minCoeff() < kDegenerateEigTol) {
        throw DegenerateCovariance("summed covariance is not positive definite");
    }

    const Eigen::VectorXd delta = s1.mean() - s2.mean();
    const Eigen::VectorXd w = es.eigenvectors().transpose() * delta;
    const double quad = (w.array().square() / eig.array()).sum();
    const double log_det = eig.array().log().sum();
    return std::exp(-0.5 * quad - 0.5 * log_det - 0.5 * d * std::log(2.0 * std::numbers::pi));
}

GaussianState convolve(const GaussianState& state, const Eigen::MatrixXd& noise_cov) {
    const int d = state.dim();
    if (noise_cov.rows() != d || noise_cov.cols() != d) {
        throw DimensionMismatch("noise covariance dimension does not match state");
    }
    const double scale = noise_cov.cwiseAbs().maxCoeff();
    const double asym = (noise_cov - noise_cov.transpose()).cwiseAbs().maxCoeff();
    if (asym > 1e-12 * scale) {
        throw NonSymmetricNoise("noise covariance is not symmetric");
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(noise_cov, Eigen::EigenvaluesOnly);
    if (es.eigenvalues().minCoeff() < -1e-12 * std::max(scale, 1.0)) {
        throw NegativeNoise("noise covariance has a negative eigenvalue");
    }
    return {state.mean(), state.cov() + noise_cov};
}

GaussianState condition(const GaussianState& joint, std::span<const int> observed,
                        const Eigen::VectorXd& values) {
    const int d = joint.dim();
    check_indices(observed, d, "condition");
    const auto no = static_cast<Eigen::Index>(observed.size());
    if (values.size() != no) {
        throw DimensionMismatch("observed values length " + std::to_string(values.size()) +
                                " does not match index count " + std::to_string(no));
    }
    if (no == d) {
        throw DimensionMismatch("conditioning on every coordinate leaves nothing");
    }

    std::vector<char> is_obs(static_cast<size_t>(d), 0);
    for (int i : observed) is_obs[static_cast<size_t>(i)] = 1;
    std::vector<int> unobserved;
    unobserved.reserve(static_cast<size_t>(d - no));
    for (int i = 0; i < d; ++i) {
        if (!is_obs[static_cast<size_t>(i)]) unobserved.push_back(i);
    }
    const auto nu = static_cast<Eigen::Index>(unobserved.size());

    Eigen::MatrixXd s_oo(no, no), s_uo(nu, no), s_uu(nu, nu);
    Eigen::VectorXd mu_o(no), mu_u(nu);
    for (Eigen::Index i = 0; i < no; ++i) {
        mu_o(i) = joint.mean()(observed[i]);
        for (Eigen::Index j = 0; j < no; ++j) s_oo(i, j) = joint.cov()(observed[i], observed[j]);
    }
    for (Eigen::Index i = 0; i < nu; ++i) {
        mu_u(i) = joint.mean()(unobserved[i]);
        for (Eigen::Index j = 0; j < no; ++j) s_uo(i, j) = joint.cov()(unobserved[i], observed[j]);
        for (Eigen::Index j = 0; j < nu; ++j)
            s_uu(i, j) = joint.cov()(unobserved[i], unobserved[j]);
    }

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(s_oo);
    if (es.eigenvalues().minCoeff() <= kDegenerateEigTol) {
        throw DegenerateObservedBlock("observed covariance block is (near) singular");
    }
    const Eigen::MatrixXd s_oo_inv = es.eigenvectors() *
                                     es.eigenvalues().cwiseInverse().asDiagonal() *
                                     es.eigenvectors().transpose();

    const Eigen::MatrixXd gain = s_uo * s_oo_inv;
    Eigen::VectorXd mean = mu_u + gain * (values - mu_o);
    Eigen::MatrixXd cov = s_uu - gain * s_uo.transpose();
    cov = ((cov + cov.transpose()) / 2.0).eval();

    // Schur rounding can leave exact-zero directions a hair negative;
    // clamp those at the joint's scale.
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> esc(cov);
    const double floor = -1e-12 * std::max(joint.cov().cwiseAbs().maxCoeff(), 1.0);
    const double min_eig = esc.eigenvalues().minCoeff();
    if (min_eig < 0.0 && min_eig > floor) {
        cov = esc.eigenvectors() * esc.eigenvalues().cwiseMax(0.0).asDiagonal() *
              esc.eigenvectors().transpose();
        cov = ((cov + cov.transpose()) / 2.0).eval();
    }
    return {std::move(mean), std::move(cov)};
}

GaussianState condition(const GaussianState& joint, std::initializer_list<int> observed,
                        const Eigen::VectorXd& values) {
    return condition(joint, std::span<const int>(observed.begin(), observed.size()), values);
}

}  // namespace cvt
