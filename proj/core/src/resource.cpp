#include "cvteleport/resource.hpp"

#include "cvteleport/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <utility>

namespace cvt {

ResourceParams::ResourceParams(double a_, double b_, double c1_, double c2_)
    : a(a_), b(b_), c1(c1_), c2(c2_) {
    if (!std::isfinite(a) || !std::isfinite(b) || !std::isfinite(c1) || !std::isfinite(c2)) {
        throw InvalidResource("standard-form parameters must be finite");
    }
    if (a < 0.0 || b < 0.0) {
        throw InvalidResource("variances a, b must be nonnegative");
    }
    const double tol = 1e-12 * std::max({1.0, a * b, c1 * c1, c2 * c2});
    if (a * b - c1 * c1 < -tol || a * b - c2 * c2 < -tol) {
        throw InvalidResource("a*b - c^2 < 0: parameters do not describe a normalizable density");
    }
}

GaussianState ResourceParams::to_state() const {
    Eigen::VectorXd mean = Eigen::VectorXd::Zero(4);
    Eigen::MatrixXd cov(4, 4);
    // (q2, p2, q3, p3) ordering.
    cov << a, 0, c1, 0,
           0, a, 0, c2,
           c1, 0, b, 0,
           0, c2, 0, b;
    return {std::move(mean), std::move(cov)};
}

namespace {

void require_valid_squeezing(double r) {
    if (!std::isfinite(r) || r < 0.0) {
        throw NegativeSqueezing("squeezing parameter must be finite and >= 0, got " +
                                std::to_string(r));
    }
}

struct TwoSum {
    double hi, lo;
};

TwoSum two_sum(double x, double y) {
    const double s = x + y;
    const double b = s - x;
    return {s, (x - (s - b)) + (y - b)};
}

// Exact residual 4(a^2 - c^2) - 1 via fma-based double-double products.
// This is the distance of the stored pair from the saturated uncertainty
// bound; plain double evaluation would round it away.
double saturation_residual(double a, double c) {
    const double h1 = a * a, l1 = std::fma(a, a, -h1);
    const double h2 = c * c, l2 = std::fma(c, c, -h2);
    TwoSum d = two_sum(h1, -h2);
    d.lo += l1 - l2;
    TwoSum r = two_sum(4.0 * d.hi, -1.0);
    r.lo += 4.0 * d.lo;
    return r.hi + r.lo;
}

// The nearest doubles to cosh(2r)/2, sinh(2r)/2 violate the saturated
// bound 4(a^2 - c^2) = 1 by about ulp * e^{4r}, which crosses 1e-12 near
// r = 2.3. Nudging both values by the same number of ulps leaves a - c
// (and with it the channel noise) bit-identical while tuning a + c, and
// the residual is exactly linear in the shared step count, so the best
// grid point is a closed-form round plus a short local scan.
std::pair<double, double> snap_saturated(double a, double c) {
    double p0 = saturation_residual(a, c);
    if (std::abs(p0) < 1e-13 || c <= 0.0) {
        return {a, c};
    }
    const double step = std::nextafter(a, std::numeric_limits<double>::infinity()) - a;
    const double slope = 8.0 * step * (a - c);
    if (!(slope > 0.0)) {
        return {a, c};
    }
    const double k = std::clamp(std::round(-p0 / slope), -1e7, 1e7);

    double best_a = a, best_c = c, best_p = std::abs(p0);
    for (int j = -3; j <= 3; ++j) {
        const double shift = (k + j) * step;
        const double ca = a + shift;
        const double cc = c + shift;
        if (!(ca > 0.0) || !(cc > 0.0) || cc >= ca) continue;
        const double p = std::abs(saturation_residual(ca, cc));
        if (p < best_p) {
            best_p = p;
            best_a = ca;
            best_c = cc;
        }
    }
    return {best_a, best_c};
}

}  // namespace

NamedResource make_resource(ResourceKind kind, double squeezing) {
    switch (kind) {
        case ResourceKind::Tmss:
            return make_tmss(squeezing);
        case ResourceKind::MirrorTmss:
            return make_mirror_tmss(squeezing);
        case ResourceKind::EprLimit:
            return {ResourceKind::EprLimit, 0.0, LimitKind::Epr};
        case ResourceKind::MirrorLimit:
            return {ResourceKind::MirrorLimit, 0.0, LimitKind::Mirror};
        case ResourceKind::ClassicalPoint:
            return {ResourceKind::ClassicalPoint, 0.0, LimitKind::ClassicalPoint};
    }
    throw InvalidResource("unknown resource kind");
}

NamedResource make_tmss(double r) {
    require_valid_squeezing(r);
    const auto [a, c] =
        snap_saturated(std::cosh(2.0 * r) / 2.0, std::sinh(2.0 * r) / 2.0);
    return {ResourceKind::Tmss, r, ResourceParams(a, a, c, -c)};
}

NamedResource make_mirror_tmss(double r) {
    require_valid_squeezing(r);
    const auto [a, c] =
        snap_saturated(std::cosh(2.0 * r) / 2.0, std::sinh(2.0 * r) / 2.0);
    return {ResourceKind::MirrorTmss, r, ResourceParams(a, a, c, c)};
}

}  // namespace cvt
