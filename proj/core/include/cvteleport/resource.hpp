#pragma once

#include "cvteleport/gaussian_state.hpp"

#include <variant>

namespace cvt {

/// Standard-form parameters (a, b, c1, c2) of a two-mode Gaussian resource:
/// zero mean, covariance
///
///     [ a  0  c1 0 ]
///     [ 0  a  0  c2]      over (q2, p2, q3, p3),
///     [ c1 0  b  0 ]      mode 0 = transmitting half (variance a),
///     [ 0  c2 0  b ]      mode 1 = receiving half  (variance b).
///
/// Validity (a normalizable 4-dimensional density) requires a, b >= 0 and
/// a*b - c1^2 >= 0, a*b - c2^2 >= 0; equality marks degenerate limits.
/// Physical realizability is a separate, stronger condition (see
/// realizability.hpp).
struct ResourceParams {
    double a;
    double b;
    double c1;
    double c2;

    /// Validating constructor; throws InvalidResource when the tuple cannot
    /// describe a normalizable density.
    ResourceParams(double a, double b, double c1, double c2);

    /// Lossless expansion to the zero-mean two-mode Gaussian above.
    [[nodiscard]] GaussianState to_state() const;

    [[nodiscard]] double det_cov() const { return (a * b - c1 * c1) * (a * b - c2 * c2); }

    friend bool operator==(const ResourceParams&, const ResourceParams&) = default;
};

/// Exact-limit resources with no finite standard-form parameters. They are
/// consumed only by the limit-aware engine paths.
///   Epr            (1/2pi) delta(q3 - q2) delta(p3 + p2)
///   Mirror         (1/2pi) delta(q3 - q2) delta(p3 - p2)
///   ClassicalPoint delta(q2) delta(p2) delta(q3) delta(p3)
enum class LimitKind { Epr, Mirror, ClassicalPoint };

/// A teleportation resource: either finite standard-form parameters or an
/// exact limit marker.
using Resource = std::variant<ResourceParams, LimitKind>;

[[nodiscard]] inline bool is_limit(const Resource& r) {
    return std::holds_alternative<LimitKind>(r);
}

/// The named resource families.
enum class ResourceKind { Tmss, MirrorTmss, EprLimit, MirrorLimit, ClassicalPoint };

/// A constructed named resource. Tmss / MirrorTmss carry finite parameters
///   Tmss(r):       (cosh(2r)/2, cosh(2r)/2,  sinh(2r)/2, -sinh(2r)/2)
///   MirrorTmss(r): (cosh(2r)/2, cosh(2r)/2,  sinh(2r)/2, +sinh(2r)/2)
/// and the limit kinds carry exact markers.
struct NamedResource {
    ResourceKind kind;
    double squeezing;  // r; zero for the exact limits
    Resource resource;
};

/// Build a named resource; `squeezing` is ignored for the exact limits.
/// Throws NegativeSqueezing when r < 0 or not finite.
NamedResource make_resource(ResourceKind kind, double squeezing = 0.0);

NamedResource make_tmss(double r);
NamedResource make_mirror_tmss(double r);

}  // namespace cvt
