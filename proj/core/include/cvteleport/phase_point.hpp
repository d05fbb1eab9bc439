#pragma once

#include <cmath>

namespace cvt {

/// A point (q, p) in single-mode phase space. Dimensionless, hbar = 1.
struct PhasePoint {
    double q = 0.0;
    double p = 0.0;
};

inline bool is_finite(const PhasePoint& pt) {
    return std::isfinite(pt.q) && std::isfinite(pt.p);
}

}  // namespace cvt
