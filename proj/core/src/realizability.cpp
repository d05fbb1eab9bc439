#include "cvteleport/realizability.hpp"

#include "cvteleport/errors.hpp"

#include <cmath>
#include <limits>

namespace cvt {

std::string to_string(Verdict v) {
    return v == Verdict::Physical ? "Physical" : "Nonphysical";
}

std::string to_string(Bound b) {
    switch (b) {
        case Bound::SingleMode2: return "single_mode_2";
        case Bound::SingleMode3: return "single_mode_3";
        case Bound::SumProduct: return "sum_product";
        case Bound::DiffProduct: return "diff_product";
    }
    return "?";
}

namespace {

bool physical_verdict(const ResourceParams& p) {
    const double tol = kRealizabilityTol;
    const double sum = (p.a + p.b + 2.0 * p.c1) * (p.a + p.b + 2.0 * p.c2);
    const double diff = (p.a + p.b - 2.0 * p.c1) * (p.a + p.b - 2.0 * p.c2);
    return p.a * p.a >= 0.25 - tol && p.b * p.b >= 0.25 - tol && sum >= 1.0 - tol &&
           diff >= 1.0 - tol;
}

}  // namespace

RealizabilityReport check(const ResourceParams& p) {
    const double tol = kRealizabilityTol;
    RealizabilityReport r{};
    r.single_mode_2 = p.a * p.a;
    r.single_mode_3 = p.b * p.b;
    r.sum_product = (p.a + p.b + 2.0 * p.c1) * (p.a + p.b + 2.0 * p.c2);
    r.diff_product = (p.a + p.b - 2.0 * p.c1) * (p.a + p.b - 2.0 * p.c2);
    r.verdict = physical_verdict(p) ? Verdict::Physical : Verdict::Nonphysical;
    if (std::abs(r.single_mode_2 - 0.25) <= tol) r.saturated.push_back(Bound::SingleMode2);
    if (std::abs(r.single_mode_3 - 0.25) <= tol) r.saturated.push_back(Bound::SingleMode3);
    if (std::abs(r.sum_product - 1.0) <= tol) r.saturated.push_back(Bound::SumProduct);
    if (std::abs(r.diff_product - 1.0) <= tol) r.saturated.push_back(Bound::DiffProduct);
    r.mirror_entangled = mirror_entangled(p);
    return r;
}

RealizabilityReport check(const Resource& resource) {
    if (const auto* params = std::get_if<ResourceParams>(&resource)) {
        return check(*params);
    }
    const double inf = std::numeric_limits<double>::infinity();
    RealizabilityReport r{};
    switch (std::get<LimitKind>(resource)) {
        case LimitKind::Epr:
            // Infinite-squeezing limit: single-mode products diverge, both
            // pair products stay saturated at 1.
            r = {inf, inf, 1.0, 1.0, Verdict::Physical,
                 {Bound::SumProduct, Bound::DiffProduct}, true};
            break;
        case LimitKind::Mirror:
            r = {inf, inf, inf, 0.0, Verdict::Nonphysical, {}, false};
            break;
        case LimitKind::ClassicalPoint:
            r = {0.0, 0.0, 0.0, 0.0, Verdict::Nonphysical, {}, false};
            break;
    }
    return r;
}

ResourceParams mirror(const ResourceParams& p) {
    return {p.a, p.b, p.c1, -p.c2};
}

bool mirror_entangled(const ResourceParams& p) {
    return physical_verdict(p) && !physical_verdict(mirror(p));
}

}  // namespace cvt
