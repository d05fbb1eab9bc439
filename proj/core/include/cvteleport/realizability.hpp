#pragma once

#include "cvteleport/resource.hpp"

#include <string>
#include <vector>

namespace cvt {

enum class Verdict { Physical, Nonphysical };

/// The four uncertainty bounds a standard-form resource must satisfy to be
/// a valid Wigner function.
enum class Bound { SingleMode2, SingleMode3, SumProduct, DiffProduct };

[[nodiscard]] std::string to_string(Verdict v);
[[nodiscard]] std::string to_string(Bound b);

/// Uncertainty products of a standard-form resource and the resulting
/// classification.
///
///   single_mode_2 = a^2                      >= 1/4
///   single_mode_3 = b^2                      >= 1/4
///   sum_product   = (a+b+2c1)(a+b+2c2)       >= 1
///   diff_product  = (a+b-2c1)(a+b-2c2)       >= 1
///
/// verdict is Physical iff all four hold within absolute tolerance 1e-12;
/// `saturated` lists the bounds met with equality (same tolerance).
/// mirror_entangled is the momentum-mirror (Peres-Simon) flag: the resource
/// is physical but its mirror image is not.
struct RealizabilityReport {
    double single_mode_2;
    double single_mode_3;
    double sum_product;
    double diff_product;
    Verdict verdict;
    std::vector<Bound> saturated;
    bool mirror_entangled;
};

/// Absolute tolerance used for the boundary comparisons above.
inline constexpr double kRealizabilityTol = 1e-12;

RealizabilityReport check(const ResourceParams& params);

/// Limit-aware classification. Epr reports both pair products saturated at
/// 1 with divergent single-mode products; Mirror reports a vanishing
/// difference product; ClassicalPoint reports all products zero.
RealizabilityReport check(const Resource& resource);

/// Momentum mirror p2 -> -p2 of the second mode: (a, b, c1, -c2). An
/// involution.
ResourceParams mirror(const ResourceParams& params);

/// True iff the resource is physical and its mirror image is not — the
/// Peres-Simon partial-transpose test specialized to standard form. Flags
/// exactly the entangled physical resources.
bool mirror_entangled(const ResourceParams& params);

}  // namespace cvt
