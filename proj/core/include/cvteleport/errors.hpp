#pragma once

#include <stdexcept>
#include <string>

namespace cvt {

/// Base class for all library errors. kind() is a stable machine-readable
/// name suitable for serialization (the CLI puts it in error reports).
class Error : public std::runtime_error {
public:
    Error(std::string kind, const std::string& message)
        : std::runtime_error(message), kind_(std::move(kind)) {}

    [[nodiscard]] const std::string& kind() const noexcept { return kind_; }

private:
    std::string kind_;
};

#define CVT_ERROR_TYPE(NAME)                                                  \
    class NAME : public Error {                                               \
    public:                                                                   \
        explicit NAME(const std::string& message) : Error(#NAME, message) {}  \
    }

CVT_ERROR_TYPE(DimensionMismatch);
CVT_ERROR_TYPE(InvalidGaussian);
CVT_ERROR_TYPE(InvalidResource);
CVT_ERROR_TYPE(DegenerateCovariance);
CVT_ERROR_TYPE(DegenerateObservedBlock);
CVT_ERROR_TYPE(DegenerateInput);
CVT_ERROR_TYPE(NonSymmetricNoise);
CVT_ERROR_TYPE(NegativeNoise);
CVT_ERROR_TYPE(NegativeSqueezing);
CVT_ERROR_TYPE(ExactLimitUnsupported);
CVT_ERROR_TYPE(ImproperLimitCombination);
CVT_ERROR_TYPE(UndefinedFidelity);
CVT_ERROR_TYPE(WindowTooNarrow);
CVT_ERROR_TYPE(NonPositiveSamples);

#undef CVT_ERROR_TYPE

}  // namespace cvt
