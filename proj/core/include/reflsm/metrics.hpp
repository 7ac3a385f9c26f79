#pragma once

#include <cstdint>

#include "reflsm/grid.hpp"
#include "reflsm/mask.hpp"

namespace reflsm {

struct ConfusionCounts {
    std::uint64_t tp = 0;
    std::uint64_t fp = 0;
    std::uint64_t fn = 0;
    std::uint64_t tn = 0;

    std::uint64_t total() const noexcept { return tp + fp + fn + tn; }
    friend bool operator==(const ConfusionCounts&, const ConfusionCounts&) = default;
};

ConfusionCounts confusion(const BinaryMask& predicted, const BinaryMask& truth);

/// 2 tp / (2 tp + fp + fn); 1.0 when both masks are empty.
double dice(const ConfusionCounts& counts);

/// tp / (tp + fp); throws UndefinedResultError without positive predictions.
double precision(const ConfusionCounts& counts);

/// Mean over pixels of |central-difference gradient| / intensity. The image
/// must be strictly positive (intensity domain).
double tenengrad(const ScalarField& intensity);

/// tenengrad(corrected) / tenengrad(original); > 1 means sharper than the original.
double rtg_ratio(const ScalarField& corrected, const ScalarField& original);

}  // namespace reflsm
