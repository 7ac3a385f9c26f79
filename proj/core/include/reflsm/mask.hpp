#pragma once

#include <cstdint>
#include <vector>

#include "reflsm/grid.hpp"

namespace reflsm {

/// Binary segmentation, labels in {-1, +1} with +1 = foreground. Row-major.
struct BinaryMask {
    BinaryMask(int height, int width, std::int8_t fill = -1);
    /// Throws if a label is not -1 or +1.
    BinaryMask(int height, int width, std::vector<std::int8_t> labels);

    int height;
    int width;
    std::vector<std::int8_t> labels;

    std::int8_t operator()(int row, int col) const noexcept {
        return labels[static_cast<std::size_t>(row) * width + col];
    }
    std::int8_t& operator()(int row, int col) noexcept {
        return labels[static_cast<std::size_t>(row) * width + col];
    }
    std::size_t size() const noexcept { return labels.size(); }
    std::size_t foreground_count() const noexcept;

    friend bool operator==(const BinaryMask&, const BinaryMask&) = default;
};

/// sign(u) with sign(0) = +1.
BinaryMask sign_mask(const ScalarField& u);

/// +1 -> 1.0, -1 -> -1.0.
ScalarField to_field(const BinaryMask& mask);

}  // namespace reflsm
