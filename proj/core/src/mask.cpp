#include "reflsm/mask.hpp"

#include <algorithm>
#include <string>

#include "reflsm/errors.hpp"

namespace reflsm {

BinaryMask::BinaryMask(int height, int width, std::int8_t fill)
    : height(height), width(width), labels(static_cast<std::size_t>(height) * width, fill) {
    if (height < 1 || width < 1) throw DimensionError("mask dimensions must be positive");
    if (fill != 1 && fill != -1) throw ParameterError("mask labels must be -1 or +1");
}

BinaryMask::BinaryMask(int height, int width, std::vector<std::int8_t> labels)
    : height(height), width(width), labels(std::move(labels)) {
    if (height < 1 || width < 1) throw DimensionError("mask dimensions must be positive");
    if (this->labels.size() != static_cast<std::size_t>(height) * width) {
        throw DimensionError("mask expects " + std::to_string(static_cast<long>(height) * width) +
                             " labels, got " + std::to_string(this->labels.size()));
    }
    for (auto v : this->labels) {
        if (v != 1 && v != -1) throw ParameterError("mask labels must be -1 or +1");
    }
}

std::size_t BinaryMask::foreground_count() const noexcept {
    return static_cast<std::size_t>(std::count(labels.begin(), labels.end(), std::int8_t{1}));
}

BinaryMask sign_mask(const ScalarField& u) {
    BinaryMask mask(u.height(), u.width());
    for (std::size_t i = 0; i < u.size(); ++i) mask.labels[i] = u[i] >= 0.0 ? 1 : -1;
    return mask;
}

ScalarField to_field(const BinaryMask& mask) {
    std::vector<double> values(mask.labels.begin(), mask.labels.end());
    return ScalarField(mask.height, mask.width, std::move(values));
}

}  // namespace reflsm
