#include "reflsm/metrics.hpp"

#include <cmath>

#include "reflsm/errors.hpp"

namespace reflsm {

ConfusionCounts confusion(const BinaryMask& predicted, const BinaryMask& truth) {
    if (predicted.height != truth.height || predicted.width != truth.width) {
        throw DimensionError("confusion: mask dimensions differ");
    }
    ConfusionCounts counts;
    for (std::size_t i = 0; i < predicted.size(); ++i) {
        const bool p = predicted.labels[i] > 0;
        const bool t = truth.labels[i] > 0;
        if (p && t) {
            ++counts.tp;
        } else if (p) {
            ++counts.fp;
        } else if (t) {
            ++counts.fn;
        } else {
            ++counts.tn;
        }
    }
    return counts;
}

double dice(const ConfusionCounts& counts) {
    const std::uint64_t denom = 2 * counts.tp + counts.fp + counts.fn;
    if (denom == 0) return 1.0;  // both masks empty
    return 2.0 * static_cast<double>(counts.tp) / static_cast<double>(denom);
}

double precision(const ConfusionCounts& counts) {
    const std::uint64_t predicted = counts.tp + counts.fp;
    if (predicted == 0) throw UndefinedResultError("precision: no positive predictions");
    return static_cast<double>(counts.tp) / static_cast<double>(predicted);
}

double tenengrad(const ScalarField& intensity) {
    const int h = intensity.height();
    const int w = intensity.width();
    for (double v : intensity.values()) {
        if (!(v > 0.0)) throw DomainError("tenengrad requires strictly positive intensities");
    }
    double acc = 0.0;
    for (int r = 0; r < h; ++r) {
        for (int c = 0; c < w; ++c) {
            const double gx = 0.5 * (intensity(r, mirror_index(c + 1, w)) -
                                     intensity(r, mirror_index(c - 1, w)));
            const double gy = 0.5 * (intensity(mirror_index(r + 1, h), c) -
                                     intensity(mirror_index(r - 1, h), c));
            acc += std::sqrt(gx * gx + gy * gy) / intensity(r, c);
        }
    }
    return acc / static_cast<double>(intensity.size());
}

double rtg_ratio(const ScalarField& corrected, const ScalarField& original) {
    if (!corrected.same_shape(original)) throw DimensionError("rtg_ratio: image shapes differ");
    const double reference = tenengrad(original);
    if (reference == 0.0) throw UndefinedResultError("rtg_ratio: original image is constant");
    return tenengrad(corrected) / reference;
}

}  // namespace reflsm
