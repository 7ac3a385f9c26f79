#include "reflsm/grid.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "reflsm/errors.hpp"

namespace reflsm {

namespace {

void check_dimensions(int height, int width) {
    if (height < 2 || width < 2) {
        throw DimensionError("field must be at least 2x2, got " + std::to_string(height) + "x" +
                             std::to_string(width));
    }
}

void require_same_shape(const ScalarField& a, const ScalarField& b) {
    if (!a.same_shape(b)) {
        throw DimensionError("field shapes differ: " + std::to_string(a.height()) + "x" +
                             std::to_string(a.width()) + " vs " + std::to_string(b.height()) + "x" +
                             std::to_string(b.width()));
    }
}

}  // namespace

ScalarField::ScalarField(int height, int width, double fill) : height_(height), width_(width) {
    check_dimensions(height, width);
    if (!std::isfinite(fill)) throw DomainError("non-finite fill value");
    values_.assign(static_cast<std::size_t>(height) * width, fill);
}

ScalarField::ScalarField(int height, int width, std::vector<double> values)
    : height_(height), width_(width), values_(std::move(values)) {
    check_dimensions(height, width);
    if (values_.size() != static_cast<std::size_t>(height) * width) {
        throw DimensionError("expected " + std::to_string(static_cast<long>(height) * width) +
                             " values, got " + std::to_string(values_.size()));
    }
    for (double v : values_) {
        if (!std::isfinite(v)) throw DomainError("field contains a non-finite value");
    }
}

ScalarField& ScalarField::operator+=(const ScalarField& other) {
    require_same_shape(*this, other);
    for (std::size_t i = 0; i < values_.size(); ++i) values_[i] += other.values_[i];
    return *this;
}

ScalarField& ScalarField::operator-=(const ScalarField& other) {
    require_same_shape(*this, other);
    for (std::size_t i = 0; i < values_.size(); ++i) values_[i] -= other.values_[i];
    return *this;
}

ScalarField& ScalarField::operator*=(double factor) noexcept {
    for (double& v : values_) v *= factor;
    return *this;
}

ScalarField operator+(ScalarField lhs, const ScalarField& rhs) { return lhs += rhs; }
ScalarField operator-(ScalarField lhs, const ScalarField& rhs) { return lhs -= rhs; }
ScalarField operator*(double factor, ScalarField field) { return field *= factor; }
ScalarField operator*(ScalarField field, double factor) { return field *= factor; }

ScalarField hadamard(const ScalarField& a, const ScalarField& b) {
    require_same_shape(a, b);
    ScalarField out(a.height(), a.width());
    for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] * b[i];
    return out;
}

double dot(const ScalarField& a, const ScalarField& b) {
    require_same_shape(a, b);
    double acc = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) acc += a[i] * b[i];
    return acc;
}

double norm2(const ScalarField& f) { return std::sqrt(dot(f, f)); }

double sum(const ScalarField& f) {
    double acc = 0.0;
    for (double v : f.values()) acc += v;
    return acc;
}

double mean(const ScalarField& f) { return sum(f) / static_cast<double>(f.size()); }

double max_abs(const ScalarField& f) {
    double m = 0.0;
    for (double v : f.values()) m = std::max(m, std::abs(v));
    return m;
}

double min_value(const ScalarField& f) {
    return *std::min_element(f.values().begin(), f.values().end());
}

double max_value(const ScalarField& f) {
    return *std::max_element(f.values().begin(), f.values().end());
}

VectorField2::VectorField2(int height, int width) : x(height, width), y(height, width) {}

VectorField2::VectorField2(ScalarField x_component, ScalarField y_component)
    : x(std::move(x_component)), y(std::move(y_component)) {
    require_same_shape(x, y);
}

VectorField2& VectorField2::operator+=(const VectorField2& other) {
    x += other.x;
    y += other.y;
    return *this;
}

VectorField2& VectorField2::operator-=(const VectorField2& other) {
    x -= other.x;
    y -= other.y;
    return *this;
}

VectorField2& VectorField2::operator*=(double factor) noexcept {
    x *= factor;
    y *= factor;
    return *this;
}

VectorField2 operator+(VectorField2 lhs, const VectorField2& rhs) { return lhs += rhs; }
VectorField2 operator-(VectorField2 lhs, const VectorField2& rhs) { return lhs -= rhs; }
VectorField2 operator*(double factor, VectorField2 field) { return field *= factor; }

VectorField2 hadamard(const ScalarField& weight, const VectorField2& v) {
    return VectorField2(hadamard(weight, v.x), hadamard(weight, v.y));
}

double dot(const VectorField2& a, const VectorField2& b) {
    require_same_shape(a.x, b.x);
    double acc = 0.0;
    for (std::size_t i = 0; i < a.x.size(); ++i) acc += a.x[i] * b.x[i] + a.y[i] * b.y[i];
    return acc;
}

double norm2(const VectorField2& v) { return std::sqrt(dot(v, v)); }

ScalarField magnitude(const VectorField2& v) {
    ScalarField out(v.height(), v.width());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = std::hypot(v.x[i], v.y[i]);
    return out;
}

GaussianKernel::GaussianKernel(double sigma) : sigma_(sigma) {
    if (!(sigma > 0.0) || !std::isfinite(sigma)) {
        throw ParameterError("gaussian sigma must be positive, got " + std::to_string(sigma));
    }
    radius_ = static_cast<int>(std::ceil(3.0 * sigma));
    taps_.resize(2 * static_cast<std::size_t>(radius_) + 1);
    double total = 0.0;
    for (int t = -radius_; t <= radius_; ++t) {
        const double v = std::exp(-0.5 * (t * t) / (sigma * sigma));
        taps_[t + radius_] = v;
        total += v;
    }
    for (double& v : taps_) v /= total;
}

int mirror_index(int index, int n) noexcept {
    const int period = 2 * n;
    int m = index % period;
    if (m < 0) m += period;
    return m < n ? m : period - 1 - m;
}

VectorField2 gradient(const ScalarField& f) {
    const int h = f.height();
    const int w = f.width();
    VectorField2 g(h, w);
    for (int r = 0; r < h; ++r) {
        for (int c = 0; c + 1 < w; ++c) g.x(r, c) = f(r, c + 1) - f(r, c);
    }
    for (int r = 0; r + 1 < h; ++r) {
        for (int c = 0; c < w; ++c) g.y(r, c) = f(r + 1, c) - f(r, c);
    }
    return g;
}

ScalarField divergence(const VectorField2& v) {
    const int h = v.height();
    const int w = v.width();
    ScalarField out(h, w);
    for (int r = 0; r < h; ++r) {
        for (int c = 0; c < w; ++c) {
            double dx;
            if (c == 0) {
                dx = v.x(r, c);
            } else if (c == w - 1) {
                dx = -v.x(r, c - 1);
            } else {
                dx = v.x(r, c) - v.x(r, c - 1);
            }
            double dy;
            if (r == 0) {
                dy = v.y(r, c);
            } else if (r == h - 1) {
                dy = -v.y(r - 1, c);
            } else {
                dy = v.y(r, c) - v.y(r - 1, c);
            }
            out(r, c) = dx + dy;
        }
    }
    return out;
}

ScalarField laplacian(const ScalarField& f) { return divergence(gradient(f)); }

ScalarField gaussian_convolve(const ScalarField& f, const GaussianKernel& kernel) {
    const int h = f.height();
    const int w = f.width();
    const int radius = kernel.radius();
    const auto taps = kernel.taps();

    // Rows: pad each row by reflection, then a straight dot product per pixel.
    ScalarField rows(h, w);
    std::vector<double> padded(static_cast<std::size_t>(w) + 2 * radius);
    for (int r = 0; r < h; ++r) {
        for (int i = 0; i < w + 2 * radius; ++i) padded[i] = f(r, mirror_index(i - radius, w));
        for (int c = 0; c < w; ++c) {
            double acc = 0.0;
            for (int t = 0; t <= 2 * radius; ++t) acc += taps[t] * padded[c + t];
            rows(r, c) = acc;
        }
    }

    // Columns: accumulate whole reflected rows, tap by tap.
    ScalarField out(h, w);
    for (int r = 0; r < h; ++r) {
        double* dst = &out(r, 0);
        for (int t = 0; t <= 2 * radius; ++t) {
            const double* src = &rows(mirror_index(r + t - radius, h), 0);
            const double g = taps[t];
            for (int c = 0; c < w; ++c) dst[c] += g * src[c];
        }
    }
    return out;
}

ScalarField clip(const ScalarField& f, double lo, double hi) {
    if (lo > hi) {
        throw ParameterError("clip bounds reversed: lo=" + std::to_string(lo) +
                             " > hi=" + std::to_string(hi));
    }
    ScalarField out = f;
    for (double& v : out.values()) v = std::clamp(v, lo, hi);
    return out;
}

}  // namespace reflsm
