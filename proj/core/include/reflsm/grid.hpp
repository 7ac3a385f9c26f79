#pragma once

// Raster fields and the discrete differential operators the solver is built
// from. All operators use the half-sample mirror (Neumann) boundary
// convention, the one diagonalized by the type-II cosine transform.

#include <cstddef>
#include <span>
#include <vector>

namespace reflsm {

/// Real-valued H x W raster, row-major. Both dimensions are at least 2.
class ScalarField {
public:
    ScalarField(int height, int width, double fill = 0.0);
    /// Takes ownership of row-major values; throws on size mismatch or non-finite entries.
    ScalarField(int height, int width, std::vector<double> values);

    int height() const noexcept { return height_; }
    int width() const noexcept { return width_; }
    std::size_t size() const noexcept { return values_.size(); }

    double& operator()(int row, int col) noexcept {
        return values_[static_cast<std::size_t>(row) * width_ + col];
    }
    double operator()(int row, int col) const noexcept {
        return values_[static_cast<std::size_t>(row) * width_ + col];
    }
    double& operator[](std::size_t i) noexcept { return values_[i]; }
    double operator[](std::size_t i) const noexcept { return values_[i]; }

    std::span<double> values() noexcept { return values_; }
    std::span<const double> values() const noexcept { return values_; }

    bool same_shape(const ScalarField& other) const noexcept {
        return height_ == other.height_ && width_ == other.width_;
    }

    ScalarField& operator+=(const ScalarField& other);
    ScalarField& operator-=(const ScalarField& other);
    ScalarField& operator*=(double factor) noexcept;

    friend bool operator==(const ScalarField&, const ScalarField&) = default;

private:
    int height_;
    int width_;
    std::vector<double> values_;
};

ScalarField operator+(ScalarField lhs, const ScalarField& rhs);
ScalarField operator-(ScalarField lhs, const ScalarField& rhs);
ScalarField operator*(double factor, ScalarField field);
ScalarField operator*(ScalarField field, double factor);

/// Pointwise product.
ScalarField hadamard(const ScalarField& a, const ScalarField& b);

double dot(const ScalarField& a, const ScalarField& b);
double norm2(const ScalarField& f);
double sum(const ScalarField& f);
double mean(const ScalarField& f);
double max_abs(const ScalarField& f);
double min_value(const ScalarField& f);
double max_value(const ScalarField& f);

/// Two components of equal shape, e.g. a gradient.
struct VectorField2 {
    VectorField2(int height, int width);
    VectorField2(ScalarField x_component, ScalarField y_component);

    int height() const noexcept { return x.height(); }
    int width() const noexcept { return x.width(); }

    VectorField2& operator+=(const VectorField2& other);
    VectorField2& operator-=(const VectorField2& other);
    VectorField2& operator*=(double factor) noexcept;

    friend bool operator==(const VectorField2&, const VectorField2&) = default;

    ScalarField x;
    ScalarField y;
};

VectorField2 operator+(VectorField2 lhs, const VectorField2& rhs);
VectorField2 operator-(VectorField2 lhs, const VectorField2& rhs);
VectorField2 operator*(double factor, VectorField2 field);

/// Scales both components pixelwise by a scalar field.
VectorField2 hadamard(const ScalarField& weight, const VectorField2& v);

double dot(const VectorField2& a, const VectorField2& b);
double norm2(const VectorField2& v);
/// Per-pixel Euclidean length sqrt(x^2 + y^2).
ScalarField magnitude(const VectorField2& v);

/// Truncated, renormalized Gaussian with radius ceil(3 sigma).
class GaussianKernel {
public:
    explicit GaussianKernel(double sigma);

    double sigma() const noexcept { return sigma_; }
    int radius() const noexcept { return radius_; }
    /// 2*radius+1 taps, centre at index radius.
    std::span<const double> taps() const noexcept { return taps_; }

private:
    double sigma_;
    int radius_;
    std::vector<double> taps_;
};

/// Maps any integer index onto [0, n) by half-sample symmetric reflection
/// (..., 1, 0 | 0, 1, ..., n-1 | n-1, ...), periodic with period 2n.
int mirror_index(int index, int n) noexcept;

/// Forward differences; the last column of x and the last row of y are zero.
VectorField2 gradient(const ScalarField& f);

/// Backward differences with boundary truncation: the exact negative adjoint of gradient().
ScalarField divergence(const VectorField2& v);

/// divergence(gradient(f)); the 5-point stencil with mirror boundary.
ScalarField laplacian(const ScalarField& f);

/// Separable convolution, rows first then columns, mirror padding.
ScalarField gaussian_convolve(const ScalarField& f, const GaussianKernel& kernel);

/// Pointwise projection onto [lo, hi].
ScalarField clip(const ScalarField& f, double lo, double hi);

}  // namespace reflsm
