#pragma once

// Cosine-domain diagonalization of the mirror-boundary Laplacian and the
// closed-form Helmholtz-type solves built on it.

#include <span>
#include <vector>

#include "reflsm/grid.hpp"

namespace reflsm {

class GaussianKernel;

/// Eigenvalues of the negative 5-point Neumann Laplacian,
/// (2 - 2 cos(pi k / H)) + (2 - 2 cos(pi l / W)), stored row-major over (k, l).
class NeumannSpectrum {
public:
    NeumannSpectrum(int height, int width);

    int height() const noexcept { return height_; }
    int width() const noexcept { return width_; }
    std::span<const double> eigenvalues() const noexcept { return eigenvalues_; }
    double operator()(int k, int l) const noexcept {
        return eigenvalues_[static_cast<std::size_t>(k) * width_ + l];
    }

private:
    int height_;
    int width_;
    std::vector<double> eigenvalues_;
};

/// Orthonormal 2-D type-II cosine transform.
ScalarField dct2_forward(const ScalarField& f);
/// Inverse of dct2_forward (orthonormal type-III transform).
ScalarField dct2_inverse(const ScalarField& coefficients);

/// Computes C^T diag(symbol) C f, where C is the 2-D cosine transform.
/// symbol is row-major over (k, l) and must have f.size() entries.
ScalarField apply_spectral_multiplier(const ScalarField& f, std::span<const double> symbol);

/// Cosine-domain symbol of gaussian_convolve on an H x W grid:
/// g(k) g(l) with g(k) = sum_t taps[t] cos(pi k t / n).
std::vector<double> gaussian_symbol(const GaussianKernel& kernel, int height, int width);

/// Solves (c - theta * laplacian) u = rhs. With c == 0 the constant mode is
/// left at zero (minimum-norm solution); c == theta == 0 is singular.
ScalarField solve_helmholtz(const ScalarField& rhs, double c, double theta,
                            const NeumannSpectrum& spectrum);

/// Smooth bias estimate: solves eps_w (B - residual) - alpha_b laplacian(B) = 0.
/// Returns residual unchanged when alpha_b == 0.
ScalarField solve_bias(const ScalarField& residual, double eps_w, double alpha_b,
                       const NeumannSpectrum& spectrum);

}  // namespace reflsm
