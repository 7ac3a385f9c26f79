#pragma once

// Linearized structural prior: the smoothed-gradient operator L[S] = grad(G * S),
// its adjoint, and the fixed-magnitude reference direction field it is pulled toward.

#include "reflsm/grid.hpp"

namespace reflsm {

/// grad(gaussian_convolve(s, kernel)).
VectorField2 structure_op(const ScalarField& s, const GaussianKernel& kernel);

/// gaussian_convolve(-divergence(v), kernel); the adjoint of structure_op.
ScalarField structure_op_adjoint(const VectorField2& v, const GaussianKernel& kernel);

/// Per pixel: alpha_mag * L[I] / max(|L[I]|, eps_norm). Magnitude never exceeds alpha_mag.
VectorField2 build_v_pre(const ScalarField& image, const GaussianKernel& kernel, double alpha_mag,
                         double eps_norm);

struct StructuralPrior {
    /// Precomputes the reference field. With presmooth, the reference is
    /// built from G * image instead of image.
    StructuralPrior(const ScalarField& image, double sigma, double alpha_mag, double eps_norm,
                    bool presmooth = false);

    GaussianKernel kernel;
    double alpha_mag;
    double eps_norm;
    VectorField2 v_pre;
};

/// tau * sum_x w(x) |L[S](x) - v_pre(x)|^2.
double prior_energy(const ScalarField& s, const ScalarField& weight, const StructuralPrior& prior,
                    double tau);

/// Gradient of prior_energy with respect to S: 2 tau L*(w (L[S] - v_pre)).
ScalarField prior_gradient(const ScalarField& s, const ScalarField& weight,
                           const StructuralPrior& prior, double tau);

}  // namespace reflsm
