#include "reflsm/structural_prior.hpp"

#include <algorithm>
#include <cmath>

#include "reflsm/errors.hpp"

namespace reflsm {

VectorField2 structure_op(const ScalarField& s, const GaussianKernel& kernel) {
    return gradient(gaussian_convolve(s, kernel));
}

ScalarField structure_op_adjoint(const VectorField2& v, const GaussianKernel& kernel) {
    return gaussian_convolve(-1.0 * divergence(v), kernel);
}

VectorField2 build_v_pre(const ScalarField& image, const GaussianKernel& kernel, double alpha_mag,
                         double eps_norm) {
    if (!(alpha_mag > 0.0)) throw ParameterError("alpha_mag must be positive");
    if (!(eps_norm > 0.0)) throw ParameterError("eps_norm must be positive");
    VectorField2 v = structure_op(image, kernel);
    for (std::size_t i = 0; i < v.x.size(); ++i) {
        const double scale = alpha_mag / std::max(std::hypot(v.x[i], v.y[i]), eps_norm);
        v.x[i] *= scale;
        v.y[i] *= scale;
    }
    return v;
}

StructuralPrior::StructuralPrior(const ScalarField& image, double sigma, double alpha_mag,
                                 double eps_norm, bool presmooth)
    : kernel(sigma),
      alpha_mag(alpha_mag),
      eps_norm(eps_norm),
      v_pre(build_v_pre(presmooth ? gaussian_convolve(image, GaussianKernel(sigma)) : image,
                        kernel, alpha_mag, eps_norm)) {}

double prior_energy(const ScalarField& s, const ScalarField& weight, const StructuralPrior& prior,
                    double tau) {
    if (tau < 0.0) throw ParameterError("tau must be nonnegative");
    if (tau == 0.0) return 0.0;
    const VectorField2 diff = structure_op(s, prior.kernel) - prior.v_pre;
    double acc = 0.0;
    for (std::size_t i = 0; i < s.size(); ++i) {
        acc += weight[i] * (diff.x[i] * diff.x[i] + diff.y[i] * diff.y[i]);
    }
    return tau * acc;
}

ScalarField prior_gradient(const ScalarField& s, const ScalarField& weight,
                           const StructuralPrior& prior, double tau) {
    const VectorField2 diff = structure_op(s, prior.kernel) - prior.v_pre;
    return (2.0 * tau) * structure_op_adjoint(hadamard(weight, diff), prior.kernel);
}

}  // namespace reflsm
