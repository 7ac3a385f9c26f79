#pragma once

#include <cmath>

#include "reflsm/grid.hpp"

namespace reflsm {

struct CgReport {
    int iterations = 0;
    double relative_residual = 0.0;
    bool converged = false;
};

/// Preconditioned conjugate gradient for a symmetric positive definite
/// operator, matrix-free. x holds the initial guess on entry and the solution
/// on exit. Stops once |r| <= tolerance * |rhs| or after max_iterations.
template <typename ApplyOp, typename Precondition>
CgReport conjugate_gradient(ApplyOp&& apply, Precondition&& precondition, const ScalarField& rhs,
                            ScalarField& x, double tolerance, int max_iterations) {
    CgReport report;
    const double rhs_norm = norm2(rhs);
    if (rhs_norm == 0.0) {
        x = ScalarField(rhs.height(), rhs.width());
        report.converged = true;
        return report;
    }

    ScalarField r = rhs - apply(x);
    double r_norm = norm2(r);
    if (r_norm <= tolerance * rhs_norm) {
        report.relative_residual = r_norm / rhs_norm;
        report.converged = true;
        return report;
    }
    ScalarField z = precondition(r);
    ScalarField p = z;
    double rz = dot(r, z);

    for (int it = 1; it <= max_iterations; ++it) {
        const ScalarField ap = apply(p);
        const double curvature = dot(p, ap);
        if (!(curvature > 0.0)) break;  // lost positive definiteness numerically
        const double alpha = rz / curvature;
        for (std::size_t i = 0; i < x.size(); ++i) {
            x[i] += alpha * p[i];
            r[i] -= alpha * ap[i];
        }
        report.iterations = it;
        r_norm = norm2(r);
        if (r_norm <= tolerance * rhs_norm) {
            report.converged = true;
            break;
        }
        z = precondition(r);
        const double rz_next = dot(r, z);
        const double beta = rz_next / rz;
        rz = rz_next;
        for (std::size_t i = 0; i < p.size(); ++i) p[i] = z[i] + beta * p[i];
    }
    report.relative_residual = r_norm / rhs_norm;
    return report;
}

}  // namespace reflsm
