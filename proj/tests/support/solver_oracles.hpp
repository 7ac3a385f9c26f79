#pragma once

// Dense reference for the reflectance subproblem and random solver states.

#include <cstdint>
#include <utility>

#include "oracles.hpp"
#include "reflsm/solver.hpp"

namespace oracle {

using reflsm::RefLsmSolver;
using reflsm::ScalarField;
using reflsm::SolverParams;
using reflsm::SolverState;

/// Random log-domain-like image plus a random state with region statistics set.
struct RandomInstance {
    RefLsmSolver solver;
    SolverState state;
};

inline RandomInstance random_instance(std::uint64_t seed, SolverParams params = {}, int h = 16, int w = 16) {
    Random rng(seed);
    RefLsmSolver solver(rng.field(h, w, -3.0, 0.0), params);
    SolverState state = solver.initialize();
    state.s_field = rng.field(h, w, -3.0, 0.0);
    state.b_field = rng.field(h, w, -0.5, 0.5);
    state.u_field = rng.field(h, w, -1.0, 1.0);
    state.d_field = rng.vector_field(h, w, -0.3, 0.3);
    state.p_field = rng.vector_field(h, w, -0.3, 0.3);
    const auto stats = solver.update_region_stats(state);
    state.set_region_stats(stats.c1, stats.c2);
    return {std::move(solver), std::move(state)};
}

/// Dense assembly of the S-subproblem from explicit stencil matrices.
struct DenseSProblem {
    Matrix a;
    Vector rhs;
};

inline DenseSProblem dense_s_problem(const RefLsmSolver& solver, const SolverState& state) {
    const SolverParams& p = solver.params();
    const int h = state.s_field.height();
    const int w = state.s_field.width();
    const int n = h * w;
    const Matrix dx = diff_x(h, w);
    const Matrix dy = diff_y(h, w);
    const Matrix m = structure_matrix(h, w, p.sigma);

    Vector weight(2 * n);
    for (int i = 0; i < n; ++i) weight[i] = weight[n + i] = 0.5 * (1.0 + state.u_field[i]);

    Matrix a = (1.0 + p.lambda_i) * Matrix::Identity(n, n) - p.rho1 * laplacian(h, w) +
                       2.0 * p.tau * m.transpose() * weight.asDiagonal() * m;

    Vector s_ffr(n);
    for (int i = 0; i < n; ++i) s_ffr[i] = state.m_val + state.delta_c * state.u_field[i];
    const Vector image = to_vector(solver.image());
    const Vector bias = to_vector(state.b_field);
    const Vector dmp_x = to_vector(state.d_field.x) - to_vector(state.p_field.x);
    const Vector dmp_y = to_vector(state.d_field.y) - to_vector(state.p_field.y);
    Vector rhs = s_ffr + p.lambda_i * (image - bias) +
                         p.rho1 * (dx.transpose() * dmp_x + dy.transpose() * dmp_y) +
                         2.0 * p.tau * m.transpose() * weight.asDiagonal() * stack(solver.prior().v_pre);
    return {std::move(a), std::move(rhs)};
}

inline double relative_error(const ScalarField& got, const Vector& expected) {
    return (to_vector(got) - expected).norm() / expected.norm();
}
}  // namespace oracle
