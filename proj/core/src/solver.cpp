#include "reflsm/solver.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <string>

#include "reflsm/errors.hpp"

namespace reflsm {

namespace {

void require(bool ok, const std::string& message) {
    if (!ok) throw ParameterError(message);
}

bool finite_nonneg(double v) { return std::isfinite(v) && v >= 0.0; }
bool finite_positive(double v) { return std::isfinite(v) && v > 0.0; }

ScalarField s_ffr(const SolverState& state) {
    ScalarField fit(state.u_field.height(), state.u_field.width());
    for (std::size_t i = 0; i < fit.size(); ++i) {
        fit[i] = state.m_val + state.delta_c * state.u_field[i];
    }
    return fit;
}

double squared_sum(const ScalarField& f) { return dot(f, f); }

double total_variation(const VectorField2& v) {
    double acc = 0.0;
    for (std::size_t i = 0; i < v.x.size(); ++i) acc += std::hypot(v.x[i], v.y[i]);
    return acc;
}

}  // namespace

void SolverParams::validate() const {
    require(finite_nonneg(lambda_i), "lambda_i must be a nonnegative number");
    require(finite_nonneg(alpha_b), "alpha_b must be a nonnegative number");
    require(finite_nonneg(beta), "beta must be a nonnegative number");
    require(finite_positive(theta), "theta must be positive");
    require(finite_nonneg(tau), "tau must be a nonnegative number");
    require(finite_nonneg(rho1), "rho1 must be a nonnegative number");
    require(finite_positive(sigma), "sigma must be positive");
    require(finite_positive(alpha_mag), "alpha_mag must be positive");
    require(finite_positive(eps_div), "eps_div must be positive");
    require(finite_positive(eps_norm), "eps_norm must be positive");
    require(finite_positive(effective_eps_w()),
            "eps_w must be positive (it defaults to lambda_i when unset)");
    require(k_max >= 1, "k_max must be at least 1");
    require(delta_tol > 0.0, "delta_tol must be positive");
    require(finite_positive(cg_tolerance), "cg_tolerance must be positive");
    require(cg_max_iterations >= 1, "cg_max_iterations must be at least 1");
}

void SolverState::set_region_stats(double c1_value, double c2_value) {
    c1 = c1_value;
    c2 = c2_value;
    m_val = 0.5 * (c1 + c2);
    delta_c = 0.5 * (c1 - c2);
}

ScalarField SolverState::soft_mask() const {
    ScalarField w(u_field.height(), u_field.width());
    for (std::size_t i = 0; i < w.size(); ++i) w[i] = 0.5 * (1.0 + u_field[i]);
    return w;
}

VectorField2 shrink(const VectorField2& z, double threshold) {
    VectorField2 out(z.height(), z.width());
    if (std::isinf(threshold)) return out;
    for (std::size_t i = 0; i < z.x.size(); ++i) {
        const double norm = std::hypot(z.x[i], z.y[i]);
        if (norm <= threshold || norm == 0.0) continue;
        const double factor = 1.0 - threshold / norm;
        out.x[i] = factor * z.x[i];
        out.y[i] = factor * z.y[i];
    }
    return out;
}

RefLsmSolver::RefLsmSolver(ScalarField log_image, SolverParams params)
    : image_(std::move(log_image)),
      params_((params.validate(), std::move(params))),
      spectrum_(image_.height(), image_.width()),
      prior_(image_, params_.sigma, params_.alpha_mag, params_.eps_norm, params_.v_pre_presmooth) {
    structure_symbol_ = gaussian_symbol(prior_.kernel, image_.height(), image_.width());
    const auto eigen = spectrum_.eigenvalues();
    for (std::size_t i = 0; i < structure_symbol_.size(); ++i) {
        structure_symbol_[i] = structure_symbol_[i] * structure_symbol_[i] * eigen[i];
    }
}

SolverState RefLsmSolver::initialize() const {
    const int h = image_.height();
    const int w = image_.width();
    SolverState state{
        .s_field = image_,
        .b_field = ScalarField(h, w),
        .u_field = ScalarField(h, w),
        .d_field = VectorField2(h, w),
        .p_field = VectorField2(h, w),
        .energy_trace = {},
        .u_change_trace = {},
        .primal_residual_trace = {},
    };

    if (max_value(image_) - min_value(image_) <= 0.0) {
        state.fallback_init = true;
        const double cy = 0.5 * (h - 1);
        const double cx = 0.5 * (w - 1);
        const double radius = std::min(h, w) / 4.0;
        for (int r = 0; r < h; ++r) {
            for (int c = 0; c < w; ++c) {
                const double dy = r - cy;
                const double dx = c - cx;
                state.u_field(r, c) = dx * dx + dy * dy <= radius * radius ? 1.0 : -1.0;
            }
        }
        return state;
    }

    const double centre = mean(image_);
    for (std::size_t i = 0; i < image_.size(); ++i) {
        state.u_field[i] = image_[i] - centre >= 0.0 ? 1.0 : -1.0;
    }
    return state;
}

RegionStats RefLsmSolver::update_region_stats(const SolverState& state) const {
    double inside = 0.0;
    double inside_mass = 0.0;
    double outside = 0.0;
    double outside_mass = 0.0;
    for (std::size_t i = 0; i < state.s_field.size(); ++i) {
        const double w = 0.5 * (1.0 + state.u_field[i]);
        inside += state.s_field[i] * w;
        inside_mass += w;
        outside += state.s_field[i] * (1.0 - w);
        outside_mass += 1.0 - w;
    }
    return {inside / (inside_mass + params_.eps_div), outside / (outside_mass + params_.eps_div)};
}

UUpdate RefLsmSolver::update_u(const SolverState& state) const {
    double contrast = state.delta_c * state.delta_c;
    bool degenerate = false;
    if (contrast < kMinContrastWeight) {
        contrast = kMinContrastWeight;
        degenerate = true;
    }
    ScalarField rhs = state.s_field;
    for (double& v : rhs.values()) v = state.delta_c * (v - state.m_val);
    ScalarField unclipped = solve_helmholtz(rhs, contrast, params_.theta, spectrum_);
    ScalarField clipped = clip(unclipped, -1.0, 1.0);
    return {std::move(unclipped), std::move(clipped), degenerate};
}

ScalarField RefLsmSolver::update_b(const SolverState& state) const {
    return solve_bias(image_ - state.s_field, params_.effective_eps_w(), params_.alpha_b,
                      spectrum_);
}

ScalarField RefLsmSolver::apply_s_operator(const ScalarField& s, const ScalarField& weight) const {
    ScalarField out = (1.0 + params_.lambda_i) * s;
    if (params_.rho1 != 0.0) out -= params_.rho1 * laplacian(s);
    if (params_.tau != 0.0) {
        const VectorField2 structure = structure_op(s, prior_.kernel);
        out += (2.0 * params_.tau) * structure_op_adjoint(hadamard(weight, structure), prior_.kernel);
    }
    return out;
}

ScalarField RefLsmSolver::s_rhs(const SolverState& state, const ScalarField& weight) const {
    ScalarField rhs = s_ffr(state);
    rhs += params_.lambda_i * (image_ - state.b_field);
    if (params_.rho1 != 0.0) {
        rhs -= params_.rho1 * (divergence(state.d_field) - divergence(state.p_field));
    }
    if (params_.tau != 0.0) {
        rhs += (2.0 * params_.tau) *
               structure_op_adjoint(hadamard(weight, prior_.v_pre), prior_.kernel);
    }
    return rhs;
}

ScalarField RefLsmSolver::precondition_s(const ScalarField& r, double mean_weight) const {
    const auto eigen = spectrum_.eigenvalues();
    std::vector<double> symbol(eigen.size());
    const double diagonal = 1.0 + params_.lambda_i;
    const double prior_scale = 2.0 * params_.tau * mean_weight;
    for (std::size_t i = 0; i < symbol.size(); ++i) {
        symbol[i] = 1.0 / (diagonal + params_.rho1 * eigen[i] + prior_scale * structure_symbol_[i]);
    }
    return apply_spectral_multiplier(r, symbol);
}

SUpdate RefLsmSolver::update_s(const SolverState& state) const {
    const ScalarField weight = state.soft_mask();
    const ScalarField rhs = s_rhs(state, weight);
    const double mean_weight = mean(weight);
    ScalarField s = state.s_field;
    const CgReport cg = conjugate_gradient(
        [&](const ScalarField& x) { return apply_s_operator(x, weight); },
        [&](const ScalarField& r) { return precondition_s(r, mean_weight); }, rhs, s,
        params_.cg_tolerance, params_.cg_max_iterations);
    return {std::move(s), cg};
}

VectorField2 RefLsmSolver::update_d(const SolverState& state) const {
    const double threshold = params_.rho1 > 0.0 ? params_.beta / params_.rho1
                                                : std::numeric_limits<double>::infinity();
    return shrink(gradient(state.s_field) + state.p_field, threshold);
}

VectorField2 RefLsmSolver::update_p(const SolverState& state) const {
    return state.p_field + gradient(state.s_field) - state.d_field;
}

double RefLsmSolver::total_energy(const SolverState& state) const {
    const ScalarField fit = state.s_field - s_ffr(state);
    const ScalarField fidelity = image_ - state.s_field - state.b_field;
    const VectorField2 grad_b = gradient(state.b_field);
    const VectorField2 grad_u = gradient(state.u_field);
    return 0.5 * squared_sum(fit) + 0.5 * params_.lambda_i * squared_sum(fidelity) +
           0.5 * params_.alpha_b * dot(grad_b, grad_b) +
           params_.beta * total_variation(gradient(state.s_field)) +
           0.5 * params_.theta * dot(grad_u, grad_u) +
           prior_energy(state.s_field, state.soft_mask(), prior_, params_.tau);
}

EnergyGradient RefLsmSolver::energy_gradient(const SolverState& state) const {
    const ScalarField fit = state.s_field - s_ffr(state);
    const ScalarField weight = state.soft_mask();

    // TV term: grad^T (g / |g|), taking 0 where g vanishes.
    VectorField2 normal = gradient(state.s_field);
    for (std::size_t i = 0; i < normal.x.size(); ++i) {
        const double norm = std::hypot(normal.x[i], normal.y[i]);
        if (norm > 0.0) {
            normal.x[i] /= norm;
            normal.y[i] /= norm;
        }
    }
    ScalarField wrt_s = fit + params_.lambda_i * (state.s_field + state.b_field - image_) -
                        params_.beta * divergence(normal) +
                        prior_gradient(state.s_field, weight, prior_, params_.tau);

    ScalarField wrt_b = params_.lambda_i * (state.b_field + state.s_field - image_) -
                        params_.alpha_b * laplacian(state.b_field);

    const VectorField2 misfit = structure_op(state.s_field, prior_.kernel) - prior_.v_pre;
    ScalarField wrt_u = -state.delta_c * fit - params_.theta * laplacian(state.u_field);
    for (std::size_t i = 0; i < wrt_u.size(); ++i) {
        wrt_u[i] += 0.5 * params_.tau * (misfit.x[i] * misfit.x[i] + misfit.y[i] * misfit.y[i]);
    }
    return {std::move(wrt_s), std::move(wrt_b), std::move(wrt_u)};
}

double RefLsmSolver::augmented_lagrangian(const SolverState& state,
                                          const ScalarField& prior_weight) const {
    const ScalarField fit = state.s_field - s_ffr(state);
    const ScalarField fidelity = image_ - state.s_field - state.b_field;
    const VectorField2 grad_b = gradient(state.b_field);
    const VectorField2 grad_u = gradient(state.u_field);
    const VectorField2 coupling = state.d_field - gradient(state.s_field) - state.p_field;
    return 0.5 * squared_sum(fit) + 0.5 * params_.lambda_i * squared_sum(fidelity) +
           0.5 * params_.alpha_b * dot(grad_b, grad_b) + 0.5 * params_.theta * dot(grad_u, grad_u) +
           params_.beta * total_variation(state.d_field) +
           prior_energy(state.s_field, prior_weight, prior_, params_.tau) +
           0.5 * params_.rho1 * dot(coupling, coupling);
}

double RefLsmSolver::step(SolverState& state, SolverReport& report) const {
    const RegionStats stats = update_region_stats(state);
    state.set_region_stats(stats.c1, stats.c2);

    UUpdate u_update = update_u(state);
    if (u_update.degenerate_contrast) report.degenerate_contrast_iterations.push_back(state.iteration);
    ScalarField previous_u = std::move(state.u_field);
    state.u_field = std::move(u_update.clipped);

    state.b_field = update_b(state);

    SUpdate s_update = update_s(state);
    report.total_cg_iterations += s_update.cg.iterations;
    if (!s_update.cg.converged) {
        report.warnings.push_back("iteration " + std::to_string(state.iteration) +
                                  ": S-subproblem CG stopped at relative residual " +
                                  std::to_string(s_update.cg.relative_residual) + " after " +
                                  std::to_string(s_update.cg.iterations) + " iterations");
    }
    state.s_field = std::move(s_update.field);

    state.d_field = update_d(state);
    state.p_field = update_p(state);

    const VectorField2 primal = gradient(state.s_field) - state.d_field;
    state.primal_residual_trace.push_back(norm2(primal));
    state.energy_trace.push_back(total_energy(state));

    const double change =
        norm2(state.u_field - previous_u) / std::max(norm2(previous_u), 1.0);
    state.u_change_trace.push_back(change);
    ++state.iteration;
    return change;
}

SegmentationResult RefLsmSolver::run() const {
    const auto start = std::chrono::steady_clock::now();
    SolverReport report;
    SolverState state = initialize();
    report.fallback_init = state.fallback_init;
    if (state.fallback_init) {
        report.warnings.push_back("constant image: level set initialized on a centred disk");
    }

    for (int k = 0; k < params_.k_max; ++k) {
        const double change = step(state, report);
        if (change < params_.delta_tol) {
            report.converged = true;
            break;
        }
    }
    report.iterations = state.iteration;
    report.final_energy = state.energy_trace.empty() ? total_energy(state) : state.energy_trace.back();

    ScalarField corrected = image_ - state.b_field;
    const double peak = max_value(corrected);
    for (double& v : corrected.values()) v = std::exp(v - peak);

    report.seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

    return SegmentationResult{
        .mask = sign_mask(state.u_field),
        .corrected_image = std::move(corrected),
        .s_field = std::move(state.s_field),
        .b_field = std::move(state.b_field),
        .u_field = std::move(state.u_field),
        .report = std::move(report),
        .energy_trace = std::move(state.energy_trace),
        .u_change_trace = std::move(state.u_change_trace),
        .primal_residual_trace = std::move(state.primal_residual_trace),
    };
}

SegmentationResult run(const ScalarField& log_image, const SolverParams& params) {
    return RefLsmSolver(log_image, params).run();
}

}  // namespace reflsm
