#pragma once

// ADMM driver for joint segmentation and bias correction in the log domain.
//
// The log image I is decomposed as I = S + B (reflectance + smooth bias) while a
// relaxed level set u in [-1, 1] partitions S into two regions with means c1, c2.
// Each outer iteration runs, in order:
//   (a) region statistics c1, c2 from S and w = (1 + u) / 2
//   (b) u: cosine-domain Helmholtz solve, then clip to [-1, 1]
//   (c) B: cosine-domain smoothing of I - S
//   (d) S: preconditioned CG on the S-subproblem, with w recomputed from the new u
//   (e) d: vector shrinkage of grad S + p
//   (f) p: scaled dual ascent p + grad S - d
// and stops when |u_new - u_old|_2 / max(|u_old|_2, 1) < delta_tol.

#include <optional>
#include <string>
#include <vector>

#include "reflsm/cg.hpp"
#include "reflsm/grid.hpp"
#include "reflsm/mask.hpp"
#include "reflsm/spectral.hpp"
#include "reflsm/structural_prior.hpp"

namespace reflsm {

struct SolverParams {
    double lambda_i = 1.0;   ///< Retinex fidelity weight
    double alpha_b = 15.0;   ///< bias smoothness
    double beta = 0.02;      ///< TV weight on S
    double theta = 0.1;      ///< level-set smoothness
    double tau = 0.5;        ///< structural prior weight
    double rho1 = 1.0;       ///< ADMM penalty
    double sigma = 3.0;      ///< prior Gaussian scale (pixels)
    double alpha_mag = 0.1;  ///< expected structural strength
    double eps_div = 1e-8;   ///< region-mean division guard
    double eps_norm = 1e-6;  ///< reference-field normalization guard
    /// Data weight of the bias subproblem; follows lambda_i when unset.
    std::optional<double> eps_w;
    int k_max = 30;
    double delta_tol = 1e-4;

    double cg_tolerance = 1e-6;
    int cg_max_iterations = 200;
    /// Build the reference direction field from G * I instead of I.
    bool v_pre_presmooth = false;

    double effective_eps_w() const { return eps_w.value_or(lambda_i); }
    /// Throws ParameterError naming the first offending field.
    void validate() const;
};

/// Values below this are replaced when used as the u-subproblem data weight.
inline constexpr double kMinContrastWeight = 1e-12;

struct SolverState {
    ScalarField s_field;
    ScalarField b_field;
    ScalarField u_field;
    VectorField2 d_field;
    VectorField2 p_field;
    double c1 = 0.0;
    double c2 = 0.0;
    double m_val = 0.0;    ///< (c1 + c2) / 2
    double delta_c = 0.0;  ///< (c1 - c2) / 2
    int iteration = 0;
    bool fallback_init = false;
    std::vector<double> energy_trace;
    std::vector<double> u_change_trace;
    std::vector<double> primal_residual_trace;

    /// Sets c1, c2 and the derived m_val, delta_c.
    void set_region_stats(double c1_value, double c2_value);
    /// (1 + u) / 2.
    ScalarField soft_mask() const;
};

struct RegionStats {
    double c1;
    double c2;
};

struct UUpdate {
    ScalarField unclipped;
    ScalarField clipped;
    /// delta_c^2 fell below kMinContrastWeight and was regularized.
    bool degenerate_contrast = false;
};

struct SUpdate {
    ScalarField field;
    CgReport cg;
};

struct EnergyGradient {
    ScalarField wrt_s;
    ScalarField wrt_b;
    ScalarField wrt_u;
};

struct SolverReport {
    int iterations = 0;
    double seconds = 0.0;
    bool converged = false;
    double final_energy = 0.0;
    bool fallback_init = false;
    std::vector<int> degenerate_contrast_iterations;
    int total_cg_iterations = 0;
    std::vector<std::string> warnings;
};

struct SegmentationResult {
    BinaryMask mask;
    /// exp(I - B) scaled so its maximum is 1.
    ScalarField corrected_image;
    ScalarField s_field;
    ScalarField b_field;
    ScalarField u_field;
    SolverReport report;
    std::vector<double> energy_trace;
    std::vector<double> u_change_trace;
    std::vector<double> primal_residual_trace;
};

/// Per-pixel prox of threshold * |.|: max(1 - threshold / |z|, 0) z, with 0 -> 0.
VectorField2 shrink(const VectorField2& z, double threshold);

/// Holds the log image and everything precomputed from it; the update steps
/// are const and may be called on independent states concurrently.
class RefLsmSolver {
public:
    RefLsmSolver(ScalarField log_image, SolverParams params);

    const ScalarField& image() const noexcept { return image_; }
    const SolverParams& params() const noexcept { return params_; }
    const NeumannSpectrum& spectrum() const noexcept { return spectrum_; }
    const StructuralPrior& prior() const noexcept { return prior_; }

    /// S = I, B = 0, d = p = 0, u = sign(I - mean I). A constant image falls
    /// back to +1 on a centred disk of radius min(H, W) / 4.
    SolverState initialize() const;

    RegionStats update_region_stats(const SolverState& state) const;
    /// Uses the state's current c1, c2.
    UUpdate update_u(const SolverState& state) const;
    ScalarField update_b(const SolverState& state) const;
    /// Warm-started at the state's S; the prior weight is (1 + u) / 2 of the state's u.
    SUpdate update_s(const SolverState& state) const;
    VectorField2 update_d(const SolverState& state) const;
    VectorField2 update_p(const SolverState& state) const;

    /// The model energy evaluated at the state's c1, c2, with TV on grad S.
    double total_energy(const SolverState& state) const;
    /// Gradient of total_energy in each block, c1 and c2 held fixed.
    EnergyGradient energy_gradient(const SolverState& state) const;
    /// Augmented Lagrangian with the prior weight passed explicitly so it can be
    /// frozen across a block update.
    double augmented_lagrangian(const SolverState& state, const ScalarField& prior_weight) const;

    /// Applies the S-subproblem operator
    /// (1 + lambda_i) S - rho1 lap S + 2 tau L*(w L S).
    ScalarField apply_s_operator(const ScalarField& s, const ScalarField& weight) const;
    ScalarField s_rhs(const SolverState& state, const ScalarField& weight) const;

    /// One outer iteration (a)-(f). Returns the relative u-change.
    double step(SolverState& state, SolverReport& report) const;

    SegmentationResult run() const;

private:
    ScalarField precondition_s(const ScalarField& r, double mean_weight) const;

    ScalarField image_;
    SolverParams params_;
    NeumannSpectrum spectrum_;
    StructuralPrior prior_;
    std::vector<double> structure_symbol_;  ///< cosine symbol of L* L
};

/// Convenience wrapper: RefLsmSolver(log_image, params).run().
SegmentationResult run(const ScalarField& log_image, const SolverParams& params);

}  // namespace reflsm
