#include "reflsm/spectral.hpp"

#include <fftw3.h>

#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <string>
#include <tuple>

#include "reflsm/errors.hpp"

namespace reflsm {

namespace {

enum class Direction { forward, inverse };

// FFTW's planner is not thread-safe, but executing an existing plan on fresh
// arrays is. Plans are created once per (shape, direction) with
// FFTW_ESTIMATE (deterministic choice) and FFTW_UNALIGNED so they can run
// on any std::vector buffers.
class PlanCache {
public:
    static PlanCache& instance() {
        static PlanCache cache;
        return cache;
    }

    fftw_plan get(int height, int width, Direction direction) {
        std::lock_guard lock(mutex_);
        const auto key = std::make_tuple(height, width, direction);
        if (auto it = plans_.find(key); it != plans_.end()) return it->second;
        std::vector<double> in(static_cast<std::size_t>(height) * width);
        std::vector<double> out(in.size());
        const fftw_r2r_kind kind = direction == Direction::forward ? FFTW_REDFT10 : FFTW_REDFT01;
        fftw_plan plan = fftw_plan_r2r_2d(height, width, in.data(), out.data(), kind, kind,
                                          FFTW_ESTIMATE | FFTW_UNALIGNED);
        if (plan == nullptr) throw Error("fftw failed to create a cosine transform plan");
        plans_.emplace(key, plan);
        return plan;
    }

    PlanCache(const PlanCache&) = delete;
    PlanCache& operator=(const PlanCache&) = delete;

private:
    PlanCache() = default;
    ~PlanCache() {
        for (auto& [key, plan] : plans_) fftw_destroy_plan(plan);
    }

    std::mutex mutex_;
    std::map<std::tuple<int, int, Direction>, fftw_plan> plans_;
};

// Unnormalized transforms: inverse(forward(f)) == 4 H W f.
std::vector<double> redft10(const ScalarField& f) {
    std::vector<double> in(f.values().begin(), f.values().end());
    std::vector<double> out(in.size());
    fftw_plan plan = PlanCache::instance().get(f.height(), f.width(), Direction::forward);
    fftw_execute_r2r(plan, in.data(), out.data());
    return out;
}

ScalarField redft01(std::vector<double> coefficients, int height, int width) {
    std::vector<double> out(coefficients.size());
    fftw_plan plan = PlanCache::instance().get(height, width, Direction::inverse);
    fftw_execute_r2r(plan, coefficients.data(), out.data());
    return ScalarField(height, width, std::move(out));
}

double orthonormal_scale(int k, int n) {
    return k == 0 ? 1.0 / std::sqrt(4.0 * n) : 1.0 / std::sqrt(2.0 * n);
}

void require_spectrum_shape(const ScalarField& f, const NeumannSpectrum& spectrum) {
    if (f.height() != spectrum.height() || f.width() != spectrum.width()) {
        throw DimensionError("spectrum is " + std::to_string(spectrum.height()) + "x" +
                             std::to_string(spectrum.width()) + " but field is " +
                             std::to_string(f.height()) + "x" + std::to_string(f.width()));
    }
}

}  // namespace

NeumannSpectrum::NeumannSpectrum(int height, int width) : height_(height), width_(width) {
    if (height < 2 || width < 2) throw DimensionError("spectrum needs at least a 2x2 grid");
    eigenvalues_.resize(static_cast<std::size_t>(height) * width);
    for (int k = 0; k < height; ++k) {
        const double row = 2.0 - 2.0 * std::cos(std::numbers::pi * k / height);
        for (int l = 0; l < width; ++l) {
            const double col = 2.0 - 2.0 * std::cos(std::numbers::pi * l / width);
            eigenvalues_[static_cast<std::size_t>(k) * width + l] = row + col;
        }
    }
    eigenvalues_[0] = 0.0;
}

ScalarField dct2_forward(const ScalarField& f) {
    std::vector<double> coefficients = redft10(f);
    const int h = f.height();
    const int w = f.width();
    for (int k = 0; k < h; ++k) {
        const double sk = orthonormal_scale(k, h);
        for (int l = 0; l < w; ++l) {
            coefficients[static_cast<std::size_t>(k) * w + l] *= sk * orthonormal_scale(l, w);
        }
    }
    return ScalarField(h, w, std::move(coefficients));
}

ScalarField dct2_inverse(const ScalarField& coefficients) {
    const int h = coefficients.height();
    const int w = coefficients.width();
    std::vector<double> scaled(coefficients.values().begin(), coefficients.values().end());
    const double norm = 1.0 / (4.0 * h * w);
    for (int k = 0; k < h; ++k) {
        const double sk = orthonormal_scale(k, h);
        for (int l = 0; l < w; ++l) {
            scaled[static_cast<std::size_t>(k) * w + l] *= norm / (sk * orthonormal_scale(l, w));
        }
    }
    return redft01(std::move(scaled), h, w);
}

ScalarField apply_spectral_multiplier(const ScalarField& f, std::span<const double> symbol) {
    if (symbol.size() != f.size()) {
        throw DimensionError("spectral symbol has " + std::to_string(symbol.size()) +
                             " entries, field has " + std::to_string(f.size()));
    }
    std::vector<double> coefficients = redft10(f);
    const double norm = 1.0 / (4.0 * f.height() * f.width());
    for (std::size_t i = 0; i < coefficients.size(); ++i) coefficients[i] *= symbol[i] * norm;
    return redft01(std::move(coefficients), f.height(), f.width());
}

std::vector<double> gaussian_symbol(const GaussianKernel& kernel, int height, int width) {
    const auto taps = kernel.taps();
    const int radius = kernel.radius();
    auto axis = [&](int n) {
        std::vector<double> g(n);
        for (int k = 0; k < n; ++k) {
            double acc = 0.0;
            for (int t = -radius; t <= radius; ++t) {
                acc += taps[t + radius] * std::cos(std::numbers::pi * k * t / n);
            }
            g[k] = acc;
        }
        return g;
    };
    const std::vector<double> gy = axis(height);
    const std::vector<double> gx = axis(width);
    std::vector<double> symbol(static_cast<std::size_t>(height) * width);
    for (int k = 0; k < height; ++k) {
        for (int l = 0; l < width; ++l) symbol[static_cast<std::size_t>(k) * width + l] = gy[k] * gx[l];
    }
    return symbol;
}

ScalarField solve_helmholtz(const ScalarField& rhs, double c, double theta,
                            const NeumannSpectrum& spectrum) {
    require_spectrum_shape(rhs, spectrum);
    if (c < 0.0 || theta < 0.0 || !std::isfinite(c) || !std::isfinite(theta)) {
        throw ParameterError("helmholtz coefficients must be nonnegative (c=" + std::to_string(c) +
                             ", theta=" + std::to_string(theta) + ")");
    }
    if (c == 0.0 && theta == 0.0) throw SingularSystemError("helmholtz system with c = theta = 0");

    const auto eigen = spectrum.eigenvalues();
    std::vector<double> symbol(eigen.size());
    for (std::size_t i = 0; i < eigen.size(); ++i) {
        const double denom = c + theta * eigen[i];
        symbol[i] = denom > 0.0 ? 1.0 / denom : 0.0;
    }
    return apply_spectral_multiplier(rhs, symbol);
}

ScalarField solve_bias(const ScalarField& residual, double eps_w, double alpha_b,
                       const NeumannSpectrum& spectrum) {
    if (!(eps_w > 0.0)) throw ParameterError("eps_w must be positive");
    if (alpha_b < 0.0) throw ParameterError("alpha_b must be nonnegative");
    require_spectrum_shape(residual, spectrum);
    if (alpha_b == 0.0) return residual;
    return solve_helmholtz(eps_w * residual, eps_w, alpha_b, spectrum);
}

}  // namespace reflsm
