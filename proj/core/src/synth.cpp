#include "reflsm/synth.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "reflsm/errors.hpp"

namespace reflsm {

namespace {

class RandomStream {
public:
    explicit RandomStream(std::uint64_t seed) : engine_(seed) {}

    /// Uniform on [0, 1) with 53 random bits.
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    /// Standard normal by Box-Muller, one variate per pair of uniforms.
    double normal() {
        const double u1 = 1.0 - uniform();  // (0, 1]
        const double u2 = uniform();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
    }

private:
    std::mt19937_64 engine_;
};

struct Geometry {
    double cy;
    double cx;
    double extent;  // min(H, W)
};

Geometry geometry(int height, int width) {
    return {0.5 * (height - 1), 0.5 * (width - 1), static_cast<double>(std::min(height, width))};
}

bool inside_disk(double y, double x, double cy, double cx, double radius) {
    const double dy = y - cy;
    const double dx = x - cx;
    return dx * dx + dy * dy <= radius * radius;
}

}  // namespace

void PhantomSpec::validate() const {
    if (height < 2 || width < 2) throw ParameterError("phantom must be at least 2x2");
    if (!(fg_level > 0.0 && fg_level <= 1.0) || !(bg_level > 0.0 && bg_level <= 1.0)) {
        throw ParameterError("phantom levels must lie in (0, 1]");
    }
    if (fg_level == bg_level) throw ParameterError("foreground and background levels must differ");
    if (!(bias.amplitude >= 0.0 && bias.amplitude < 1.0)) {
        throw ParameterError("bias amplitude must lie in [0, 1)");
    }
    if (!(noise.density >= 0.0 && noise.density <= 0.2)) {
        throw ParameterError("noise density must lie in [0, 0.2]");
    }
}

BinaryMask shape_mask(PhantomShape shape, int height, int width) {
    const Geometry g = geometry(height, width);
    BinaryMask mask(height, width);
    for (int r = 0; r < height; ++r) {
        for (int c = 0; c < width; ++c) {
            bool in = false;
            switch (shape) {
                case PhantomShape::disk:
                    in = inside_disk(r, c, g.cy, g.cx, 0.3 * g.extent);
                    break;
                case PhantomShape::two_disks:
                    in = inside_disk(r, c, g.cy, g.cx - 0.22 * g.extent, 0.16 * g.extent) ||
                         inside_disk(r, c, g.cy, g.cx + 0.22 * g.extent, 0.16 * g.extent);
                    break;
                case PhantomShape::ring:
                    in = inside_disk(r, c, g.cy, g.cx, 0.33 * g.extent) &&
                         !inside_disk(r, c, g.cy, g.cx, 0.18 * g.extent);
                    break;
                case PhantomShape::checker_blob:
                    in = inside_disk(r, c, g.cy, g.cx, 0.33 * g.extent) && ((r > g.cy) == (c > g.cx));
                    break;
            }
            mask(r, c) = in ? 1 : -1;
        }
    }
    return mask;
}

ScalarField bias_field(const BiasSpec& spec, int height, int width) {
    ScalarField b(height, width, 1.0);
    const double a = spec.amplitude;
    const Geometry g = geometry(height, width);
    for (int r = 0; r < height; ++r) {
        const double y = static_cast<double>(r) / (height - 1);
        for (int c = 0; c < width; ++c) {
            const double x = static_cast<double>(c) / (width - 1);
            switch (spec.kind) {
                case BiasKind::none:
                    break;
                case BiasKind::linear_ramp:
                    b(r, c) = 1.0 + a * (x + y - 1.0);
                    break;
                case BiasKind::gaussian_bump: {
                    const double dy = r - 0.35 * (height - 1);
                    const double dx = c - 0.3 * (width - 1);
                    const double s = 0.4 * g.extent;
                    b(r, c) = 1.0 - a + 2.0 * a * std::exp(-(dx * dx + dy * dy) / (2.0 * s * s));
                    break;
                }
                case BiasKind::low_freq_sinusoid:
                    b(r, c) = 1.0 + a * std::cos(2.0 * std::numbers::pi * x) *
                                        std::cos(std::numbers::pi * y);
                    break;
            }
        }
    }
    return b;
}

ScalarField apply_noise(const ScalarField& f, const NoiseSpec& spec, std::uint64_t seed) {
    if (spec.kind == NoiseKind::none || spec.density == 0.0) return f;
    if (!(spec.density > 0.0 && spec.density <= 0.2)) {
        throw ParameterError("noise density must lie in [0, 0.2]");
    }
    RandomStream rng(seed);
    const double spread = std::sqrt(spec.density);
    ScalarField out = f;
    for (double& v : out.values()) {
        switch (spec.kind) {
            case NoiseKind::gaussian:
                v += spread * rng.normal();
                break;
            case NoiseKind::speckle:
                v *= 1.0 + spread * rng.normal();
                break;
            case NoiseKind::salt_pepper:
                if (rng.uniform() < spec.density) v = rng.uniform() < 0.5 ? 0.0 : 1.0;
                break;
            case NoiseKind::none:
                break;
        }
        v = std::clamp(v, kNoiseFloor, 1.0);
    }
    return out;
}

Phantom generate(const PhantomSpec& spec) {
    spec.validate();
    BinaryMask truth = shape_mask(spec.shape, spec.height, spec.width);
    ScalarField clean(spec.height, spec.width);
    for (std::size_t i = 0; i < clean.size(); ++i) {
        clean[i] = truth.labels[i] > 0 ? spec.fg_level : spec.bg_level;
    }
    ScalarField bias = bias_field(spec.bias, spec.height, spec.width);
    ScalarField biased = hadamard(clean, bias);
    const double peak = std::max(1.0, max_value(biased));
    if (peak > 1.0) biased *= 1.0 / peak;
    ScalarField image = apply_noise(biased, spec.noise, spec.seed);
    return {std::move(image), std::move(truth), std::move(clean), std::move(bias)};
}

std::string to_string(PhantomShape shape) {
    switch (shape) {
        case PhantomShape::disk: return "disk";
        case PhantomShape::two_disks: return "two-disks";
        case PhantomShape::ring: return "ring";
        case PhantomShape::checker_blob: return "checker-blob";
    }
    return "disk";
}

std::string to_string(BiasKind kind) {
    switch (kind) {
        case BiasKind::none: return "none";
        case BiasKind::linear_ramp: return "linear-ramp";
        case BiasKind::gaussian_bump: return "gaussian-bump";
        case BiasKind::low_freq_sinusoid: return "low-freq-sinusoid";
    }
    return "none";
}

std::string to_string(NoiseKind kind) {
    switch (kind) {
        case NoiseKind::none: return "none";
        case NoiseKind::gaussian: return "gaussian";
        case NoiseKind::salt_pepper: return "salt-pepper";
        case NoiseKind::speckle: return "speckle";
    }
    return "none";
}

PhantomShape parse_phantom_shape(std::string_view name) {
    for (auto s : {PhantomShape::disk, PhantomShape::two_disks, PhantomShape::ring,
                   PhantomShape::checker_blob}) {
        if (to_string(s) == name) return s;
    }
    throw ParameterError("unknown phantom shape '" + std::string(name) + "'");
}

BiasKind parse_bias_kind(std::string_view name) {
    for (auto k : {BiasKind::none, BiasKind::linear_ramp, BiasKind::gaussian_bump,
                   BiasKind::low_freq_sinusoid}) {
        if (to_string(k) == name) return k;
    }
    throw ParameterError("unknown bias kind '" + std::string(name) + "'");
}

NoiseKind parse_noise_kind(std::string_view name) {
    for (auto k : {NoiseKind::none, NoiseKind::gaussian, NoiseKind::salt_pepper,
                   NoiseKind::speckle}) {
        if (to_string(k) == name) return k;
    }
    throw ParameterError("unknown noise kind '" + std::string(name) + "'");
}

}  // namespace reflsm
