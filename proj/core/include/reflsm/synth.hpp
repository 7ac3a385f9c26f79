#pragma once

// Synthetic phantoms with exact ground truth, a smooth multiplicative bias
// and optional noise. Randomness comes from std::mt19937_64 with the raw
// 64-bit outputs converted by hand, so the streams are reproducible across
// standard libraries.

#include <cstdint>
#include <string>
#include <string_view>

#include "reflsm/grid.hpp"
#include "reflsm/mask.hpp"

namespace reflsm {

inline constexpr std::string_view kGeneratorName = "mt19937_64";

enum class PhantomShape { disk, two_disks, ring, checker_blob };
enum class BiasKind { none, linear_ramp, gaussian_bump, low_freq_sinusoid };
enum class NoiseKind { none, gaussian, salt_pepper, speckle };

struct BiasSpec {
    BiasKind kind = BiasKind::none;
    /// Multiplicative range: the field lies in [1 - amplitude, 1 + amplitude]. Must be < 1.
    double amplitude = 0.0;
};

struct NoiseSpec {
    NoiseKind kind = NoiseKind::none;
    /// Salt-and-pepper: fraction of pixels hit. Gaussian and speckle: variance.
    double density = 0.0;
};

struct PhantomSpec {
    int height = 336;
    int width = 336;
    PhantomShape shape = PhantomShape::disk;
    double fg_level = 0.8;
    double bg_level = 0.2;
    BiasSpec bias;
    NoiseSpec noise;
    std::uint64_t seed = 0;

    void validate() const;
};

struct Phantom {
    /// noise(clean * bias / peak), peak = max(1, max(clean * bias)); values in (0, 1].
    ScalarField image;
    BinaryMask truth;
    ScalarField clean;
    ScalarField bias;
};

Phantom generate(const PhantomSpec& spec);

/// Lowest intensity noisy outputs are clipped to.
inline constexpr double kNoiseFloor = 1e-3;

/// Returns f unchanged for kind none or density 0; otherwise the noisy field clipped to [1e-3, 1].
ScalarField apply_noise(const ScalarField& f, const NoiseSpec& spec, std::uint64_t seed);

BinaryMask shape_mask(PhantomShape shape, int height, int width);
ScalarField bias_field(const BiasSpec& spec, int height, int width);

std::string to_string(PhantomShape shape);
std::string to_string(BiasKind kind);
std::string to_string(NoiseKind kind);
/// Parsers accept the names produced by to_string (kebab-case); throw ParameterError otherwise.
PhantomShape parse_phantom_shape(std::string_view name);
BiasKind parse_bias_kind(std::string_view name);
NoiseKind parse_noise_kind(std::string_view name);

}  // namespace reflsm
