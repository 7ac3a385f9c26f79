#include <gtest/gtest.h>

#include <cmath>

#include "reflsm/errors.hpp"
#include "reflsm/synth.hpp"

namespace {

using reflsm::BiasKind;
using reflsm::NoiseKind;
using reflsm::Phantom;
using reflsm::PhantomShape;
using reflsm::PhantomSpec;
using reflsm::ScalarField;

TEST(Generate, NoBiasNoNoiseIsTheCleanImage) {
    PhantomSpec spec;
    spec.height = 64;
    spec.width = 48;
    const Phantom p = reflsm::generate(spec);
    EXPECT_EQ(p.image, p.clean);
    for (std::size_t i = 0; i < p.clean.size(); ++i) {
        EXPECT_EQ(p.clean[i], p.truth.labels[i] > 0 ? 0.8 : 0.2);
        EXPECT_EQ(p.bias[i], 1.0);
    }
}

TEST(Generate, DiskAreaMatchesEnumeration) {
    PhantomSpec spec;
    spec.height = 101;
    spec.width = 81;
    const Phantom p = reflsm::generate(spec);
    const double cy = 50.0;
    const double cx = 40.0;
    const double radius = 0.3 * 81.0;
    std::size_t expected = 0;
    for (int r = 0; r < 101; ++r) {
        for (int c = 0; c < 81; ++c) {
            const bool inside = (r - cy) * (r - cy) + (c - cx) * (c - cx) <= radius * radius;
            expected += inside;
            EXPECT_EQ(p.truth(r, c), inside ? 1 : -1);
        }
    }
    EXPECT_EQ(p.truth.foreground_count(), expected);
    EXPECT_NEAR(static_cast<double>(expected), M_PI * radius * radius, 0.02 * M_PI * radius * radius);
}

TEST(Generate, EveryShapeHasBothClasses) {
    for (auto shape : {PhantomShape::disk, PhantomShape::two_disks, PhantomShape::ring, PhantomShape::checker_blob}) {
        const reflsm::BinaryMask m = reflsm::shape_mask(shape, 64, 64);
        EXPECT_GT(m.foreground_count(), 0u) << reflsm::to_string(shape);
        EXPECT_LT(m.foreground_count(), m.size()) << reflsm::to_string(shape);
    }
}

TEST(Generate, DeterministicForAFixedSeed) {
    PhantomSpec spec;
    spec.height = 40;
    spec.width = 40;
    spec.noise = {NoiseKind::gaussian, 0.02};
    spec.bias = {BiasKind::gaussian_bump, 0.3};
    spec.seed = 123;
    const Phantom a = reflsm::generate(spec);
    const Phantom b = reflsm::generate(spec);
    EXPECT_EQ(a.image, b.image);
    EXPECT_EQ(a.truth, b.truth);
    spec.seed = 124;
    EXPECT_NE(reflsm::generate(spec).image, a.image);
}

TEST(Generate, ImagesArePositiveAndBounded) {
    for (auto bias : {BiasKind::linear_ramp, BiasKind::gaussian_bump, BiasKind::low_freq_sinusoid}) {
        for (auto noise : {NoiseKind::none, NoiseKind::gaussian, NoiseKind::salt_pepper, NoiseKind::speckle}) {
            PhantomSpec spec;
            spec.height = 48;
            spec.width = 48;
            spec.bias = {bias, 0.4};
            spec.noise = {noise, 0.1};
            const Phantom p = reflsm::generate(spec);
            for (double v : p.image.values()) {
                EXPECT_GT(v, 0.0);
                EXPECT_LE(v, 1.0);
            }
        }
    }
}

TEST(Generate, BiasDividesOutOfTheNoiselessImage) {
    for (auto kind : {BiasKind::linear_ramp, BiasKind::gaussian_bump, BiasKind::low_freq_sinusoid}) {
        PhantomSpec spec;
        spec.height = 50;
        spec.width = 60;
        spec.fg_level = 0.9;
        spec.bias = {kind, 0.35};
        const Phantom p = reflsm::generate(spec);
        double peak = 0.0;
        for (std::size_t i = 0; i < p.clean.size(); ++i) peak = std::max(peak, p.clean[i] * p.bias[i]);
        peak = std::max(peak, 1.0);
        for (std::size_t i = 0; i < p.clean.size(); ++i) {
            EXPECT_NEAR(p.image[i] * peak / p.bias[i], p.clean[i], 1e-14);
        }
    }
}

TEST(BiasField, RangeAndShape) {
    for (auto kind : {BiasKind::linear_ramp, BiasKind::gaussian_bump, BiasKind::low_freq_sinusoid}) {
        const ScalarField b = reflsm::bias_field({kind, 0.4}, 64, 64);
        EXPECT_GE(reflsm::min_value(b), 0.6 - 1e-12);
        EXPECT_LE(reflsm::max_value(b), 1.4 + 1e-12);
        EXPECT_GT(reflsm::max_value(b) - reflsm::min_value(b), 0.2) << reflsm::to_string(kind);
    }
    const ScalarField ramp = reflsm::bias_field({BiasKind::linear_ramp, 0.4}, 11, 11);
    EXPECT_NEAR(ramp(0, 0), 0.6, 1e-15);
    EXPECT_NEAR(ramp(10, 10), 1.4, 1e-15);
    EXPECT_NEAR(ramp(5, 5), 1.0, 1e-15);
    EXPECT_EQ(reflsm::bias_field({BiasKind::none, 0.4}, 8, 8), ScalarField(8, 8, 1.0));
}

TEST(Noise, SaltPepperAltersTheRequestedFraction) {
    const ScalarField flat(300, 300, 0.5);
    const ScalarField noisy = reflsm::apply_noise(flat, {NoiseKind::salt_pepper, 0.1}, 5);
    std::size_t altered = 0;
    for (std::size_t i = 0; i < flat.size(); ++i) {
        if (noisy[i] != 0.5) {
            ++altered;
            EXPECT_TRUE(noisy[i] == reflsm::kNoiseFloor || noisy[i] == 1.0);
        }
    }
    const double fraction = static_cast<double>(altered) / static_cast<double>(flat.size());
    EXPECT_GE(fraction, 0.092);
    EXPECT_LE(fraction, 0.108);
}

TEST(Noise, GaussianVarianceMatchesDensity) {
    const ScalarField flat(300, 300, 0.5);
    const ScalarField noisy = reflsm::apply_noise(flat, {NoiseKind::gaussian, 0.02}, 6);
    double m = 0.0;
    for (double v : noisy.values()) m += v;
    m /= static_cast<double>(noisy.size());
    double var = 0.0;
    for (double v : noisy.values()) var += (v - m) * (v - m);
    var /= static_cast<double>(noisy.size() - 1);
    EXPECT_NEAR(m, 0.5, 0.01);
    EXPECT_NEAR(var, 0.02, 0.2 * 0.02);
}

TEST(Noise, SpeckleIsMultiplicative) {
    ScalarField f(200, 200, 0.3);
    for (int r = 0; r < 200; ++r) {
        for (int c = 100; c < 200; ++c) f(r, c) = 0.6;
    }
    const ScalarField noisy = reflsm::apply_noise(f, {NoiseKind::speckle, 0.01}, 7);
    double var_low = 0.0;
    double var_high = 0.0;
    for (int r = 0; r < 200; ++r) {
        for (int c = 0; c < 100; ++c) var_low += (noisy(r, c) - 0.3) * (noisy(r, c) - 0.3);
        for (int c = 100; c < 200; ++c) var_high += (noisy(r, c) - 0.6) * (noisy(r, c) - 0.6);
    }
    EXPECT_NEAR(var_high / var_low, 4.0, 0.4);
}

TEST(Noise, NoneOrZeroDensityIsIdentity) {
    const ScalarField f(10, 10, 0.4);
    EXPECT_EQ(reflsm::apply_noise(f, {NoiseKind::none, 0.1}, 1), f);
    EXPECT_EQ(reflsm::apply_noise(f, {NoiseKind::gaussian, 0.0}, 1), f);
    EXPECT_THROW(reflsm::apply_noise(f, {NoiseKind::gaussian, 0.3}, 1), reflsm::ParameterError);
}

TEST(PhantomSpecTest, Validation) {
    auto with = [](auto mutate) {
        PhantomSpec s;
        mutate(s);
        return s;
    };
    EXPECT_THROW(reflsm::generate(with([](PhantomSpec& s) { s.height = 1; })), reflsm::ParameterError);
    EXPECT_THROW(reflsm::generate(with([](PhantomSpec& s) { s.fg_level = 0.0; })), reflsm::ParameterError);
    EXPECT_THROW(reflsm::generate(with([](PhantomSpec& s) { s.bg_level = 0.8; })), reflsm::ParameterError);
    EXPECT_THROW(reflsm::generate(with([](PhantomSpec& s) { s.bias.amplitude = 1.0; })), reflsm::ParameterError);
    EXPECT_THROW(reflsm::generate(with([](PhantomSpec& s) { s.noise.density = 0.25; })), reflsm::ParameterError);
}

TEST(Names, RoundTripAndRejectUnknown) {
    for (auto s : {PhantomShape::disk, PhantomShape::two_disks, PhantomShape::ring, PhantomShape::checker_blob}) {
        EXPECT_EQ(reflsm::parse_phantom_shape(reflsm::to_string(s)), s);
    }
    for (auto k : {BiasKind::none, BiasKind::linear_ramp, BiasKind::gaussian_bump, BiasKind::low_freq_sinusoid}) {
        EXPECT_EQ(reflsm::parse_bias_kind(reflsm::to_string(k)), k);
    }
    for (auto k : {NoiseKind::none, NoiseKind::gaussian, NoiseKind::salt_pepper, NoiseKind::speckle}) {
        EXPECT_EQ(reflsm::parse_noise_kind(reflsm::to_string(k)), k);
    }
    EXPECT_THROW(reflsm::parse_noise_kind("poisson"), reflsm::ParameterError);
    EXPECT_THROW(reflsm::parse_bias_kind("Linear-Ramp"), reflsm::ParameterError);
    EXPECT_THROW(reflsm::parse_phantom_shape(""), reflsm::ParameterError);
}

}  // namespace
