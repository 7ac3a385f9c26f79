#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "oracles.hpp"
#include "reflsm/errors.hpp"
#include "reflsm/spectral.hpp"

namespace {

using reflsm::NeumannSpectrum;
using reflsm::ScalarField;
constexpr double kPi = std::numbers::pi;

/// Sampled cosine mode cos(pi k (r + 1/2) / H) cos(pi l (c + 1/2) / W).
ScalarField cosine_mode(int h, int w, int k, int l) {
    ScalarField f(h, w);
    for (int r = 0; r < h; ++r) {
        for (int c = 0; c < w; ++c) {
            f(r, c) = std::cos(kPi * k * (r + 0.5) / h) * std::cos(kPi * l * (c + 0.5) / w);
        }
    }
    return f;
}

/// Orthonormal DCT-II by its defining double sum.
ScalarField naive_dct(const ScalarField& f) {
    const int h = f.height();
    const int w = f.width();
    ScalarField out(h, w);
    for (int k = 0; k < h; ++k) {
        for (int l = 0; l < w; ++l) {
            double total = 0.0;
            for (int r = 0; r < h; ++r) {
                for (int c = 0; c < w; ++c) {
                    total += f(r, c) * std::cos(kPi * k * (r + 0.5) / h) * std::cos(kPi * l * (c + 0.5) / w);
                }
            }
            const double sk = k == 0 ? std::sqrt(1.0 / h) : std::sqrt(2.0 / h);
            const double sl = l == 0 ? std::sqrt(1.0 / w) : std::sqrt(2.0 / w);
            out(k, l) = sk * sl * total;
        }
    }
    return out;
}

oracle::Vector dense_solve(const ScalarField& rhs, double c, double theta) {
    const int n = static_cast<int>(rhs.size());
    const oracle::Matrix a =
        c * oracle::Matrix::Identity(n, n) - theta * oracle::laplacian(rhs.height(), rhs.width());
    return a.fullPivLu().solve(oracle::to_vector(rhs));
}

TEST(NeumannSpectrumTest, MatchesClosedFormAndSigns) {
    const NeumannSpectrum s(6, 9);
    EXPECT_EQ(s(0, 0), 0.0);
    for (int k = 0; k < 6; ++k) {
        for (int l = 0; l < 9; ++l) {
            const double expected = (2.0 - 2.0 * std::cos(kPi * k / 6)) + (2.0 - 2.0 * std::cos(kPi * l / 9));
            EXPECT_NEAR(s(k, l), expected, 1e-15);
            if (k != 0 || l != 0) {
                EXPECT_GT(s(k, l), 0.0);
            }
        }
    }
}

TEST(Dct, ConstantFieldHasOnlyDcCoefficient) {
    const ScalarField coeffs = reflsm::dct2_forward(ScalarField(8, 6, 2.0));
    EXPECT_NEAR(coeffs(0, 0), 2.0 * std::sqrt(48.0), 1e-12);
    for (std::size_t i = 1; i < coeffs.size(); ++i) EXPECT_NEAR(coeffs[i], 0.0, 1e-12);
}

TEST(Dct, MatchesDefiningSum) {
    oracle::Random rng(21);
    const ScalarField f = rng.field(7, 10);
    EXPECT_LE(reflsm::max_abs(reflsm::dct2_forward(f) - naive_dct(f)), 1e-12);
}

TEST(Dct, RoundTripSixteenBySixteen) {
    oracle::Random rng(22);
    const ScalarField f = rng.field(16, 16);
    EXPECT_LE(reflsm::max_abs(reflsm::dct2_inverse(reflsm::dct2_forward(f)) - f), 1e-10);
}

TEST(Dct, Parseval) {
    oracle::Random rng(23);
    for (auto [h, w] : {std::pair{16, 16}, std::pair{5, 31}, std::pair{2, 2}}) {
        const ScalarField f = rng.field(h, w);
        EXPECT_NEAR(reflsm::norm2(reflsm::dct2_forward(f)), reflsm::norm2(f), 1e-10);
    }
}

TEST(Dct, EigenrelationWithLaplacian) {
    const int h = 12;
    const int w = 10;
    const NeumannSpectrum spectrum(h, w);
    for (auto [k, l] : {std::pair{0, 1}, std::pair{3, 0}, std::pair{5, 7}, std::pair{11, 9}}) {
        const ScalarField mode = cosine_mode(h, w, k, l);
        const ScalarField lhs = reflsm::dct2_forward(-1.0 * reflsm::laplacian(mode));
        const ScalarField rhs = spectrum(k, l) * reflsm::dct2_forward(mode);
        EXPECT_LE(reflsm::max_abs(lhs - rhs), 1e-8) << k << "," << l;
        // The mode is an eigenvector of the stencil itself.
        EXPECT_LE(reflsm::max_abs(-1.0 * reflsm::laplacian(mode) - spectrum(k, l) * mode), 1e-12);
    }
}

TEST(GaussianSymbol, MultiplierReproducesConvolution) {
    oracle::Random rng(24);
    for (auto [h, w, sigma] : {std::tuple{16, 16, 3.0}, std::tuple{5, 7, 3.0}, std::tuple{20, 9, 1.2}}) {
        const reflsm::GaussianKernel k(sigma);
        const ScalarField f = rng.field(h, w);
        const ScalarField direct = reflsm::gaussian_convolve(f, k);
        const ScalarField spectral = reflsm::apply_spectral_multiplier(f, reflsm::gaussian_symbol(k, h, w));
        EXPECT_LE(reflsm::max_abs(direct - spectral), 1e-12);
    }
}

TEST(SolveHelmholtz, ZeroRhsGivesZero) {
    const NeumannSpectrum s(8, 8);
    EXPECT_EQ(reflsm::max_abs(reflsm::solve_helmholtz(ScalarField(8, 8), 0.5, 0.1, s)), 0.0);
}

TEST(SolveHelmholtz, ConstantRhs) {
    const NeumannSpectrum s(9, 7);
    const ScalarField u = reflsm::solve_helmholtz(ScalarField(9, 7, 3.0), 0.25, 0.1, s);
    for (double v : u.values()) EXPECT_NEAR(v, 12.0, 1e-12);
}

TEST(SolveHelmholtz, MatchesDenseSolve) {
    oracle::Random rng(25);
    const ScalarField rhs = rng.field(16, 16);
    const ScalarField u = reflsm::solve_helmholtz(rhs, 0.25, 0.1, NeumannSpectrum(16, 16));
    const oracle::Vector expected = dense_solve(rhs, 0.25, 0.1);
    EXPECT_LE((oracle::to_vector(u) - expected).norm() / expected.norm(), 1e-8);
}

TEST(SolveHelmholtz, PdeResidualBound) {
    oracle::Random rng(26);
    for (auto [c, theta] : {std::pair{0.25, 0.1}, std::pair{1e-6, 5.0}, std::pair{3.0, 0.0}}) {
        const ScalarField rhs = rng.field(11, 14);
        const ScalarField u = reflsm::solve_helmholtz(rhs, c, theta, NeumannSpectrum(11, 14));
        const ScalarField residual = c * u - theta * reflsm::laplacian(u) - rhs;
        EXPECT_LE(reflsm::max_abs(residual), 1e-8 * reflsm::max_abs(rhs)) << c << " " << theta;
    }
}

TEST(SolveHelmholtz, ZeroMassTermLeavesMeanAtZero) {
    oracle::Random rng(27);
    ScalarField rhs = rng.field(10, 10);
    const double m = reflsm::mean(rhs);
    for (double& v : rhs.values()) v -= m;
    const ScalarField u = reflsm::solve_helmholtz(rhs, 0.0, 0.5, NeumannSpectrum(10, 10));
    EXPECT_NEAR(reflsm::mean(u), 0.0, 1e-13);
    EXPECT_LE(reflsm::max_abs(-0.5 * reflsm::laplacian(u) - rhs), 1e-10);
}

TEST(SolveHelmholtz, Errors) {
    const NeumannSpectrum s(4, 4);
    const ScalarField rhs(4, 4, 1.0);
    EXPECT_THROW(reflsm::solve_helmholtz(rhs, 0.0, 0.0, s), reflsm::SingularSystemError);
    EXPECT_THROW(reflsm::solve_helmholtz(rhs, -1.0, 0.1, s), reflsm::ParameterError);
    EXPECT_THROW(reflsm::solve_helmholtz(rhs, 1.0, -0.1, s), reflsm::ParameterError);
    EXPECT_THROW(reflsm::solve_helmholtz(ScalarField(5, 4), 1.0, 0.1, s), reflsm::DimensionError);
}

TEST(SolveHelmholtz, LinearInRhs) {
    oracle::Random rng(28);
    const NeumannSpectrum s(12, 12);
    const ScalarField f = rng.field(12, 12);
    const ScalarField g = rng.field(12, 12);
    const ScalarField lhs = reflsm::solve_helmholtz(2.0 * f - 3.0 * g, 0.3, 0.7, s);
    const ScalarField rhs =
        2.0 * reflsm::solve_helmholtz(f, 0.3, 0.7, s) - 3.0 * reflsm::solve_helmholtz(g, 0.3, 0.7, s);
    EXPECT_LE(reflsm::max_abs(lhs - rhs), 1e-12);
}

TEST(SolveHelmholtz, MonotoneDampingInTheta) {
    oracle::Random rng(29);
    const NeumannSpectrum s(16, 16);
    const ScalarField rhs = rng.field(16, 16);
    ScalarField previous = reflsm::dct2_forward(reflsm::solve_helmholtz(rhs, 0.5, 0.01, s));
    for (double theta : {0.1, 1.0, 10.0, 100.0}) {
        const ScalarField current = reflsm::dct2_forward(reflsm::solve_helmholtz(rhs, 0.5, theta, s));
        for (std::size_t i = 1; i < current.size(); ++i) {
            EXPECT_LE(std::abs(current[i]), std::abs(previous[i]) + 1e-15) << theta << " coefficient " << i;
        }
        EXPECT_NEAR(current[0], previous[0], 1e-12);
        previous = current;
    }
}

TEST(SolveBias, ConstantResidualPassesThrough) {
    const NeumannSpectrum s(8, 8);
    for (double alpha : {0.0, 1.0, 15.0, 1000.0}) {
        const ScalarField b = reflsm::solve_bias(ScalarField(8, 8, -0.7), 1.0, alpha, s);
        for (double v : b.values()) EXPECT_NEAR(v, -0.7, 1e-12);
    }
}

TEST(SolveBias, NoSmoothingReturnsResidualExactly) {
    oracle::Random rng(30);
    const ScalarField residual = rng.field(9, 9);
    EXPECT_EQ(reflsm::solve_bias(residual, 1.0, 0.0, NeumannSpectrum(9, 9)), residual);
}

TEST(SolveBias, CheckerboardAttenuation) {
    const int n = 16;
    const NeumannSpectrum s(n, n);
    ScalarField checker(n, n);
    for (int r = 0; r < n; ++r) {
        for (int c = 0; c < n; ++c) checker(r, c) = ((r + c) % 2 == 0) ? 1.0 : -1.0;
    }
    const ScalarField b = reflsm::solve_bias(checker, 1.0, 15.0, s);
    const oracle::Vector expected = dense_solve(checker, 1.0, 15.0);
    EXPECT_LE((oracle::to_vector(b) - expected).norm() / expected.norm(), 1e-8);

    // The checkerboard is not a single Neumann mode; its dominant component is
    // the highest mode, attenuated by 1 / (1 + 15 lambda_max).
    const ScalarField coeffs_in = reflsm::dct2_forward(checker);
    const ScalarField coeffs_out = reflsm::dct2_forward(b);
    const double lambda_max = s(n - 1, n - 1);
    EXPECT_NEAR(coeffs_out(n - 1, n - 1), coeffs_in(n - 1, n - 1) / (1.0 + 15.0 * lambda_max), 1e-10);
    for (int k = 0; k < n; ++k) {
        for (int l = 0; l < n; ++l) {
            EXPECT_NEAR(coeffs_out(k, l), coeffs_in(k, l) / (1.0 + 15.0 * s(k, l)), 1e-10);
        }
    }
}

TEST(SolveBias, PdeResidualOnRandomInput) {
    oracle::Random rng(31);
    const NeumannSpectrum s(13, 17);
    const ScalarField residual = rng.field(13, 17);
    for (double eps_w : {0.5, 1.0, 3.0}) {
        const ScalarField b = reflsm::solve_bias(residual, eps_w, 15.0, s);
        const ScalarField pde = eps_w * (b - residual) - 15.0 * reflsm::laplacian(b);
        EXPECT_LE(reflsm::max_abs(pde), 1e-8 * eps_w * reflsm::max_abs(residual));
    }
}

TEST(SolveBias, MonotoneDampingInAlpha) {
    oracle::Random rng(32);
    const NeumannSpectrum s(12, 12);
    const ScalarField residual = rng.field(12, 12);
    ScalarField previous = reflsm::dct2_forward(residual);
    for (double alpha : {0.5, 5.0, 15.0, 150.0}) {
        const ScalarField current = reflsm::dct2_forward(reflsm::solve_bias(residual, 1.0, alpha, s));
        for (std::size_t i = 1; i < current.size(); ++i) {
            EXPECT_LE(std::abs(current[i]), std::abs(previous[i]) + 1e-15);
        }
        previous = current;
    }
}

TEST(SolveBias, RejectsNonPositiveWeight) {
    EXPECT_THROW(reflsm::solve_bias(ScalarField(4, 4), 0.0, 1.0, NeumannSpectrum(4, 4)), reflsm::ParameterError);
}

}  // namespace
