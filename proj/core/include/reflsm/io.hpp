#pragma once

// Binary PGM (P5) input/output, the log-domain mapping, and result files.

#include <cstdint>
#include <filesystem>
#include <limits>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "reflsm/grid.hpp"
#include "reflsm/mask.hpp"
#include "reflsm/solver.hpp"

namespace reflsm {

/// Grayscale raster, maxval 255 (1 byte/sample) or 65535 (2 bytes, big-endian).
struct RasterImage {
    int height = 0;
    int width = 0;
    int maxval = 255;
    std::vector<std::uint16_t> pixels;

    friend bool operator==(const RasterImage&, const RasterImage&) = default;
};

/// Parses a P5 stream. Header tokens may be separated by any whitespace and
/// '#' comments; exactly one whitespace byte separates maxval from the samples.
/// Throws ParseError with the byte offset of the problem.
RasterImage read_pgm(std::string_view bytes);

/// Canonical form: "P5 <w> <h> <maxval>\n" followed by the samples.
std::string write_pgm(const RasterImage& image);

RasterImage read_pgm_file(const std::filesystem::path& path);
void write_pgm_file(const RasterImage& image, const std::filesystem::path& path);

/// Lowest normalized intensity before the log.
inline constexpr double kIntensityFloor = 0.01;

/// log(e0 + (1 - e0) * pixel / maxval), e0 = 0.01. Result lies in [log 0.01, 0].
ScalarField to_log_domain(const RasterImage& image);
/// Same mapping for an intensity field in [0, 1] (values are clamped first).
ScalarField to_log_domain(const ScalarField& intensity);

/// exp(f) rescaled affinely so its range spans [0, maxval], rounded half away
/// from zero. A uniform field maps to round(clamp(exp f, 0, 1) * maxval).
RasterImage from_log_domain(const ScalarField& f, int maxval = 255);

/// round(clamp(v, 0, 1) * maxval).
RasterImage intensity_to_raster(const ScalarField& intensity, int maxval = 255);
/// pixel / maxval.
ScalarField raster_to_intensity(const RasterImage& image);

/// +1 -> maxval, -1 -> 0.
RasterImage mask_to_raster(const BinaryMask& mask, int maxval = 255);
/// Pixels above maxval / 2 are foreground.
BinaryMask raster_to_mask(const RasterImage& image);

inline constexpr std::string_view kMetricsHeader =
    "image,dice,precision,rtg_ratio,iters,seconds,converged";

struct MetricsRow {
    std::string image;
    double dice = std::numeric_limits<double>::quiet_NaN();
    double precision = std::numeric_limits<double>::quiet_NaN();
    double rtg_ratio = std::numeric_limits<double>::quiet_NaN();
    int iterations = 0;
    double seconds = 0.0;
    bool converged = false;
};

std::string format_metrics_row(const MetricsRow& row);

/// 256 equal bins over [0, 1]; columns bin,lower,upper,original,corrected.
std::string intensity_histogram_csv(const ScalarField& original, const ScalarField& corrected);

struct ReportPaths {
    std::filesystem::path mask;
    std::filesystem::path corrected;
    std::filesystem::path reflectance;
    std::filesystem::path bias;
    std::filesystem::path metrics;
    std::filesystem::path histogram;
};

/// File names are appended to the prefix verbatim ("run1/" -> "run1/mask.pgm").
ReportPaths report_paths(const std::string& prefix);

/// Writes mask, corrected image, S and B layers, a one-row metrics CSV and the
/// intensity histogram. original_intensity is the input image in [0, 1].
ReportPaths write_report(const SegmentationResult& result, const ScalarField& original_intensity,
                         const MetricsRow& row, const std::string& prefix);

std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::string_view contents);
void append_file(const std::filesystem::path& path, std::string_view contents);

/// Shortest decimal text that parses back to the same double ("nan" for NaN).
std::string format_double(double value);

}  // namespace reflsm
