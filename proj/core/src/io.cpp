#include "reflsm/io.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "reflsm/errors.hpp"

namespace reflsm {

namespace {

constexpr long kMaxDimension = 1 << 16;

bool is_space(char c) { return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\v' || c == '\f'; }

class HeaderReader {
public:
    explicit HeaderReader(std::string_view bytes) : bytes_(bytes) {}

    void skip_whitespace_and_comments() {
        while (pos_ < bytes_.size()) {
            if (is_space(bytes_[pos_])) {
                ++pos_;
            } else if (bytes_[pos_] == '#') {
                while (pos_ < bytes_.size() && bytes_[pos_] != '\n' && bytes_[pos_] != '\r') ++pos_;
            } else {
                break;
            }
        }
    }

    long read_integer(const char* what, long min_value, long max_value) {
        skip_whitespace_and_comments();
        const std::size_t start = pos_;
        long value = 0;
        while (pos_ < bytes_.size() && bytes_[pos_] >= '0' && bytes_[pos_] <= '9') {
            value = value * 10 + (bytes_[pos_] - '0');
            if (value > max_value) {
                throw ParseError(std::string(what) + " exceeds " + std::to_string(max_value), start);
            }
            ++pos_;
        }
        if (pos_ == start) {
            if (pos_ >= bytes_.size()) throw ParseError(std::string("truncated header before ") + what, pos_);
            throw ParseError(std::string("expected ") + what, pos_);
        }
        if (value < min_value) {
            throw ParseError(std::string(what) + " below " + std::to_string(min_value), start);
        }
        return value;
    }

    std::size_t position() const { return pos_; }
    void advance() { ++pos_; }
    std::string_view bytes() const { return bytes_; }

private:
    std::string_view bytes_;
    std::size_t pos_ = 0;
};

std::uint16_t to_pixel(double value, int maxval) {
    return static_cast<std::uint16_t>(std::round(std::clamp(value, 0.0, 1.0) * maxval));
}

void check_maxval(int maxval) {
    if (maxval != 255 && maxval != 65535) {
        throw ParameterError("maxval must be 255 or 65535, got " + std::to_string(maxval));
    }
}

}  // namespace

RasterImage read_pgm(std::string_view bytes) {
    if (bytes.size() < 2) throw ParseError("truncated magic number", bytes.size());
    if (bytes[0] != 'P' || bytes[1] != '5') throw ParseError("bad magic number, expected P5", 0);

    HeaderReader reader(bytes);
    reader.advance();
    reader.advance();
    if (reader.position() < bytes.size() && !is_space(bytes[reader.position()]) &&
        bytes[reader.position()] != '#') {
        throw ParseError("bad magic number, expected P5", 0);
    }

    RasterImage image;
    image.width = static_cast<int>(reader.read_integer("width", 1, kMaxDimension));
    image.height = static_cast<int>(reader.read_integer("height", 1, kMaxDimension));
    image.maxval = static_cast<int>(reader.read_integer("maxval", 1, 65535));
    if (image.maxval != 255 && image.maxval != 65535) {
        throw ParseError("unsupported maxval " + std::to_string(image.maxval), reader.position());
    }
    if (reader.position() >= bytes.size()) throw ParseError("truncated header after maxval", bytes.size());
    if (!is_space(bytes[reader.position()])) {
        throw ParseError("expected whitespace after maxval", reader.position());
    }
    reader.advance();

    const std::size_t count = static_cast<std::size_t>(image.width) * image.height;
    const std::size_t sample_bytes = image.maxval > 255 ? 2 : 1;
    std::size_t pos = reader.position();
    if (bytes.size() - pos < count * sample_bytes) {
        throw ParseError("truncated payload: need " + std::to_string(count * sample_bytes) +
                             " bytes, have " + std::to_string(bytes.size() - pos),
                         bytes.size());
    }
    image.pixels.resize(count);
    for (std::size_t i = 0; i < count; ++i) {
        std::uint32_t v = static_cast<unsigned char>(bytes[pos]);
        if (sample_bytes == 2) v = (v << 8) | static_cast<unsigned char>(bytes[pos + 1]);
        if (v > static_cast<std::uint32_t>(image.maxval)) {
            throw ParseError("pixel value " + std::to_string(v) + " exceeds maxval", pos);
        }
        image.pixels[i] = static_cast<std::uint16_t>(v);
        pos += sample_bytes;
    }
    return image;
}

std::string write_pgm(const RasterImage& image) {
    check_maxval(image.maxval);
    if (image.height < 1 || image.width < 1 ||
        image.pixels.size() != static_cast<std::size_t>(image.height) * image.width) {
        throw DimensionError("raster dimensions do not match its pixel count");
    }
    std::string out = "P5 " + std::to_string(image.width) + " " + std::to_string(image.height) +
                      " " + std::to_string(image.maxval) + "\n";
    const bool wide = image.maxval > 255;
    out.reserve(out.size() + image.pixels.size() * (wide ? 2 : 1));
    for (std::uint16_t v : image.pixels) {
        if (v > image.maxval) throw ParameterError("pixel value exceeds maxval");
        if (wide) out.push_back(static_cast<char>(v >> 8));
        out.push_back(static_cast<char>(v & 0xff));
    }
    return out;
}

RasterImage read_pgm_file(const std::filesystem::path& path) { return read_pgm(read_file(path)); }

void write_pgm_file(const RasterImage& image, const std::filesystem::path& path) {
    write_file(path, write_pgm(image));
}

ScalarField to_log_domain(const RasterImage& image) {
    std::vector<double> values(image.pixels.size());
    for (std::size_t i = 0; i < values.size(); ++i) {
        const double normalized = static_cast<double>(image.pixels[i]) / image.maxval;
        values[i] = std::log(kIntensityFloor + (1.0 - kIntensityFloor) * normalized);
    }
    return ScalarField(image.height, image.width, std::move(values));
}

ScalarField to_log_domain(const ScalarField& intensity) {
    ScalarField out = intensity;
    for (double& v : out.values()) {
        v = std::log(kIntensityFloor + (1.0 - kIntensityFloor) * std::clamp(v, 0.0, 1.0));
    }
    return out;
}

RasterImage from_log_domain(const ScalarField& f, int maxval) {
    check_maxval(maxval);
    std::vector<double> e(f.size());
    for (std::size_t i = 0; i < e.size(); ++i) e[i] = std::exp(f[i]);
    const auto [lo_it, hi_it] = std::minmax_element(e.begin(), e.end());
    const double lo = *lo_it;
    const double hi = *hi_it;

    RasterImage image{f.height(), f.width(), maxval, std::vector<std::uint16_t>(e.size())};
    if (!(hi - lo > 1e-12 * hi)) {
        for (std::size_t i = 0; i < e.size(); ++i) image.pixels[i] = to_pixel(e[i], maxval);
        return image;
    }
    for (std::size_t i = 0; i < e.size(); ++i) image.pixels[i] = to_pixel((e[i] - lo) / (hi - lo), maxval);
    return image;
}

RasterImage intensity_to_raster(const ScalarField& intensity, int maxval) {
    check_maxval(maxval);
    RasterImage image{intensity.height(), intensity.width(), maxval,
                      std::vector<std::uint16_t>(intensity.size())};
    for (std::size_t i = 0; i < intensity.size(); ++i) image.pixels[i] = to_pixel(intensity[i], maxval);
    return image;
}

ScalarField raster_to_intensity(const RasterImage& image) {
    std::vector<double> values(image.pixels.size());
    for (std::size_t i = 0; i < values.size(); ++i) {
        values[i] = static_cast<double>(image.pixels[i]) / image.maxval;
    }
    return ScalarField(image.height, image.width, std::move(values));
}

RasterImage mask_to_raster(const BinaryMask& mask, int maxval) {
    check_maxval(maxval);
    RasterImage image{mask.height, mask.width, maxval, std::vector<std::uint16_t>(mask.size())};
    for (std::size_t i = 0; i < mask.size(); ++i) {
        image.pixels[i] = mask.labels[i] > 0 ? static_cast<std::uint16_t>(maxval) : 0;
    }
    return image;
}

BinaryMask raster_to_mask(const RasterImage& image) {
    BinaryMask mask(image.height, image.width);
    for (std::size_t i = 0; i < mask.size(); ++i) {
        mask.labels[i] = 2 * static_cast<int>(image.pixels[i]) > image.maxval ? 1 : -1;
    }
    return mask;
}

std::string format_double(double value) {
    if (std::isnan(value)) return "nan";
    std::array<char, 32> buffer{};
    const auto result = std::to_chars(buffer.data(), buffer.data() + buffer.size(), value);
    return std::string(buffer.data(), result.ptr);
}

std::string format_metrics_row(const MetricsRow& row) {
    std::ostringstream out;
    out << row.image << ',' << format_double(row.dice) << ',' << format_double(row.precision) << ','
        << format_double(row.rtg_ratio) << ',' << row.iterations << ',' << format_double(row.seconds)
        << ',' << (row.converged ? "true" : "false") << '\n';
    return out.str();
}

std::string intensity_histogram_csv(const ScalarField& original, const ScalarField& corrected) {
    constexpr int kBins = 256;
    auto histogram = [](const ScalarField& f) {
        std::array<std::uint64_t, kBins> counts{};
        for (double v : f.values()) {
            const int bin = std::clamp(static_cast<int>(std::clamp(v, 0.0, 1.0) * kBins), 0, kBins - 1);
            ++counts[bin];
        }
        return counts;
    };
    const auto before = histogram(original);
    const auto after = histogram(corrected);
    std::ostringstream out;
    out << "bin,lower,upper,original,corrected\n";
    for (int b = 0; b < kBins; ++b) {
        out << b << ',' << format_double(static_cast<double>(b) / kBins) << ','
            << format_double(static_cast<double>(b + 1) / kBins) << ',' << before[b] << ','
            << after[b] << '\n';
    }
    return out.str();
}

ReportPaths report_paths(const std::string& prefix) {
    return {prefix + "mask.pgm",    prefix + "corrected.pgm", prefix + "reflectance.pgm",
            prefix + "bias.pgm",    prefix + "metrics.csv",   prefix + "histogram.csv"};
}

ReportPaths write_report(const SegmentationResult& result, const ScalarField& original_intensity,
                         const MetricsRow& row, const std::string& prefix) {
    const ReportPaths paths = report_paths(prefix);
    write_pgm_file(mask_to_raster(result.mask), paths.mask);
    write_pgm_file(intensity_to_raster(result.corrected_image), paths.corrected);
    write_pgm_file(from_log_domain(result.s_field), paths.reflectance);
    write_pgm_file(from_log_domain(result.b_field), paths.bias);
    write_file(paths.metrics, std::string(kMetricsHeader) + "\n" + format_metrics_row(row));

    ScalarField original = original_intensity;
    const double peak = max_value(original);
    if (peak > 0.0) original *= 1.0 / peak;
    write_file(paths.histogram, intensity_histogram_csv(original, result.corrected_image));
    return paths;
}

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open '" + path.string() + "' for reading");
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

namespace {

std::ofstream open_for_write(const std::filesystem::path& path, std::ios::openmode mode) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary | mode);
    if (!out) throw Error("cannot open '" + path.string() + "' for writing");
    return out;
}

}  // namespace

void write_file(const std::filesystem::path& path, std::string_view contents) {
    auto out = open_for_write(path, std::ios::trunc);
    out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
    if (!out) throw Error("failed writing '" + path.string() + "'");
}

void append_file(const std::filesystem::path& path, std::string_view contents) {
    auto out = open_for_write(path, std::ios::app);
    out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
    if (!out) throw Error("failed writing '" + path.string() + "'");
}

}  // namespace reflsm
