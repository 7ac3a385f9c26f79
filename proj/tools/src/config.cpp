#include "config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <functional>
#include <limits>

#include "reflsm/errors.hpp"
#include "reflsm/io.hpp"

namespace reflsm::cli {

namespace {

std::string_view trim(std::string_view s) {
    constexpr std::string_view kSpace = " \t\r\n\v\f";
    const auto first = s.find_first_not_of(kSpace);
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(kSpace);
    return s.substr(first, last - first + 1);
}

[[noreturn]] void bad_value(std::string_view key, std::string_view value, std::string_view expected) {
    throw ParameterError("invalid value '" + std::string(value) + "' for " + std::string(key) +
                         ": expected " + std::string(expected));
}

double parse_double(std::string_view key, std::string_view text) {
    text = trim(text);
    double value = 0.0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc() || ptr != text.data() + text.size() || std::isnan(value)) {
        bad_value(key, text, "a number");
    }
    return value;
}

long long parse_integer(std::string_view key, std::string_view text, long long lo, long long hi) {
    text = trim(text);
    long long value = 0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc() || ptr != text.data() + text.size() || value < lo || value > hi) {
        bad_value(key, text, "an integer in [" + std::to_string(lo) + ", " + std::to_string(hi) + "]");
    }
    return value;
}

std::uint64_t parse_seed(std::string_view key, std::string_view text) {
    text = trim(text);
    std::uint64_t value = 0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc() || ptr != text.data() + text.size()) bad_value(key, text, "an unsigned 64-bit integer");
    return value;
}

bool parse_bool(std::string_view key, std::string_view text) {
    text = trim(text);
    if (text == "true" || text == "1") return true;
    if (text == "false" || text == "0") return false;
    bad_value(key, text, "true or false");
}

std::vector<std::string_view> split_list(std::string_view text) {
    std::vector<std::string_view> items;
    text = trim(text);
    if (text.empty()) return items;
    std::size_t start = 0;
    while (true) {
        const auto comma = text.find(',', start);
        items.push_back(trim(text.substr(start, comma - start)));
        if (comma == std::string_view::npos) break;
        start = comma + 1;
    }
    return items;
}

std::vector<double> parse_double_list(std::string_view key, std::string_view text) {
    std::vector<double> values;
    for (auto item : split_list(text)) values.push_back(parse_double(key, item));
    if (values.empty()) bad_value(key, text, "a non-empty comma-separated list");
    return values;
}

std::string join_doubles(const std::vector<double>& values) {
    std::string out;
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (i > 0) out += ',';
        out += format_double(values[i]);
    }
    return out;
}

struct Setting {
    SettingInfo info;
    std::function<void(RunConfig&, std::string_view)> set;
    std::function<std::string(const RunConfig&)> get;
};

Setting real(std::string_view key, std::string_view help, double SolverParams::*field) {
    return {{key, help},
            [key, field](RunConfig& c, std::string_view v) { c.solver.*field = parse_double(key, v); },
            [field](const RunConfig& c) { return format_double(c.solver.*field); }};
}

Setting phantom_real(std::string_view key, std::string_view help, double PhantomSpec::*field) {
    return {{key, help},
            [key, field](RunConfig& c, std::string_view v) { c.phantom.*field = parse_double(key, v); },
            [field](const RunConfig& c) { return format_double(c.phantom.*field); }};
}

Setting path(std::string_view key, std::string_view help, std::string RunConfig::*field) {
    return {{key, help},
            [field](RunConfig& c, std::string_view v) { c.*field = std::string(trim(v)); },
            [field](const RunConfig& c) { return c.*field; }};
}

const std::vector<Setting>& table() {
    static const std::vector<Setting> kTable = [] {
        std::vector<Setting> t;
        t.push_back(real("lambda_i", "Retinex fidelity weight", &SolverParams::lambda_i));
        t.push_back(real("alpha_b", "bias smoothness weight", &SolverParams::alpha_b));
        t.push_back(real("beta", "total-variation weight on the reflectance", &SolverParams::beta));
        t.push_back(real("theta", "level-set smoothness weight", &SolverParams::theta));
        t.push_back(real("tau", "structural prior weight", &SolverParams::tau));
        t.push_back(real("rho1", "ADMM penalty", &SolverParams::rho1));
        t.push_back(real("sigma", "prior Gaussian scale in pixels", &SolverParams::sigma));
        t.push_back(real("alpha_mag", "expected structural strength", &SolverParams::alpha_mag));
        t.push_back(real("eps_div", "region-mean division guard", &SolverParams::eps_div));
        t.push_back(real("eps_norm", "reference-field normalization guard", &SolverParams::eps_norm));
        t.push_back({{"eps_w", "bias data weight, or 'auto' to follow lambda_i"},
                     [](RunConfig& c, std::string_view v) {
                         if (trim(v) == "auto") {
                             c.solver.eps_w.reset();
                         } else {
                             c.solver.eps_w = parse_double("eps_w", v);
                         }
                     },
                     [](const RunConfig& c) {
                         return c.solver.eps_w ? format_double(*c.solver.eps_w) : std::string("auto");
                     }});
        t.push_back({{"k_max", "maximum outer iterations"},
                     [](RunConfig& c, std::string_view v) {
                         c.solver.k_max = static_cast<int>(parse_integer("k_max", v, 1, 1'000'000));
                     },
                     [](const RunConfig& c) { return std::to_string(c.solver.k_max); }});
        t.push_back(real("delta_tol", "relative u-change stopping threshold", &SolverParams::delta_tol));
        t.push_back(real("cg_tolerance", "relative residual target of the S-solve", &SolverParams::cg_tolerance));
        t.push_back({{"cg_max_iterations", "iteration cap of the S-solve"},
                     [](RunConfig& c, std::string_view v) {
                         c.solver.cg_max_iterations =
                             static_cast<int>(parse_integer("cg_max_iterations", v, 1, 1'000'000));
                     },
                     [](const RunConfig& c) { return std::to_string(c.solver.cg_max_iterations); }});
        t.push_back({{"v_pre_presmooth", "build the reference field from the smoothed image"},
                     [](RunConfig& c, std::string_view v) {
                         c.solver.v_pre_presmooth = parse_bool("v_pre_presmooth", v);
                     },
                     [](const RunConfig& c) { return std::string(c.solver.v_pre_presmooth ? "true" : "false"); }});

        t.push_back(path("input", "input image (segment, correct) or predicted mask (eval)", &RunConfig::input));
        t.push_back(path("truth", "ground-truth mask", &RunConfig::truth));
        t.push_back(path("original", "original image for the eval sharpness ratio", &RunConfig::original));
        t.push_back(path("corrected", "corrected image for the eval sharpness ratio", &RunConfig::corrected));
        t.push_back(path("out", "output prefix, appended verbatim to file names", &RunConfig::out));
        t.push_back({{"jobs", "parallel sweep cells"},
                     [](RunConfig& c, std::string_view v) {
                         c.jobs = static_cast<int>(parse_integer("jobs", v, 1, 1024));
                     },
                     [](const RunConfig& c) { return std::to_string(c.jobs); }});

        t.push_back({{"height", "phantom height"},
                     [](RunConfig& c, std::string_view v) {
                         c.phantom.height = static_cast<int>(parse_integer("height", v, 2, 1 << 16));
                     },
                     [](const RunConfig& c) { return std::to_string(c.phantom.height); }});
        t.push_back({{"width", "phantom width"},
                     [](RunConfig& c, std::string_view v) {
                         c.phantom.width = static_cast<int>(parse_integer("width", v, 2, 1 << 16));
                     },
                     [](const RunConfig& c) { return std::to_string(c.phantom.width); }});
        t.push_back({{"shape", "phantom shape: disk, two-disks, ring, checker-blob"},
                     [](RunConfig& c, std::string_view v) { c.phantom.shape = parse_phantom_shape(trim(v)); },
                     [](const RunConfig& c) { return to_string(c.phantom.shape); }});
        t.push_back(phantom_real("fg_level", "foreground intensity", &PhantomSpec::fg_level));
        t.push_back(phantom_real("bg_level", "background intensity", &PhantomSpec::bg_level));
        t.push_back({{"bias", "bias kind: none, linear-ramp, gaussian-bump, low-freq-sinusoid"},
                     [](RunConfig& c, std::string_view v) { c.phantom.bias.kind = parse_bias_kind(trim(v)); },
                     [](const RunConfig& c) { return to_string(c.phantom.bias.kind); }});
        t.push_back({{"bias_amplitude", "bias amplitude in [0, 1)"},
                     [](RunConfig& c, std::string_view v) {
                         c.phantom.bias.amplitude = parse_double("bias_amplitude", v);
                     },
                     [](const RunConfig& c) { return format_double(c.phantom.bias.amplitude); }});
        t.push_back({{"noise", "noise kind: none, gaussian, salt-pepper, speckle"},
                     [](RunConfig& c, std::string_view v) { c.phantom.noise.kind = parse_noise_kind(trim(v)); },
                     [](const RunConfig& c) { return to_string(c.phantom.noise.kind); }});
        t.push_back({{"noise_density", "noise density in [0, 0.2]"},
                     [](RunConfig& c, std::string_view v) {
                         c.phantom.noise.density = parse_double("noise_density", v);
                     },
                     [](const RunConfig& c) { return format_double(c.phantom.noise.density); }});
        t.push_back({{"seed", "phantom noise seed (REFLSM_SEED overrides)"},
                     [](RunConfig& c, std::string_view v) { c.phantom.seed = parse_seed("seed", v); },
                     [](const RunConfig& c) { return std::to_string(c.phantom.seed); }});

        t.push_back({{"sweep_tau", "comma-separated tau values"},
                     [](RunConfig& c, std::string_view v) { c.sweep.taus = parse_double_list("sweep_tau", v); },
                     [](const RunConfig& c) { return join_doubles(c.sweep.taus); }});
        t.push_back({{"sweep_noise", "comma-separated noise kinds"},
                     [](RunConfig& c, std::string_view v) {
                         std::vector<NoiseKind> kinds;
                         for (auto item : split_list(v)) kinds.push_back(parse_noise_kind(item));
                         if (kinds.empty()) bad_value("sweep_noise", v, "a non-empty comma-separated list");
                         c.sweep.noises = std::move(kinds);
                     },
                     [](const RunConfig& c) {
                         std::string out;
                         for (std::size_t i = 0; i < c.sweep.noises.size(); ++i) {
                             if (i > 0) out += ',';
                             out += to_string(c.sweep.noises[i]);
                         }
                         return out;
                     }});
        t.push_back({{"sweep_density", "comma-separated noise densities"},
                     [](RunConfig& c, std::string_view v) {
                         c.sweep.densities = parse_double_list("sweep_density", v);
                     },
                     [](const RunConfig& c) { return join_doubles(c.sweep.densities); }});
        return t;
    }();
    return kTable;
}

const Setting& find(std::string_view key) {
    for (const auto& s : table()) {
        if (s.info.key == key) return s;
    }
    throw ParameterError("unknown configuration key '" + std::string(key) + "'");
}

}  // namespace

void RunConfig::validate() const {
    solver.validate();
    phantom.validate();
    for (double tau : sweep.taus) {
        if (!(tau >= 0.0) || !std::isfinite(tau)) throw ParameterError("sweep_tau values must be finite and >= 0");
    }
    for (double d : sweep.densities) {
        if (!(d >= 0.0 && d <= 0.2)) throw ParameterError("sweep_density values must lie in [0, 0.2]");
    }
}

const std::vector<SettingInfo>& settings() {
    static const std::vector<SettingInfo> kInfo = [] {
        std::vector<SettingInfo> info;
        for (const auto& s : table()) info.push_back(s.info);
        return info;
    }();
    return kInfo;
}

std::string flag_name(std::string_view key) {
    std::string flag = "--" + std::string(key);
    std::replace(flag.begin() + 2, flag.end(), '_', '-');
    return flag;
}

void apply_setting(RunConfig& config, std::string_view key, std::string_view value) {
    find(key).set(config, value);
}

std::string setting_value(const RunConfig& config, std::string_view key) { return find(key).get(config); }

std::vector<std::pair<std::string, std::string>> parse_config_text(std::string_view text) {
    std::vector<std::pair<std::string, std::string>> pairs;
    std::size_t line_number = 0;
    std::size_t start = 0;
    while (start <= text.size()) {
        const auto end = std::min(text.find('\n', start), text.size());
        std::string_view line = text.substr(start, end - start);
        ++line_number;
        start = end + 1;
        if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) {
            if (end == text.size()) break;
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string_view::npos) {
            throw ParameterError("config line " + std::to_string(line_number) + ": expected key=value");
        }
        const auto key = trim(line.substr(0, eq));
        if (key.empty()) throw ParameterError("config line " + std::to_string(line_number) + ": empty key");
        try {
            find(key);
        } catch (const ParameterError& e) {
            throw ParameterError("config line " + std::to_string(line_number) + ": " + e.what());
        }
        pairs.emplace_back(std::string(key), std::string(trim(line.substr(eq + 1))));
        if (end == text.size()) break;
    }
    return pairs;
}

std::string format_config(const RunConfig& config) {
    std::string out;
    for (const auto& s : table()) {
        out += std::string(s.info.key) + "=" + s.get(config) + "\n";
    }
    return out;
}

}  // namespace reflsm::cli
