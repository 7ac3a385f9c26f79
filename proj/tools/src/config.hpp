#pragma once

// Run configuration shared by every subcommand. Each setting has one
// snake_case key used in config files and a kebab-case flag of the same name.

#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "reflsm/solver.hpp"
#include "reflsm/synth.hpp"

namespace reflsm::cli {

struct SweepSpec {
    std::vector<double> taus{0.001, 0.04, 0.12, 0.16, 0.17, 0.18};
    std::vector<NoiseKind> noises{NoiseKind::none};
    std::vector<double> densities{0.0};
};

struct RunConfig {
    SolverParams solver;
    PhantomSpec phantom;
    std::string input;
    std::string truth;
    std::string original;
    std::string corrected;
    std::string out;
    int jobs = 1;
    SweepSpec sweep;

    /// Checks solver, phantom and sweep settings; throws ParameterError.
    void validate() const;
};

struct SettingInfo {
    std::string_view key;
    std::string_view help;
};

/// Every recognised key, in the order --print-config emits them.
const std::vector<SettingInfo>& settings();

/// "lambda_i" -> "--lambda-i".
std::string flag_name(std::string_view key);

/// Parses and stores one value. Unknown keys and malformed values throw ParameterError.
void apply_setting(RunConfig& config, std::string_view key, std::string_view value);

/// Current value of a key in the textual form apply_setting accepts.
std::string setting_value(const RunConfig& config, std::string_view key);

/// Flat key=value text: one pair per line, '#' starts a comment, blank lines
/// ignored, whitespace around keys and values trimmed. Throws ParameterError
/// naming the line on malformed input.
std::vector<std::pair<std::string, std::string>> parse_config_text(std::string_view text);

/// All settings as key=value lines; parsing the output reproduces the config exactly.
std::string format_config(const RunConfig& config);

}  // namespace reflsm::cli
