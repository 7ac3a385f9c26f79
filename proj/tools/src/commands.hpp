#pragma once

#include <iosfwd>
#include <vector>

#include "config.hpp"

namespace reflsm::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInputError = 2;
/// The run finished and wrote its outputs, but did not converge or logged warnings.
inline constexpr int kExitWarning = 3;

/// Reads --input, runs the solver and writes the report files under --out.
int cmd_segment(const RunConfig& config, std::ostream& out, std::ostream& err);
/// Same pipeline as segment; prints the sharpness ratio and the corrected-image paths.
int cmd_correct(const RunConfig& config, std::ostream& out, std::ostream& err);
/// Writes image, truth, clean and bias PGMs plus phantom.txt (key=value metadata).
int cmd_synth(const RunConfig& config, std::ostream& out, std::ostream& err);
/// Compares --input (predicted mask) with --truth, optionally the sharpness of
/// --corrected against --original; prints key=value lines and appends to eval.csv.
int cmd_eval(const RunConfig& config, std::ostream& out, std::ostream& err);
/// Runs every (noise, density, tau) cell on the configured phantom and writes sweep.csv.
int cmd_sweep(const RunConfig& config, std::ostream& out, std::ostream& err);

struct SweepCell {
    NoiseKind noise;
    double density;
    double tau;
};

/// Cross product in list order: noise kinds outermost, then densities, then taus.
std::vector<SweepCell> sweep_cells(const SweepSpec& spec);

/// Parses a full command line (argv[0] is the program name) and dispatches.
/// Returns the process exit code.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace reflsm::cli
