#include "commands.hpp"

#include <CLI11.hpp>

#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <filesystem>
#include <map>
#include <ostream>
#include <sstream>
#include <thread>

#include "reflsm/errors.hpp"
#include "reflsm/io.hpp"
#include "reflsm/metrics.hpp"

namespace reflsm::cli {

namespace {

constexpr int kPhantomMaxval = 65535;

double precision_or_nan(const ConfusionCounts& counts) {
    try {
        return precision(counts);
    } catch (const UndefinedResultError&) {
        return std::nan("");
    }
}

/// exp of the log-domain image: the floored intensity the solver actually sees.
ScalarField floored_intensity(const ScalarField& log_image) {
    ScalarField out = log_image;
    for (double& v : out.values()) v = std::exp(v);
    return out;
}

void require(const std::string& value, const char* key) {
    if (value.empty()) throw ParameterError(std::string("missing required setting: ") + flag_name(key));
}

struct PipelineOutput {
    SegmentationResult result;
    MetricsRow row;
    ReportPaths paths;
};

PipelineOutput run_pipeline(const RunConfig& config) {
    require(config.input, "input");
    config.solver.validate();
    const RasterImage raster = read_pgm_file(config.input);
    std::optional<BinaryMask> truth;
    if (!config.truth.empty()) {
        truth = raster_to_mask(read_pgm_file(config.truth));
        if (truth->height != raster.height || truth->width != raster.width) {
            throw DimensionError("truth mask size differs from the input image");
        }
    }

    const ScalarField log_image = to_log_domain(raster);
    PipelineOutput output{run(log_image, config.solver), {}, {}};
    const SegmentationResult& result = output.result;

    MetricsRow& row = output.row;
    row.image = std::filesystem::path(config.input).filename().string();
    row.rtg_ratio = rtg_ratio(result.corrected_image, floored_intensity(log_image));
    row.iterations = result.report.iterations;
    row.seconds = result.report.seconds;
    row.converged = result.report.converged;
    if (truth) {
        const ConfusionCounts counts = confusion(result.mask, *truth);
        row.dice = dice(counts);
        row.precision = precision_or_nan(counts);
    }
    output.paths = write_report(result, raster_to_intensity(raster), row, config.out);
    return output;
}

int finish(const SolverReport& report, std::ostream& err) {
    for (const auto& warning : report.warnings) err << "warning: " << warning << '\n';
    if (!report.converged) {
        err << "warning: stopped after " << report.iterations << " iterations without converging\n";
    }
    return report.converged && report.warnings.empty() ? kExitOk : kExitWarning;
}

void print_row(const MetricsRow& row, std::ostream& out) {
    out << "iterations=" << row.iterations << '\n'
        << "converged=" << (row.converged ? "true" : "false") << '\n'
        << "seconds=" << format_double(row.seconds) << '\n'
        << "rtg_ratio=" << format_double(row.rtg_ratio) << '\n';
    if (!std::isnan(row.dice)) {
        out << "dice=" << format_double(row.dice) << '\n'
            << "precision=" << format_double(row.precision) << '\n';
    }
}

std::string phantom_metadata(const RunConfig& config) {
    std::ostringstream meta;
    meta << "generator=" << kGeneratorName << '\n';
    for (const char* key : {"height", "width", "shape", "fg_level", "bg_level", "bias", "bias_amplitude",
                            "noise", "noise_density", "seed"}) {
        meta << key << '=' << setting_value(config, key) << '\n';
    }
    meta << "image_maxval=" << kPhantomMaxval << '\n'
         << "bias_scale=" << format_double(1.0 / (1.0 + config.phantom.bias.amplitude)) << '\n';
    return meta.str();
}

struct CellResult {
    double dice = 0.0;
    double precision = 0.0;
    double rtg = 0.0;
    int iterations = 0;
    bool converged = false;
    BinaryMask mask{2, 2};
};

CellResult run_cell(const RunConfig& config, const SweepCell& cell) {
    PhantomSpec spec = config.phantom;
    spec.noise = {cell.noise, cell.density};
    const Phantom phantom = generate(spec);
    SolverParams params = config.solver;
    params.tau = cell.tau;
    const ScalarField log_image = to_log_domain(phantom.image);
    SegmentationResult result = run(log_image, params);
    const ConfusionCounts counts = confusion(result.mask, phantom.truth);
    return {dice(counts),
            precision_or_nan(counts),
            rtg_ratio(result.corrected_image, floored_intensity(log_image)),
            result.report.iterations,
            result.report.converged,
            std::move(result.mask)};
}

std::string cell_mask_name(std::size_t index) {
    char buffer[32];
    std::snprintf(buffer, sizeof buffer, "sweep_%03zu_mask.pgm", index);
    return buffer;
}

}  // namespace

int cmd_segment(const RunConfig& config, std::ostream& out, std::ostream& err) {
    const PipelineOutput output = run_pipeline(config);
    print_row(output.row, out);
    out << "mask=" << output.paths.mask.string() << '\n';
    return finish(output.result.report, err);
}

int cmd_correct(const RunConfig& config, std::ostream& out, std::ostream& err) {
    const PipelineOutput output = run_pipeline(config);
    out << "rtg_ratio=" << format_double(output.row.rtg_ratio) << '\n'
        << "corrected=" << output.paths.corrected.string() << '\n'
        << "bias=" << output.paths.bias.string() << '\n'
        << "histogram=" << output.paths.histogram.string() << '\n'
        << "iterations=" << output.row.iterations << '\n';
    return finish(output.result.report, err);
}

int cmd_synth(const RunConfig& config, std::ostream& out, std::ostream&) {
    config.phantom.validate();
    const Phantom phantom = generate(config.phantom);
    const std::string& prefix = config.out;
    ScalarField bias = phantom.bias;
    bias *= 1.0 / (1.0 + config.phantom.bias.amplitude);

    write_pgm_file(intensity_to_raster(phantom.image, kPhantomMaxval), prefix + "image.pgm");
    write_pgm_file(mask_to_raster(phantom.truth), prefix + "truth.pgm");
    write_pgm_file(intensity_to_raster(phantom.clean, kPhantomMaxval), prefix + "clean.pgm");
    write_pgm_file(intensity_to_raster(bias, kPhantomMaxval), prefix + "bias.pgm");
    write_file(prefix + "phantom.txt", phantom_metadata(config));
    out << "image=" << prefix << "image.pgm\n"
        << "truth=" << prefix << "truth.pgm\n"
        << "metadata=" << prefix << "phantom.txt\n";
    return kExitOk;
}

int cmd_eval(const RunConfig& config, std::ostream& out, std::ostream&) {
    require(config.input, "input");
    require(config.truth, "truth");
    const BinaryMask predicted = raster_to_mask(read_pgm_file(config.input));
    const BinaryMask truth = raster_to_mask(read_pgm_file(config.truth));
    const ConfusionCounts counts = confusion(predicted, truth);
    const double d = dice(counts);
    const double p = precision_or_nan(counts);
    double rtg = std::nan("");
    if (!config.original.empty() || !config.corrected.empty()) {
        require(config.original, "original");
        require(config.corrected, "corrected");
        rtg = rtg_ratio(floored_intensity(to_log_domain(read_pgm_file(config.corrected))),
                        floored_intensity(to_log_domain(read_pgm_file(config.original))));
    }

    out << "dice=" << format_double(d) << '\n' << "precision=" << format_double(p) << '\n';
    if (!std::isnan(rtg)) out << "rtg_ratio=" << format_double(rtg) << '\n';

    const std::filesystem::path csv = config.out + "eval.csv";
    std::string row;
    if (!std::filesystem::exists(csv)) row = "prediction,truth,dice,precision,rtg_ratio\n";
    row += config.input + ',' + config.truth + ',' + format_double(d) + ',' + format_double(p) + ',' +
           format_double(rtg) + '\n';
    append_file(csv, row);
    return kExitOk;
}

std::vector<SweepCell> sweep_cells(const SweepSpec& spec) {
    std::vector<SweepCell> cells;
    for (NoiseKind noise : spec.noises) {
        for (double density : spec.densities) {
            for (double tau : spec.taus) cells.push_back({noise, density, tau});
        }
    }
    return cells;
}

int cmd_sweep(const RunConfig& config, std::ostream& out, std::ostream& err) {
    config.validate();
    const std::vector<SweepCell> cells = sweep_cells(config.sweep);
    std::vector<CellResult> results(cells.size());
    std::vector<std::exception_ptr> failures(cells.size());
    std::atomic<std::size_t> next{0};

    auto worker = [&] {
        for (std::size_t i = next++; i < cells.size(); i = next++) {
            try {
                results[i] = run_cell(config, cells[i]);
            } catch (...) {
                failures[i] = std::current_exception();
            }
        }
    };
    {
        const auto count = std::min<std::size_t>(static_cast<std::size_t>(config.jobs), cells.size());
        std::vector<std::jthread> pool;
        for (std::size_t t = 1; t < count; ++t) pool.emplace_back(worker);
        worker();
    }
    for (const auto& failure : failures) {
        if (failure) std::rethrow_exception(failure);
    }

    std::string csv = "cell,noise,density,tau,dice,precision,rtg_ratio,iters,converged\n";
    bool all_converged = true;
    for (std::size_t i = 0; i < cells.size(); ++i) {
        const CellResult& r = results[i];
        csv += std::to_string(i) + ',' + to_string(cells[i].noise) + ',' + format_double(cells[i].density) +
               ',' + format_double(cells[i].tau) + ',' + format_double(r.dice) + ',' +
               format_double(r.precision) + ',' + format_double(r.rtg) + ',' + std::to_string(r.iterations) +
               ',' + (r.converged ? "true" : "false") + '\n';
        write_pgm_file(mask_to_raster(r.mask), config.out + cell_mask_name(i));
        all_converged = all_converged && r.converged;
    }
    write_file(config.out + "sweep.csv", csv);
    out << csv;
    if (!all_converged) {
        err << "warning: some sweep cells stopped without converging\n";
        return kExitWarning;
    }
    return kExitOk;
}

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Joint segmentation and bias correction with a relaxed binary level set"};
    app.name("reflsm");
    app.fallthrough();
    app.require_subcommand(0, 1);

    std::string config_path;
    bool print_config = false;
    app.add_option("--config", config_path, "key=value configuration file; flags take precedence");
    app.add_flag("--print-config", print_config, "print the resolved configuration and exit");

    std::map<std::string, std::string> flag_values;
    std::vector<std::pair<std::string, CLI::Option*>> options;
    for (const auto& setting : settings()) {
        const std::string key(setting.key);
        options.emplace_back(key, app.add_option(flag_name(key), flag_values[key], std::string(setting.help)));
    }

    using Command = int (*)(const RunConfig&, std::ostream&, std::ostream&);
    const std::vector<std::tuple<const char*, const char*, Command>> commands = {
        {"segment", "segment a PGM image and write the decomposition", cmd_segment},
        {"correct", "bias-correct a PGM image and report the sharpness ratio", cmd_correct},
        {"synth", "generate a phantom with ground truth", cmd_synth},
        {"eval", "score a predicted mask against ground truth", cmd_eval},
        {"sweep", "run a tau x noise grid on a phantom", cmd_sweep},
    };
    for (const auto& [name, description, fn] : commands) app.add_subcommand(name, description);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitInputError;
    }

    try {
        RunConfig config;
        if (!config_path.empty()) {
            for (const auto& [key, value] : parse_config_text(read_file(config_path))) {
                apply_setting(config, key, value);
            }
        }
        for (const auto& [key, option] : options) {
            if (option->count() > 0) apply_setting(config, key, flag_values[key]);
        }
        if (const char* seed = std::getenv("REFLSM_SEED"); seed != nullptr && *seed != '\0') {
            apply_setting(config, "seed", seed);
        }
        config.validate();

        if (print_config) {
            out << format_config(config);
            return kExitOk;
        }
        for (const auto& [name, description, fn] : commands) {
            if (app.got_subcommand(name)) return fn(config, out, err);
        }
        err << "error: a subcommand is required (segment, correct, synth, eval, sweep)\n";
        return kExitInputError;
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return kExitInputError;
    } catch (const std::filesystem::filesystem_error& e) {
        err << "error: " << e.what() << '\n';
        return kExitInputError;
    }
}

}  // namespace reflsm::cli
