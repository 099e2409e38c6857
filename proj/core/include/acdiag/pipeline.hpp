#pragma once

#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "acdiag/spinchain.hpp"

namespace acdiag::pipeline {

enum class Backend { quadrupole, oval, ising, two_level_test };

const char* backend_name(Backend backend);

/// One sweep run, fully specified. Defaults follow the reference models:
/// L = 8, J = B = 1 for the chain, refractive index 3.3 and oval semi-axes
/// (1.0, 1.03) for the cavities.
struct RunConfig {
    Backend backend = Backend::two_level_test;

    double param_start = 0.0;
    double param_stop = 1.0;
    int param_steps = 2;

    int rank = 5;  // Schmidt reporting rank
    std::string output_dir = "acdiag-out";
    int workers = 1;

    // billiard backends
    int resolution = 100;
    double target_k = 1.5;
    int mode_count = 6;
    double oval_a = 1.0;
    double oval_b = 1.03;
    double refractive_index = 3.3;
    std::vector<double> dump_parameters;

    // ising backend
    int sites = 8;
    double coupling = 1.0;
    double field = 1.0;
    spinchain::Parity parity = spinchain::Parity::even;
    int window_lo = 0;
    int window_hi = -1;  // -1: all

    // two_level_test backend
    double gap_coupling = 0.01;

    // tracking / crossing detection / refinement
    double overlap_floor = 0.5;
    double gap_threshold_factor = 2.0;
    bool refine = false;
    int refine_levels = 48;

    bool operator==(const RunConfig&) const = default;
};

/// Parses and validates a flat key=value configuration ('#' comments).
/// Overrides are applied after the file text, last write wins. Every
/// violated invariant and every unknown key is reported; on any problem a
/// ConfigError carrying the full field-level list is thrown.
RunConfig validate_config(const std::string& text,
                          const std::vector<std::pair<std::string, std::string>>& overrides = {});

/// Canonical key=value rendering; validate_config(config_echo(c)) == c.
std::string config_echo(const RunConfig& config);

struct RunManifest {
    std::filesystem::path directory;
    std::vector<std::string> files;  // relative to directory, sorted
    int branch_count = 0;
    int crossing_count = 0;
};

/// Runs the full pipeline: solve the sweep, track branches, compute the
/// per-point diagnostics, detect (and optionally refine) avoided crossings,
/// and write spectrum/diagnostics/crossing CSVs, Schmidt and sign-rule
/// JSON-lines, requested mode dumps, and the manifest.
RunManifest run_pipeline(const RunConfig& config);

/// Re-derives the diagnostics CSV from stored mode dumps. The parameter
/// column holds the file index and the branch column is -1.
void report_from_dumps(const std::vector<std::filesystem::path>& dumps, const std::filesystem::path& output,
                       int rank = 5);

}  // namespace acdiag::pipeline
