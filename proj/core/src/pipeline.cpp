#include "acdiag/pipeline.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <sstream>

#include "acdiag/billiard.hpp"
#include "acdiag/qinfo.hpp"
#include "acdiag/sweep.hpp"

namespace acdiag::pipeline {

namespace fs = std::filesystem;
using ordered_json = nlohmann::ordered_json;

const char* backend_name(Backend backend) {
    switch (backend) {
        case Backend::quadrupole: return "quadrupole";
        case Backend::oval: return "oval";
        case Backend::ising: return "ising";
        case Backend::two_level_test: return "two_level_test";
    }
    throw std::logic_error("backend_name: unknown backend");
}

namespace {

std::string trim(const std::string& text) {
    const auto begin = text.find_first_not_of(" \t\r\n");
    if (begin == std::string::npos) return {};
    const auto end = text.find_last_not_of(" \t\r\n");
    return text.substr(begin, end - begin + 1);
}

// Raw key=value map in file order, later assignments overriding earlier ones.
std::map<std::string, std::string> parse_key_values(const std::string& text, std::vector<std::string>& issues) {
    std::map<std::string, std::string> values;
    std::istringstream stream(text);
    std::string line;
    int line_number = 0;
    while (std::getline(stream, line)) {
        ++line_number;
        const auto comment = line.find('#');
        if (comment != std::string::npos) line.erase(comment);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            issues.push_back("line " + std::to_string(line_number) + ": expected key = value");
            continue;
        }
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty()) {
            issues.push_back("line " + std::to_string(line_number) + ": empty key");
            continue;
        }
        values[key] = value;
    }
    return values;
}

class ConfigReader {
  public:
    ConfigReader(std::map<std::string, std::string> values, std::vector<std::string>& issues)
        : values_(std::move(values)), issues_(issues) {}

    std::optional<std::string> take(const std::string& key) {
        auto it = values_.find(key);
        if (it == values_.end()) return std::nullopt;
        std::string value = it->second;
        values_.erase(it);
        return value;
    }

    void read_double(const std::string& key, double& target) {
        if (auto raw = take(key)) {
            try {
                std::size_t used = 0;
                const double parsed = std::stod(*raw, &used);
                if (used != raw->size()) throw std::invalid_argument("trailing characters");
                target = parsed;
            } catch (const std::exception&) {
                issues_.push_back(key + ": not a number: '" + *raw + "'");
            }
        }
    }

    void read_int(const std::string& key, int& target) {
        if (auto raw = take(key)) {
            try {
                std::size_t used = 0;
                const long parsed = std::stol(*raw, &used, 10);
                if (used != raw->size()) throw std::invalid_argument("trailing characters");
                target = static_cast<int>(parsed);
            } catch (const std::exception&) {
                issues_.push_back(key + ": not an integer: '" + *raw + "'");
            }
        }
    }

    void read_bool(const std::string& key, bool& target) {
        if (auto raw = take(key)) {
            if (*raw == "true" || *raw == "1")
                target = true;
            else if (*raw == "false" || *raw == "0")
                target = false;
            else
                issues_.push_back(key + ": expected true/false: '" + *raw + "'");
        }
    }

    void read_string(const std::string& key, std::string& target) {
        if (auto raw = take(key)) target = *raw;
    }

    void read_double_list(const std::string& key, std::vector<double>& target) {
        if (auto raw = take(key)) {
            target.clear();
            if (trim(*raw).empty()) return;
            std::istringstream stream(*raw);
            std::string item;
            while (std::getline(stream, item, ',')) {
                try {
                    std::size_t used = 0;
                    item = trim(item);
                    const double parsed = std::stod(item, &used);
                    if (used != item.size()) throw std::invalid_argument("trailing characters");
                    target.push_back(parsed);
                } catch (const std::exception&) {
                    issues_.push_back(key + ": not a number in list: '" + item + "'");
                }
            }
        }
    }

    void reject_unknown() {
        for (const auto& [key, value] : values_) issues_.push_back(key + ": unknown key");
    }

  private:
    std::map<std::string, std::string> values_;
    std::vector<std::string>& issues_;
};

}  // namespace

RunConfig validate_config(const std::string& text,
                          const std::vector<std::pair<std::string, std::string>>& overrides) {
    std::vector<std::string> issues;
    auto values = parse_key_values(text, issues);
    for (const auto& [key, value] : overrides) values[trim(key)] = trim(value);

    RunConfig config;
    ConfigReader reader(std::move(values), issues);

    bool backend_seen = false;
    if (auto raw = reader.take("backend")) {
        backend_seen = true;
        if (*raw == "quadrupole")
            config.backend = Backend::quadrupole;
        else if (*raw == "oval")
            config.backend = Backend::oval;
        else if (*raw == "ising")
            config.backend = Backend::ising;
        else if (*raw == "two_level_test")
            config.backend = Backend::two_level_test;
        else
            issues.push_back("backend: expected quadrupole|oval|ising|two_level_test: '" + *raw + "'");
    } else {
        issues.push_back("backend: required key is missing");
    }

    reader.read_double("param_start", config.param_start);
    reader.read_double("param_stop", config.param_stop);
    reader.read_int("param_steps", config.param_steps);
    reader.read_int("rank", config.rank);
    reader.read_string("output_dir", config.output_dir);
    reader.read_int("workers", config.workers);

    reader.read_int("resolution", config.resolution);
    reader.read_double("target_k", config.target_k);
    reader.read_int("mode_count", config.mode_count);
    reader.read_double("oval_a", config.oval_a);
    reader.read_double("oval_b", config.oval_b);
    reader.read_double("refractive_index", config.refractive_index);
    reader.read_double_list("dump_parameters", config.dump_parameters);

    reader.read_int("sites", config.sites);
    reader.read_double("coupling", config.coupling);
    reader.read_double("field", config.field);
    if (auto raw = reader.take("parity")) {
        if (*raw == "even")
            config.parity = spinchain::Parity::even;
        else if (*raw == "odd")
            config.parity = spinchain::Parity::odd;
        else
            issues.push_back("parity: expected even|odd: '" + *raw + "'");
    }
    reader.read_int("window_lo", config.window_lo);
    reader.read_int("window_hi", config.window_hi);

    reader.read_double("gap_coupling", config.gap_coupling);

    reader.read_double("overlap_floor", config.overlap_floor);
    reader.read_double("gap_threshold_factor", config.gap_threshold_factor);
    reader.read_bool("refine", config.refine);
    reader.read_int("refine_levels", config.refine_levels);

    reader.reject_unknown();

    // Cross-field invariants.
    if (config.param_steps < 2) issues.push_back("param_steps: must be at least 2");
    if (!(config.param_stop > config.param_start)) issues.push_back("param_stop: must exceed param_start");
    if (config.rank < 1) issues.push_back("rank: must be at least 1");
    if (config.output_dir.empty()) issues.push_back("output_dir: must not be empty");
    if (config.workers < 1) issues.push_back("workers: must be at least 1");
    if (config.overlap_floor < 0.0 || config.overlap_floor > 1.0)
        issues.push_back("overlap_floor: must lie in [0, 1]");
    if (config.gap_threshold_factor < 1.0) issues.push_back("gap_threshold_factor: must be at least 1");
    if (config.refine_levels < 1) issues.push_back("refine_levels: must be at least 1");

    const bool is_billiard = config.backend == Backend::quadrupole || config.backend == Backend::oval;
    if (backend_seen && is_billiard) {
        if (config.resolution < 20) issues.push_back("resolution: must be at least 20 points per unit length");
        if (config.target_k <= 0.0) issues.push_back("target_k: must be positive");
        if (config.mode_count < 1) issues.push_back("mode_count: must be at least 1");
        if (config.oval_a <= 0.0) issues.push_back("oval_a: must be positive");
        if (config.oval_b <= 0.0) issues.push_back("oval_b: must be positive");
        if (config.refractive_index <= 0.0) issues.push_back("refractive_index: must be positive");
        const double extreme = std::max(std::abs(config.param_start), std::abs(config.param_stop));
        if (extreme > 0.2)
            issues.push_back("param_start/param_stop: |deformation| > 0.2 is outside the validated range");
    }
    for (double p : config.dump_parameters)
        if (p < config.param_start || p > config.param_stop)
            issues.push_back("dump_parameters: " + format_double(p) + " lies outside the sweep range");
    if (backend_seen && config.backend == Backend::ising) {
        if (config.sites < 2 || config.sites > 14) issues.push_back("sites: must lie in [2, 14]");
        if (config.window_lo < 0) issues.push_back("window_lo: must be nonnegative");
        if (config.sites >= 2 && config.sites <= 14) {
            const auto dim = spinchain::bit_reversal_sector(config.sites, config.parity).dimension();
            const int hi = config.window_hi < 0 ? static_cast<int>(dim) : config.window_hi;
            if (hi > dim) issues.push_back("window_hi: exceeds the sector dimension " + std::to_string(dim));
            if (config.window_lo >= hi) issues.push_back("window_lo: must be below the window end");
        }
    }
    if (backend_seen && config.backend == Backend::two_level_test) {
        if (config.gap_coupling <= 0.0) issues.push_back("gap_coupling: must be positive");
    }

    if (!issues.empty()) throw ConfigError(std::move(issues));
    return config;
}

std::string config_echo(const RunConfig& config) {
    std::ostringstream out;
    out << "backend = " << backend_name(config.backend) << '\n';
    out << "param_start = " << format_double(config.param_start) << '\n';
    out << "param_stop = " << format_double(config.param_stop) << '\n';
    out << "param_steps = " << config.param_steps << '\n';
    out << "rank = " << config.rank << '\n';
    out << "output_dir = " << config.output_dir << '\n';
    out << "workers = " << config.workers << '\n';
    out << "resolution = " << config.resolution << '\n';
    out << "target_k = " << format_double(config.target_k) << '\n';
    out << "mode_count = " << config.mode_count << '\n';
    out << "oval_a = " << format_double(config.oval_a) << '\n';
    out << "oval_b = " << format_double(config.oval_b) << '\n';
    out << "refractive_index = " << format_double(config.refractive_index) << '\n';
    out << "dump_parameters = ";
    for (std::size_t i = 0; i < config.dump_parameters.size(); ++i) {
        if (i) out << ", ";
        out << format_double(config.dump_parameters[i]);
    }
    out << '\n';
    out << "sites = " << config.sites << '\n';
    out << "coupling = " << format_double(config.coupling) << '\n';
    out << "field = " << format_double(config.field) << '\n';
    out << "parity = " << (config.parity == spinchain::Parity::even ? "even" : "odd") << '\n';
    out << "window_lo = " << config.window_lo << '\n';
    out << "window_hi = " << config.window_hi << '\n';
    out << "gap_coupling = " << format_double(config.gap_coupling) << '\n';
    out << "overlap_floor = " << format_double(config.overlap_floor) << '\n';
    out << "gap_threshold_factor = " << format_double(config.gap_threshold_factor) << '\n';
    out << "refine = " << (config.refine ? "true" : "false") << '\n';
    out << "refine_levels = " << config.refine_levels << '\n';
    return out.str();
}

namespace {

std::vector<double> linspace(double start, double stop, int steps) {
    std::vector<double> grid(static_cast<std::size_t>(steps));
    for (int i = 0; i < steps; ++i)
        grid[static_cast<std::size_t>(i)] = start + (stop - start) * static_cast<double>(i) / (steps - 1);
    grid.back() = stop;
    return grid;
}

// Everything the generic sweep driver needs from one backend.
struct BackendData {
    std::vector<sweep::ParameterEigenSet> sets;
    qinfo::Bipartition split;
    sweep::IndexWindow window;
    sweep::SolveValues solve_values;  // sorted eigenvalues at an arbitrary parameter
    std::function<Eigen::VectorXd(const Eigen::VectorXd&)> to_state;  // eigvec column -> diagnostics state
    int dump_nx = 0, dump_ny = 0;
    double dump_dx = 1.0, dump_dy = 1.0;
    double dump_scale = 1.0;  // applied to state vectors before dumping
};

Eigen::MatrixXd two_level_hamiltonian(double detuning, double g) {
    Eigen::MatrixXd h(2, 2);
    h << detuning, g, g, -detuning;
    return h;
}

BackendData prepare_two_level(const RunConfig& config, const std::vector<double>& grid) {
    BackendData data;
    data.split = qinfo::Bipartition::trivial(2);
    data.window = {0, 2};
    data.sets.resize(grid.size());
    const double g = config.gap_coupling;
    parallel_for(grid.size(), config.workers, [&](std::size_t i) {
        const auto pairs = linalg::dense_sym_eig(two_level_hamiltonian(grid[i], g));
        auto& set = data.sets[i];
        set.parameter = grid[i];
        set.values.resize(2);
        set.vectors.resize(2, 2);
        for (int k = 0; k < 2; ++k) {
            set.values[k] = pairs[static_cast<std::size_t>(k)].value;
            set.vectors.col(k) = pairs[static_cast<std::size_t>(k)].vector;
        }
    });
    data.solve_values = [g](double parameter) {
        Eigen::VectorXd values(2);
        const double split = std::hypot(parameter, g);
        values << -split, split;
        return values;
    };
    data.to_state = [](const Eigen::VectorXd& v) { return v; };
    data.dump_nx = 2;
    data.dump_ny = 1;
    return data;
}

BackendData prepare_ising(const RunConfig& config, const std::vector<double>& grid) {
    BackendData data;
    spinchain::SpinChainModel model;
    model.sites = config.sites;
    model.coupling = config.coupling;
    model.field = config.field;

    auto basis = std::make_shared<spinchain::SectorBasis>(spinchain::bit_reversal_sector(config.sites, config.parity));
    const auto eigensets = spinchain::sweep_spectrum(model, *basis, grid, config.workers);

    data.sets.resize(eigensets.size());
    for (std::size_t i = 0; i < eigensets.size(); ++i) {
        data.sets[i].parameter = eigensets[i].tilt;
        data.sets[i].values = eigensets[i].values;
        data.sets[i].vectors = eigensets[i].vectors;
    }
    data.split = qinfo::Bipartition::chain_half(config.sites);
    data.window = {config.window_lo, config.window_hi};
    data.solve_values = [model, basis](double parameter) {
        spinchain::SpinChainModel at = model;
        at.tilt = parameter;
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(spinchain::sector_hamiltonian(at, *basis),
                                                              Eigen::EigenvaluesOnly);
        return Eigen::VectorXd(solver.eigenvalues());
    };
    data.to_state = [basis](const Eigen::VectorXd& v) { return basis->embed(v); };
    data.dump_nx = static_cast<int>(data.split.left_dim);
    data.dump_ny = static_cast<int>(data.split.right_dim);
    return data;
}

BackendData prepare_billiard(const RunConfig& config, const std::vector<double>& grid) {
    auto make_geometry = [&config](double deformation) {
        return config.backend == Backend::quadrupole
                   ? billiard::BilliardGeometry::quadrupole(deformation, config.refractive_index)
                   : billiard::BilliardGeometry::oval(deformation, config.oval_a, config.oval_b,
                                                      config.refractive_index);
    };

    // A common box over the whole sweep keeps the tensor factors (and thus
    // overlaps and bipartitions) identical at every deformation.
    billiard::BoundingBox envelope = billiard::bounding_box(make_geometry(grid.front()));
    for (double p : grid) envelope.merge(billiard::bounding_box(make_geometry(p)));

    // The lattice depends only on the envelope and resolution, so every
    // deformation shares this shape.
    const auto reference_grid =
        billiard::DomainGrid::from_geometry(make_geometry(grid.front()), config.resolution, envelope);
    const int nx = reference_grid.nx();
    const int ny = reference_grid.ny();
    const double dx = reference_grid.dx();

    BackendData data;
    data.sets.resize(grid.size());
    parallel_for(grid.size(), config.workers, [&](std::size_t i) {
        billiard::SolveModesOptions options;
        options.envelope = &envelope;
        const auto modes = billiard::solve_modes(make_geometry(grid[i]), config.resolution, config.target_k,
                                                 config.mode_count, options);
        auto& set = data.sets[i];
        set.parameter = grid[i];
        set.values.resize(static_cast<Eigen::Index>(modes.size()));
        set.vectors.resize(static_cast<Eigen::Index>(nx) * ny, static_cast<Eigen::Index>(modes.size()));
        const auto& mode_grid = *modes.front().grid;
        const double cell_norm = std::sqrt(mode_grid.dx() * mode_grid.dy());
        for (std::size_t m = 0; m < modes.size(); ++m) {
            set.values[static_cast<Eigen::Index>(m)] = modes[m].eigenvalue;
            // Back to unit 2-norm so overlaps are inner products of states.
            set.vectors.col(static_cast<Eigen::Index>(m)) = mode_grid.embed(modes[m].values) * cell_norm;
        }
    });

    data.split = qinfo::Bipartition::grid(nx, ny);
    data.window = {0, config.mode_count};
    const int resolution = config.resolution;
    const double target_k = config.target_k;
    const int mode_count = config.mode_count;
    data.solve_values = [make_geometry, envelope, resolution, target_k, mode_count](double parameter) {
        billiard::SolveModesOptions options;
        options.envelope = &envelope;
        const auto modes = billiard::solve_modes(make_geometry(parameter), resolution, target_k, mode_count, options);
        Eigen::VectorXd values(static_cast<Eigen::Index>(modes.size()));
        for (std::size_t m = 0; m < modes.size(); ++m) values[static_cast<Eigen::Index>(m)] = modes[m].eigenvalue;
        return values;
    };
    data.to_state = [](const Eigen::VectorXd& v) { return v; };
    data.dump_nx = nx;
    data.dump_ny = ny;
    data.dump_dx = dx;
    data.dump_dy = dx;
    data.dump_scale = 1.0 / dx;  // unit 2-norm -> sum(v^2) dx dy = 1
    return data;
}

class OutputWriter {
  public:
    explicit OutputWriter(fs::path directory) : directory_(std::move(directory)) {}

    std::ofstream open(const std::string& relative) {
        const fs::path path = directory_ / relative;
        if (path.has_parent_path()) {
            std::error_code ec;
            fs::create_directories(path.parent_path(), ec);
            if (ec) throw IoError("run_pipeline: cannot create " + path.parent_path().string());
        }
        std::ofstream out(path);
        if (!out) throw IoError("run_pipeline: cannot open " + path.string() + " for writing");
        files_.push_back(relative);
        return out;
    }

    void register_file(const std::string& relative) { files_.push_back(relative); }

    std::vector<std::string> sorted_files() const {
        auto sorted = files_;
        std::sort(sorted.begin(), sorted.end());
        return sorted;
    }

    const fs::path& directory() const { return directory_; }

  private:
    fs::path directory_;
    std::vector<std::string> files_;
};

void write_diagnostics_row(std::ofstream& out, double parameter, int branch, const qinfo::DiagnosticsRecord& r) {
    out << format_double(parameter) << ',' << branch << ',' << format_double(r.s_von_neumann) << ','
        << format_double(r.s_config) << ',' << format_double(r.s_shannon_left) << ','
        << format_double(r.s_shannon_right) << ',' << format_double(r.coherence_left) << ','
        << format_double(r.coherence_right) << ',' << format_double(r.purity) << ','
        << format_double(r.purity_diag) << ',' << format_double(r.purity_off);
    for (double w : r.schmidt_top) out << ',' << format_double(w);
    out << ',' << format_double(r.captured_weight) << '\n';
}

constexpr const char* kDiagnosticsHeader =
    "parameter,branch,S_vN,S_config,S_Sh_x,S_Sh_y,C_d_x,C_d_y,P,P_diag,P_off,"
    "lambda1,lambda2,lambda3,lambda4,lambda5,captured_weight";

const char* sign_name(qinfo::EntropySign sign) {
    switch (sign) {
        case qinfo::EntropySign::negative: return "-";
        case qinfo::EntropySign::positive: return "+";
        case qinfo::EntropySign::neutral: return "0";
    }
    return "?";
}

}  // namespace

RunManifest run_pipeline(const RunConfig& config) {
    // Re-validate so programmatic callers get the same guarantees as files.
    (void)validate_config(config_echo(config));

    const auto grid = linspace(config.param_start, config.param_stop, config.param_steps);
    BackendData data;
    switch (config.backend) {
        case Backend::two_level_test: data = prepare_two_level(config, grid); break;
        case Backend::ising: data = prepare_ising(config, grid); break;
        case Backend::quadrupole:
        case Backend::oval: data = prepare_billiard(config, grid); break;
    }

    sweep::TrackOptions track_options;
    track_options.overlap_floor = config.overlap_floor;
    const auto branches = sweep::track_branches(data.sets, data.window, track_options);

    auto crossings = sweep::detect_avoided_crossings(branches, config.gap_threshold_factor);
    if (config.refine)
        for (auto& crossing : crossings) crossing = sweep::refine_crossing(data.solve_values, crossing, config.refine_levels);

    std::error_code ec;
    fs::create_directories(config.output_dir, ec);
    if (ec) throw IoError("run_pipeline: cannot create output directory " + config.output_dir);
    OutputWriter writer(config.output_dir);

    {
        auto out = writer.open("spectrum.csv");
        out << "parameter,branch,eigenvalue\n";
        for (const auto& branch : branches)
            for (const auto& point : branch.points)
                out << format_double(point.parameter) << ',' << branch.id << ',' << format_double(point.value)
                    << '\n';
        if (!out) throw IoError("run_pipeline: write failed for spectrum.csv");
    }

    // Diagnostics per branch, plus Schmidt spectra and the sign-rule table
    // between consecutive sweep steps as JSON lines.
    auto schmidt_out = writer.open("schmidt.jsonl");
    auto signrule_out = writer.open("signrule.jsonl");
    char branch_file[64];
    for (const auto& branch : branches) {
        std::snprintf(branch_file, sizeof branch_file, "diagnostics_branch_%03d.csv", branch.id);
        auto out = writer.open(branch_file);
        out << kDiagnosticsHeader << '\n';

        std::optional<Eigen::MatrixXd> previous_c;
        double previous_parameter = 0.0;
        for (const auto& point : branch.points) {
            const Eigen::VectorXd state =
                data.to_state(point.sign * data.sets[static_cast<std::size_t>(point.set_index)].vectors.col(point.column));
            const auto record = qinfo::compute_diagnostics(state, data.split, config.rank);
            write_diagnostics_row(out, point.parameter, branch.id, record);

            const auto c = qinfo::coefficient_matrix(state, data.split);
            const auto spectrum = qinfo::schmidt_spectrum(c, config.rank);

            ordered_json schmidt_row;
            schmidt_row["parameter"] = point.parameter;
            schmidt_row["branch"] = branch.id;
            schmidt_row["overlap_from_prev"] = point.overlap_from_prev;
            schmidt_row["tracking_break"] = point.break_before;
            schmidt_row["weights"] =
                std::vector<double>(spectrum.weights.data(), spectrum.weights.data() + spectrum.rank);
            schmidt_row["captured_weight"] = spectrum.captured_weight;
            schmidt_out << schmidt_row.dump() << '\n';

            if (previous_c) {
                const auto shifts = qinfo::svd_perturbation_predict(*previous_c, c.matrix());
                const int reported = static_cast<int>(std::min<std::size_t>(shifts.size(),
                                                                            static_cast<std::size_t>(config.rank)));
                for (int k = 0; k < reported; ++k) {
                    const auto& shift = shifts[static_cast<std::size_t>(k)];
                    ordered_json row;
                    row["parameter_from"] = previous_parameter;
                    row["parameter_to"] = point.parameter;
                    row["branch"] = branch.id;
                    row["component"] = shift.component;
                    row["sigma"] = shift.sigma;
                    row["weight"] = shift.weight;
                    row["simple"] = shift.simple;
                    if (shift.simple) {
                        row["predicted"] = shift.predicted;
                        row["actual"] = shift.actual;
                        row["sign"] = sign_name(qinfo::entropy_sign_rule(shift.weight, shift.predicted));
                    }
                    signrule_out << row.dump() << '\n';
                }
            }
            previous_c = c.matrix();
            previous_parameter = point.parameter;
        }
        if (!out) throw IoError("run_pipeline: write failed for diagnostics CSV");
    }
    if (!schmidt_out || !signrule_out) throw IoError("run_pipeline: write failed for JSON lines output");
    schmidt_out.close();
    signrule_out.close();

    {
        auto out = writer.open("crossings.csv");
        out << "branch_low,branch_high,location,min_gap,window_lo,window_hi,refined\n";
        for (const auto& crossing : crossings)
            out << crossing.branch_low << ',' << crossing.branch_high << ',' << format_double(crossing.location)
                << ',' << format_double(crossing.min_gap) << ',' << format_double(crossing.window_lo) << ','
                << format_double(crossing.window_hi) << ',' << (crossing.refined ? "true" : "false") << '\n';
        if (!out) throw IoError("run_pipeline: write failed for crossings.csv");
    }

    // Mode dumps at the requested sweep parameters (snapped to the grid).
    for (double requested : config.dump_parameters) {
        std::size_t best = 0;
        for (std::size_t i = 1; i < grid.size(); ++i)
            if (std::abs(grid[i] - requested) < std::abs(grid[best] - requested)) best = i;
        for (const auto& branch : branches) {
            const auto& point = branch.points[best];
            const Eigen::VectorXd state =
                data.to_state(point.sign * data.sets[static_cast<std::size_t>(point.set_index)].vectors.col(point.column));
            char name[64];
            std::snprintf(name, sizeof name, "modes/mode_b%03d_p%03zu.dat", branch.id, best);
            const fs::path path = writer.directory() / name;
            std::error_code dir_ec;
            fs::create_directories(path.parent_path(), dir_ec);
            if (dir_ec) throw IoError("run_pipeline: cannot create " + path.parent_path().string());
            billiard::write_mode_field(path, data.dump_nx, data.dump_ny, data.dump_dx, data.dump_dy, point.value,
                                       state * data.dump_scale);
            writer.register_file(name);
        }
    }

    RunManifest manifest;
    manifest.directory = writer.directory();
    manifest.branch_count = static_cast<int>(branches.size());
    manifest.crossing_count = static_cast<int>(crossings.size());

    {
        writer.register_file("manifest.json");
        ordered_json doc;
        doc["tool"] = "acdiag";
        doc["version"] = version;
        doc["backend"] = backend_name(config.backend);
        ordered_json echo;
        std::istringstream echo_stream(config_echo(config));
        std::string line;
        while (std::getline(echo_stream, line)) {
            const auto eq = line.find('=');
            echo[trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
        }
        doc["config"] = echo;
        doc["branches"] = manifest.branch_count;
        doc["crossings"] = manifest.crossing_count;
        doc["outputs"] = writer.sorted_files();

        std::ofstream out(writer.directory() / "manifest.json");
        if (!out) throw IoError("run_pipeline: cannot open manifest.json for writing");
        out << doc.dump(2) << '\n';
        if (!out) throw IoError("run_pipeline: write failed for manifest.json");
    }

    manifest.files = writer.sorted_files();
    return manifest;
}

void report_from_dumps(const std::vector<std::filesystem::path>& dumps, const std::filesystem::path& output,
                       int rank) {
    std::ofstream out(output);
    if (!out) throw IoError("report_from_dumps: cannot open " + output.string());
    out << kDiagnosticsHeader << '\n';
    int index = 0;
    for (const auto& dump : dumps) {
        const auto field = billiard::read_mode_field(dump);
        const auto split = qinfo::Bipartition::grid(field.nx, field.ny);
        const auto record = qinfo::compute_diagnostics(field.values, split, rank);
        write_diagnostics_row(out, static_cast<double>(index), -1, record);
        ++index;
    }
    if (!out) throw IoError("report_from_dumps: write failed for " + output.string());
}

}  // namespace acdiag::pipeline
