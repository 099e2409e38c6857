// acdiag: sweep a control parameter of a model quantum system, track
// eigenstate branches through avoided crossings, and export entanglement,
// coherence, and purity-channel diagnostics as plot-ready CSV.

#include <CLI11.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include "acdiag/common.hpp"
#include "acdiag/pipeline.hpp"

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitSolver = 3;
constexpr int kExitIo = 4;

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw acdiag::IoError("cannot open config file " + path);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

std::vector<std::pair<std::string, std::string>> split_overrides(const std::vector<std::string>& raw) {
    std::vector<std::pair<std::string, std::string>> overrides;
    for (const auto& item : raw) {
        const auto eq = item.find('=');
        if (eq == std::string::npos) throw acdiag::ConfigError("--set expects key=value, got '" + item + "'");
        overrides.emplace_back(item.substr(0, eq), item.substr(eq + 1));
    }
    return overrides;
}

acdiag::pipeline::RunConfig load_config(const std::string& config_path, const std::vector<std::string>& sets,
                                        const std::string& output_dir, int workers) {
    auto overrides = split_overrides(sets);
    if (!output_dir.empty()) overrides.emplace_back("output_dir", output_dir);
    if (workers > 0) overrides.emplace_back("workers", std::to_string(workers));
    if (const char* env = std::getenv("ACDIAG_OUTPUT_DIR"); env && output_dir.empty())
        overrides.emplace_back("output_dir", env);
    const std::string text = config_path.empty() ? std::string() : read_file(config_path);
    return acdiag::pipeline::validate_config(text, overrides);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"avoided-crossing sweep diagnostics"};
    app.require_subcommand(1);
    app.set_version_flag("--version", acdiag::version);

    std::string config_path;
    std::vector<std::string> sets;
    std::string output_dir;
    int workers = 0;

    auto add_config_options = [&](CLI::App* cmd) {
        cmd->add_option("-c,--config", config_path, "key=value configuration file");
        cmd->add_option("-s,--set", sets, "override one key (key=value, repeatable)");
    };

    CLI::App* run = app.add_subcommand("run", "run a sweep pipeline and write all outputs");
    add_config_options(run);
    run->add_option("-o,--output-dir", output_dir, "output directory (overrides config and ACDIAG_OUTPUT_DIR)");
    run->add_option("-j,--workers", workers, "parallel solver workers");

    CLI::App* validate = app.add_subcommand("validate", "validate a configuration and echo the normalized form");
    add_config_options(validate);

    CLI::App* report = app.add_subcommand("report", "re-derive diagnostics from stored mode dumps");
    std::vector<std::string> dump_files;
    std::string report_output = "report.csv";
    int report_rank = 5;
    report->add_option("dumps", dump_files, "mode dump files")->required();
    report->add_option("-o,--output", report_output, "output CSV path");
    report->add_option("-r,--rank", report_rank, "Schmidt reporting rank");

    CLI11_PARSE(app, argc, argv);

    try {
        if (run->parsed()) {
            const auto config = load_config(config_path, sets, output_dir, workers);
            const auto manifest = acdiag::pipeline::run_pipeline(config);
            std::cout << "wrote " << manifest.files.size() << " files to " << manifest.directory.string() << " ("
                      << manifest.branch_count << " branches, " << manifest.crossing_count << " crossings)\n";
        } else if (validate->parsed()) {
            const auto config = load_config(config_path, sets, "", 0);
            std::cout << acdiag::pipeline::config_echo(config);
        } else if (report->parsed()) {
            std::vector<std::filesystem::path> dumps(dump_files.begin(), dump_files.end());
            acdiag::pipeline::report_from_dumps(dumps, report_output, report_rank);
            std::cout << "wrote " << report_output << '\n';
        }
    } catch (const acdiag::ConfigError& error) {
        std::cerr << "configuration error:\n";
        for (const auto& issue : error.issues()) std::cerr << "  " << issue << '\n';
        return kExitConfig;
    } catch (const std::invalid_argument& error) {
        std::cerr << "configuration error:\n  " << error.what() << '\n';
        return kExitConfig;
    } catch (const acdiag::SolverError& error) {
        std::cerr << "solver error: " << error.what() << '\n';
        return kExitSolver;
    } catch (const acdiag::IoError& error) {
        std::cerr << "i/o error: " << error.what() << '\n';
        return kExitIo;
    } catch (const std::exception& error) {
        std::cerr << "error: " << error.what() << '\n';
        return 1;
    }
    return 0;
}
