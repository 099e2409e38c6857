// Acceptance suite: one numbered criterion per function, each printing a
// single PASS/FAIL line. Run with no arguments for all criteria or pass
// criterion numbers to run a subset. Exit code is the number of failures.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <numbers>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "acdiag/billiard.hpp"
#include "acdiag/pipeline.hpp"
#include "acdiag/qinfo.hpp"
#include "acdiag/spinchain.hpp"
#include "acdiag/sweep.hpp"

using namespace acdiag;
namespace fs = std::filesystem;

namespace {

struct Check {
    bool ok = true;
    std::string detail;

    void require(bool condition, const std::string& message) {
        if (!condition && ok) {
            ok = false;
            detail = message;
        }
    }
};

std::string fmt(double v) {
    char buffer[40];
    std::snprintf(buffer, sizeof buffer, "%.6g", v);
    return buffer;
}

Eigen::VectorXd random_unit(Eigen::Index dim, std::mt19937& rng) {
    std::normal_distribution<double> gauss;
    Eigen::VectorXd v(dim);
    for (Eigen::Index i = 0; i < dim; ++i) v[i] = gauss(rng);
    return v / v.norm();
}

double lowest_square_eigenvalue(int resolution) {
    const auto grid = billiard::DomainGrid::rectangle(1.0, 1.0, resolution);
    const auto op = billiard::assemble_dirichlet_laplacian(grid);
    const auto result = linalg::shift_invert_eig(op, 0.0, 1, 1e-10);
    if (!result.converged) throw SolverError("square eigensolve did not converge");
    return result.pairs[0].value;
}

// ---- criterion 1: unit-square Laplacian accuracy and convergence order ----
Check criterion_1() {
    Check check;
    const double analytic = 2.0 * std::numbers::pi * std::numbers::pi;
    const double coarse = lowest_square_eigenvalue(100);
    check.require(std::abs(coarse - analytic) / analytic < 0.01,
                  "resolution 100 eigenvalue " + fmt(coarse) + " deviates by more than 1% from " + fmt(analytic));
    const double fine = lowest_square_eigenvalue(200);
    const double ratio = std::abs(coarse - analytic) / std::abs(fine - analytic);
    check.require(ratio > 3.0 && ratio < 5.5,
                  "error ratio " + fmt(ratio) + " after halving dx is not ~4 (order-2 convergence)");
    return check;
}

// ---- criterion 2: circular billiard versus Bessel zeros ----
Check criterion_2() {
    Check check;
    const auto grid = billiard::DomainGrid::from_geometry(billiard::BilliardGeometry::quadrupole(0.0), 150);
    const auto op = billiard::assemble_dirichlet_laplacian(grid);
    const auto result = linalg::shift_invert_eig(op, 0.0, 5, 1e-9);
    check.require(result.converged, "disc eigensolve did not converge");
    if (!result.converged) return check;
    auto pairs = result.pairs;
    std::sort(pairs.begin(), pairs.end(),
              [](const linalg::EigenPair& a, const linalg::EigenPair& b) { return a.value < b.value; });
    const double j01 = 2.4048255576957728;
    const double j11 = 3.8317059702075123;
    const double j21 = 5.1356223018406826;
    const double expected[5] = {j01 * j01, j11 * j11, j11 * j11, j21 * j21, j21 * j21};
    for (int k = 0; k < 5; ++k) {
        const double relative = std::abs(pairs[static_cast<std::size_t>(k)].value - expected[k]) / expected[k];
        check.require(relative < 0.01, "eigenvalue " + std::to_string(k) + " = " +
                                           fmt(pairs[static_cast<std::size_t>(k)].value) + " deviates " +
                                           fmt(100 * relative) + "% from " + fmt(expected[k]));
    }
    return check;
}

// ---- criterion 3: two-level backend, exact crossing and adiabatic curves ----
Check criterion_3() {
    Check check;
    const double g = 0.01;
    const fs::path dir = fs::temp_directory_path() / "acdiag_acceptance_two_level";
    fs::remove_all(dir);
    std::ostringstream text;
    text << "backend = two_level_test\nparam_start = -0.5\nparam_stop = 0.5\nparam_steps = 101\n"
         << "gap_coupling = " << g << "\nrefine = true\noutput_dir = " << dir.string() << '\n';
    const auto config = pipeline::validate_config(text.str());
    const auto manifest = pipeline::run_pipeline(config);
    check.require(manifest.crossing_count == 1,
                  "expected exactly one crossing, found " + std::to_string(manifest.crossing_count));

    std::ifstream crossings(dir / "crossings.csv");
    std::string line;
    std::getline(crossings, line);  // header
    if (std::getline(crossings, line)) {
        std::stringstream fields(line);
        std::string field;
        std::vector<double> columns;
        for (int c = 0; c < 6 && std::getline(fields, field, ','); ++c) columns.push_back(std::stod(field));
        check.require(std::abs(columns[2]) <= 1e-6, "crossing location " + fmt(columns[2]) + " not within 1e-6 of 0");
        check.require(std::abs(columns[3] - 2 * g) <= 1e-6, "min gap " + fmt(columns[3]) + " not 0.02 +- 1e-6");
    }

    // tracked branches reproduce +-sqrt(detuning^2 + g^2) to 1e-10
    std::ifstream spectrum(dir / "spectrum.csv");
    std::getline(spectrum, line);
    double worst = 0.0;
    while (std::getline(spectrum, line)) {
        std::stringstream fields(line);
        std::string parameter, branch, value;
        std::getline(fields, parameter, ',');
        std::getline(fields, branch, ',');
        std::getline(fields, value, ',');
        const double detuning = std::stod(parameter);
        const double expected = std::hypot(detuning, g) * (branch == "0" ? -1.0 : 1.0);
        worst = std::max(worst, std::abs(std::stod(value) - expected));
    }
    check.require(worst <= 1e-10, "tracked eigenvalue deviates " + fmt(worst) + " from the adiabatic curves");
    fs::remove_all(dir);
    return check;
}

// ---- criterion 4: bit-reversal sector dimension and spectrum union ----
Check criterion_4() {
    Check check;
    check.require(spinchain::bit_reversal_sector(8, spinchain::Parity::even).dimension() == 136,
                  "even sector dimension at L=8 is not 136");
    for (int sites = 2; sites <= 10; ++sites) {
        spinchain::SpinChainModel model;
        model.sites = sites;
        model.tilt = 0.45;
        const auto full = linalg::dense_sym_eig(Eigen::MatrixXd(spinchain::build_hamiltonian(model).matrix()));
        std::vector<double> sector_values;
        for (const auto parity : {spinchain::Parity::even, spinchain::Parity::odd}) {
            const auto basis = spinchain::bit_reversal_sector(sites, parity);
            if (basis.dimension() == 0) continue;
            for (const auto& pair : linalg::dense_sym_eig(spinchain::sector_hamiltonian(model, basis)))
                sector_values.push_back(pair.value);
        }
        std::sort(sector_values.begin(), sector_values.end());
        if (sector_values.size() != full.size()) {
            check.require(false, "sector dimensions do not add up at L=" + std::to_string(sites));
            continue;
        }
        double worst = 0.0;
        for (std::size_t k = 0; k < full.size(); ++k)
            worst = std::max(worst, std::abs(sector_values[k] - full[k].value));
        check.require(worst <= 1e-8,
                      "spectrum union mismatch " + fmt(worst) + " at L=" + std::to_string(sites));
    }
    return check;
}

struct SweepArtifacts {
    fs::path dir;
    std::vector<sweep::AvoidedCrossing> crossings;
    // per branch: parameter, S_config, S_vN columns of the diagnostics CSV
    std::map<int, std::vector<std::array<double, 3>>> diagnostics;
};

SweepArtifacts run_ising_window(const std::string& name, double start, double stop) {
    SweepArtifacts artifacts;
    artifacts.dir = fs::temp_directory_path() / ("acdiag_acceptance_" + name);
    fs::remove_all(artifacts.dir);
    std::ostringstream text;
    text << "backend = ising\nparam_start = " << start << "\nparam_stop = " << stop << "\nparam_steps = 61\n"
         << "workers = 2\noutput_dir = " << artifacts.dir.string() << '\n';
    const auto config = pipeline::validate_config(text.str());
    (void)pipeline::run_pipeline(config);

    std::ifstream crossings(artifacts.dir / "crossings.csv");
    std::string line;
    std::getline(crossings, line);
    while (std::getline(crossings, line)) {
        std::stringstream fields(line);
        std::string field;
        std::vector<std::string> columns;
        while (std::getline(fields, field, ',')) columns.push_back(field);
        sweep::AvoidedCrossing crossing;
        crossing.branch_low = std::stoi(columns[0]);
        crossing.branch_high = std::stoi(columns[1]);
        crossing.location = std::stod(columns[2]);
        crossing.min_gap = std::stod(columns[3]);
        crossing.window_lo = std::stod(columns[4]);
        crossing.window_hi = std::stod(columns[5]);
        artifacts.crossings.push_back(crossing);
    }

    for (int branch = 0; branch < 136; ++branch) {
        char file[64];
        std::snprintf(file, sizeof file, "diagnostics_branch_%03d.csv", branch);
        std::ifstream in(artifacts.dir / file);
        if (!in) continue;
        std::getline(in, line);
        auto& rows = artifacts.diagnostics[branch];
        while (std::getline(in, line)) {
            std::stringstream fields(line);
            std::string field;
            std::vector<double> columns;
            while (std::getline(fields, field, ',')) columns.push_back(std::stod(field));
            rows.push_back({columns[0], columns[3], columns[2]});  // parameter, S_config, S_vN
        }
    }
    return artifacts;
}

// interior local maximum of column `col` inside [lo, hi]
bool has_local_peak(const std::vector<std::array<double, 3>>& rows, int col, double lo, double hi) {
    for (std::size_t t = 1; t + 1 < rows.size(); ++t) {
        if (rows[t][0] < lo || rows[t][0] > hi) continue;
        const double prev = rows[t - 1][static_cast<std::size_t>(col)];
        const double cur = rows[t][static_cast<std::size_t>(col)];
        const double next = rows[t + 1][static_cast<std::size_t>(col)];
        if (cur >= prev && cur >= next && (cur > prev || cur > next)) return true;
    }
    return false;
}

bool has_local_extremum(const std::vector<std::array<double, 3>>& rows, int col, double lo, double hi,
                        double* value_at_extremum) {
    for (std::size_t t = 1; t + 1 < rows.size(); ++t) {
        if (rows[t][0] < lo || rows[t][0] > hi) continue;
        const double prev = rows[t - 1][static_cast<std::size_t>(col)];
        const double cur = rows[t][static_cast<std::size_t>(col)];
        const double next = rows[t + 1][static_cast<std::size_t>(col)];
        const bool peak = cur >= prev && cur >= next && (cur > prev || cur > next);
        const bool dip = cur <= prev && cur <= next && (cur < prev || cur < next);
        if (peak || dip) {
            *value_at_extremum = cur;
            return true;
        }
    }
    return false;
}

// ---- criterion 5: soft-chaos window, crossing near 0.45 with S_config peak ----
Check criterion_5() {
    Check check;
    const auto artifacts = run_ising_window("soft", 0.3, 0.6);
    bool found = false;
    for (const auto& crossing : artifacts.crossings) {
        const bool near = std::abs(crossing.location - 0.45) <= 0.05 ||
                          (crossing.window_lo <= 0.45 && 0.45 <= crossing.window_hi);
        if (!near) continue;
        for (const int branch : {crossing.branch_low, crossing.branch_high}) {
            const auto it = artifacts.diagnostics.find(branch);
            if (it == artifacts.diagnostics.end()) continue;
            if (has_local_peak(it->second, 1, crossing.window_lo, crossing.window_hi)) found = true;
        }
        if (found) break;
    }
    check.require(found, "no avoided crossing near 0.45 with an S_config peak inside its hybridization window");
    fs::remove_all(artifacts.dir);
    return check;
}

// ---- criterion 6: strong-chaos window, S_vN extremum on an order-unity background ----
Check criterion_6() {
    Check check;
    const auto artifacts = run_ising_window("strong", 1.4, 1.7);
    bool found = false;
    for (const auto& crossing : artifacts.crossings) {
        for (const int branch : {crossing.branch_low, crossing.branch_high}) {
            const auto it = artifacts.diagnostics.find(branch);
            if (it == artifacts.diagnostics.end()) continue;
            double value = 0.0;
            if (has_local_extremum(it->second, 2, crossing.window_lo, crossing.window_hi, &value) && value >= 0.5)
                found = true;
        }
        if (found) break;
    }
    check.require(found, "no crossing with an S_vN extremum >= 0.5 nats inside its hybridization window");
    fs::remove_all(artifacts.dir);
    return check;
}

// ---- criterion 7: entropy consistency and spectrum sharing, 1000 random states ----
Check criterion_7() {
    Check check;
    std::mt19937 rng(1007);
    for (int trial = 0; trial < 1000; ++trial) {
        const Eigen::Index left = 2 + static_cast<Eigen::Index>(rng() % 15);
        const Eigen::Index right = 2 + static_cast<Eigen::Index>(rng() % 15);
        const auto split = qinfo::Bipartition::grid(left, right);
        const Eigen::VectorXd psi = random_unit(left * right, rng);
        const auto c = qinfo::coefficient_matrix(psi, split);
        const auto schmidt_entropy = qinfo::von_neumann_entropy(qinfo::schmidt_spectrum(c));
        const auto rho_left = qinfo::reduce_left(c, split);
        const auto rho_right = qinfo::reduce_right(c, split);
        const double left_entropy = qinfo::von_neumann_entropy(rho_left);
        check.require(std::abs(schmidt_entropy - left_entropy) <= 1e-10,
                      "Schmidt vs reduced-state entropy differ by " + fmt(std::abs(schmidt_entropy - left_entropy)));

        const auto lp = linalg::dense_sym_eig(rho_left.rho);
        const auto rp = linalg::dense_sym_eig(rho_right.rho);
        const Eigen::Index shared = std::min(left, right);
        for (Eigen::Index k = 0; k < shared; ++k) {
            const double wl = lp[static_cast<std::size_t>(left - 1 - k)].value;
            const double wr = rp[static_cast<std::size_t>(right - 1 - k)].value;
            check.require(std::abs(wl - wr) <= 1e-10, "reduced spectra differ by " + fmt(std::abs(wl - wr)));
        }
        if (!check.ok) break;
    }
    return check;
}

// ---- criterion 8: coherence nonnegativity and the diagonal-iff-zero property ----
Check criterion_8() {
    Check check;
    std::mt19937 rng(1008);
    std::normal_distribution<double> gauss;
    std::uniform_real_distribution<double> uniform(0.1, 1.0);
    for (int trial = 0; trial < 1000; ++trial) {
        const Eigen::Index d = 2 + static_cast<Eigen::Index>(rng() % 15);
        if (trial % 2 == 0) {
            // generic mixed state: Wishart, generically non-diagonal
            Eigen::MatrixXd g(d, d);
            for (Eigen::Index i = 0; i < d; ++i)
                for (Eigen::Index j = 0; j < d; ++j) g(i, j) = gauss(rng);
            Eigen::MatrixXd rho = g * g.transpose();
            rho /= rho.trace();
            const double off_mass = (rho - Eigen::MatrixXd(rho.diagonal().asDiagonal())).norm();
            const double coherence = qinfo::coherence_relative_entropy({rho, {}});
            check.require(coherence >= 0.0, "coherence negative: " + fmt(coherence));
            if (off_mass > 1e-6)
                check.require(coherence > 1e-10,
                              "coherence vanished on a non-diagonal state (off mass " + fmt(off_mass) + ")");
        } else {
            Eigen::VectorXd populations(d);
            for (Eigen::Index i = 0; i < d; ++i) populations[i] = uniform(rng);
            populations /= populations.sum();
            const double coherence =
                qinfo::coherence_relative_entropy({Eigen::MatrixXd(populations.asDiagonal()), {}});
            check.require(std::abs(coherence) <= 1e-10, "diagonal state has coherence " + fmt(coherence));
        }
        if (!check.ok) break;
    }
    return check;
}

// ---- criterion 9: purity decomposition, bounds, and the product-state law ----
Check criterion_9() {
    Check check;
    std::mt19937 rng(1009);
    for (int trial = 0; trial < 1000; ++trial) {
        const Eigen::Index left = 2 + static_cast<Eigen::Index>(rng() % 15);
        const Eigen::Index right = 2 + static_cast<Eigen::Index>(rng() % 15);
        const auto split = qinfo::Bipartition::grid(left, right);

        Eigen::VectorXd psi;
        const bool product = trial % 2 == 0;
        if (product) {
            const Eigen::VectorXd u = random_unit(left, rng);
            const Eigen::VectorXd v = random_unit(right, rng);
            psi.resize(left * right);
            for (Eigen::Index i = 0; i < left; ++i)
                for (Eigen::Index j = 0; j < right; ++j) psi[i * right + j] = u[i] * v[j];
        } else {
            psi = random_unit(left * right, rng);
        }

        const auto c = qinfo::coefficient_matrix(psi, split);
        const auto channels = qinfo::purity_channels(qinfo::reduce_left(c, split));
        check.require(channels.total == channels.diagonal + channels.off_diagonal,
                      "purity decomposition is not exact");
        const double d = static_cast<double>(std::min(left, right));
        check.require(channels.total >= 1.0 / d - 1e-12 && channels.total <= 1.0 + 1e-12,
                      "purity " + fmt(channels.total) + " outside [1/d, 1]");
        if (product)
            check.require(std::abs(channels.total - 1.0) <= 1e-10,
                          "product state purity " + fmt(channels.total) + " not 1 within 1e-10");
        else
            check.require(channels.total < 1.0 - 1e-10,
                          "generic random state came out as a product (purity " + fmt(channels.total) + ")");
        if (!check.ok) break;
    }
    return check;
}

// ---- criterion 10: SVD perturbation scaling and the sign rule ----
Check criterion_10() {
    Check check;
    std::mt19937 rng(1010);
    std::normal_distribution<double> gauss;
    const double scales[3] = {1e-3, 5e-4, 2.5e-4};
    int ratio_checks = 0, sign_checks = 0;

    for (int trial = 0; trial < 40 && check.ok; ++trial) {
        const Eigen::Index m = 4 + static_cast<Eigen::Index>(rng() % 5);
        const Eigen::Index n = 4 + static_cast<Eigen::Index>(rng() % 5);
        Eigen::MatrixXd c(m, n), direction(m, n);
        for (Eigen::Index i = 0; i < m; ++i)
            for (Eigen::Index j = 0; j < n; ++j) {
                c(i, j) = gauss(rng);
                direction(i, j) = gauss(rng);
            }
        c /= c.norm();
        direction /= direction.norm();

        const auto base = linalg::svd(c);
        const Eigen::Index r = base.singular_values.size();
        auto gap_of = [&](Eigen::Index k) {
            const double up = k > 0 ? base.singular_values[k - 1] - base.singular_values[k] : 1e300;
            const double dn = k + 1 < r ? base.singular_values[k] - base.singular_values[k + 1]
                                        : base.singular_values[k];
            return std::min(up, dn);
        };

        std::vector<std::vector<qinfo::SingularShift>> shifts;
        for (const double scale : scales)
            shifts.push_back(qinfo::svd_perturbation_predict(c, c + scale * direction));

        for (Eigen::Index k = 0; k < r; ++k) {
            // stay in the first-order regime: well-separated singular values
            if (gap_of(k) < 0.05) continue;
            const double e0 = std::abs(shifts[0][static_cast<std::size_t>(k)].predicted -
                                       shifts[0][static_cast<std::size_t>(k)].actual);
            const double e1 = std::abs(shifts[1][static_cast<std::size_t>(k)].predicted -
                                       shifts[1][static_cast<std::size_t>(k)].actual);
            const double e2 = std::abs(shifts[2][static_cast<std::size_t>(k)].predicted -
                                       shifts[2][static_cast<std::size_t>(k)].actual);
            if (e0 > 1e-11 && e1 > 1e-12) {
                const double r1 = e0 / e1;
                const double r2 = e1 / e2;
                check.require(r1 > 3.0 && r1 < 5.0, "halving ratio " + fmt(r1) + " outside [3, 5]");
                check.require(r2 > 3.0 && r2 < 5.0, "second halving ratio " + fmt(r2) + " outside [3, 5]");
                ++ratio_checks;
            }

            // sign rule against the actual linearized entropy contribution
            const auto& shift = shifts[0][static_cast<std::size_t>(k)];
            const double weight = shift.weight;
            if (std::abs(weight - std::exp(-1.0)) <= 0.02) continue;
            if (std::abs(shift.actual) <= 5.0 * e0) continue;  // sign unresolved at first order
            const double contribution = qinfo::linearized_entropy_term(shift.sigma, shift.actual);
            const auto sign = qinfo::entropy_sign_rule(weight, shift.predicted);
            if (contribution > 0.0)
                check.require(sign == qinfo::EntropySign::positive,
                              "sign rule predicts '-' where the contribution is positive");
            else if (contribution < 0.0)
                check.require(sign == qinfo::EntropySign::negative,
                              "sign rule predicts '+' where the contribution is negative");
            ++sign_checks;
        }
    }
    check.require(ratio_checks >= 100, "too few resolvable components for the scaling check");
    check.require(sign_checks >= 100, "too few resolvable components for the sign-rule check");
    return check;
}

// ---- criterion 11: byte-identical reruns of an identical configuration ----
Check criterion_11() {
    Check check;
    const fs::path dir = fs::temp_directory_path() / "acdiag_acceptance_determinism";
    std::ostringstream text;
    text << "backend = ising\nparam_start = 0.42\nparam_stop = 0.48\nparam_steps = 7\n"
         << "window_lo = 44\nwindow_hi = 48\nworkers = 1\ndump_parameters = 0.45\n"
         << "output_dir = " << dir.string() << '\n';
    const auto config = pipeline::validate_config(text.str());

    auto snapshot = [&] {
        std::map<std::string, std::string> bytes;
        for (const auto& entry : fs::recursive_directory_iterator(dir)) {
            if (!entry.is_regular_file()) continue;
            std::ifstream in(entry.path(), std::ios::binary);
            std::ostringstream buffer;
            buffer << in.rdbuf();
            bytes[fs::relative(entry.path(), dir).generic_string()] = buffer.str();
        }
        return bytes;
    };

    fs::remove_all(dir);
    (void)pipeline::run_pipeline(config);
    const auto first = snapshot();
    fs::remove_all(dir);
    (void)pipeline::run_pipeline(config);
    const auto second = snapshot();

    check.require(first.size() == second.size(), "rerun produced a different file set");
    for (const auto& [name, bytes] : first) {
        const auto it = second.find(name);
        check.require(it != second.end() && it->second == bytes, "rerun changed the bytes of " + name);
    }
    fs::remove_all(dir);
    return check;
}

struct Criterion {
    int number;
    const char* label;
    std::function<Check()> run;
};

const Criterion kCriteria[] = {
    {1, "unit-square Dirichlet Laplacian: 1% accuracy, order-2 convergence", criterion_1},
    {2, "circular billiard: three lowest levels within 1% of Bessel zeros", criterion_2},
    {3, "two-level backend: crossing at 0 +- 1e-6, gap 0.02 +- 1e-6, adiabatic curves 1e-10", criterion_3},
    {4, "bit-reversal sectors: dimension 136 at L=8, spectrum union to 1e-8 for L<=10", criterion_4},
    {5, "soft-chaos Ising window: crossing near 0.45 with an S_config peak", criterion_5},
    {6, "strong-chaos Ising window: S_vN extremum on an order-unity background", criterion_6},
    {7, "entropy consistency and reduced-spectrum sharing over 1000 random states", criterion_7},
    {8, "relative-entropy coherence: nonnegative, zero iff diagonal", criterion_8},
    {9, "purity channels: exact decomposition, bounds, product-state law", criterion_9},
    {10, "SVD perturbation: quadratic error scaling and the 1/e sign rule", criterion_10},
    {11, "determinism: identical configs give byte-identical outputs", criterion_11},
};

}  // namespace

int main(int argc, char** argv) {
    std::set<int> selected;
    for (int i = 1; i < argc; ++i) selected.insert(std::atoi(argv[i]));

    int failures = 0;
    for (const auto& criterion : kCriteria) {
        if (!selected.empty() && !selected.count(criterion.number)) continue;
        const auto start = std::chrono::steady_clock::now();
        Check check;
        try {
            check = criterion.run();
        } catch (const std::exception& error) {
            check.ok = false;
            check.detail = std::string("exception: ") + error.what();
        }
        const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        std::printf("%s  criterion %2d (%5.1fs): %s%s%s\n", check.ok ? "PASS" : "FAIL", criterion.number, seconds,
                    criterion.label, check.ok ? "" : " -- ", check.detail.c_str());
        std::fflush(stdout);
        if (!check.ok) ++failures;
    }
    return failures;
}
