#include "acdiag/qinfo.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "acdiag/linalg.hpp"

namespace acdiag::qinfo {

namespace {

constexpr double kWeightFloor = -1e-12;
constexpr double kCoherenceFloor = -1e-10;
constexpr double kDegenerateGap = 1e-8;

std::vector<std::string> bit_labels(int bits) {
    std::vector<std::string> labels;
    labels.reserve(std::size_t{1} << bits);
    for (std::uint32_t s = 0; s < (std::uint32_t{1} << bits); ++s) {
        std::string label(static_cast<std::size_t>(bits), '0');
        for (int b = 0; b < bits; ++b)
            if (s & (std::uint32_t{1} << (bits - 1 - b))) label[static_cast<std::size_t>(b)] = '1';
        labels.push_back(std::move(label));
    }
    return labels;
}

std::vector<std::string> indexed_labels(const char* prefix, Eigen::Index n) {
    std::vector<std::string> labels;
    labels.reserve(static_cast<std::size_t>(n));
    for (Eigen::Index i = 0; i < n; ++i) labels.push_back(prefix + std::to_string(i));
    return labels;
}

}  // namespace

Bipartition Bipartition::grid(Eigen::Index nx, Eigen::Index ny) {
    if (nx <= 0 || ny <= 0) throw std::invalid_argument("Bipartition::grid: dimensions must be positive");
    Bipartition split;
    split.kind = Kind::grid_xy;
    split.left_dim = nx;
    split.right_dim = ny;
    split.left_labels = indexed_labels("x", nx);
    split.right_labels = indexed_labels("y", ny);
    return split;
}

Bipartition Bipartition::chain_half(int sites) {
    if (sites < 2) throw std::invalid_argument("Bipartition::chain_half: need at least 2 sites");
    const int left_sites = (sites + 1) / 2;
    const int right_sites = sites - left_sites;
    Bipartition split;
    split.kind = Kind::chain_half;
    split.left_dim = Eigen::Index{1} << left_sites;
    split.right_dim = Eigen::Index{1} << right_sites;
    split.left_labels = bit_labels(left_sites);
    split.right_labels = bit_labels(right_sites);
    return split;
}

Bipartition Bipartition::trivial(Eigen::Index dim) {
    if (dim <= 0) throw std::invalid_argument("Bipartition::trivial: dimension must be positive");
    Bipartition split;
    split.kind = Kind::grid_xy;
    split.left_dim = dim;
    split.right_dim = 1;
    split.left_labels = indexed_labels("i", dim);
    split.right_labels = {"0"};
    return split;
}

CoefficientMatrix CoefficientMatrix::from_state(const Eigen::VectorXd& state, const Bipartition& split) {
    if (state.size() != split.total()) {
        std::ostringstream msg;
        msg << "coefficient_matrix: state dimension " << state.size() << " does not equal left*right = "
            << split.left_dim << "*" << split.right_dim;
        throw std::invalid_argument(msg.str());
    }
    Eigen::MatrixXd m(split.left_dim, split.right_dim);
    for (Eigen::Index i = 0; i < split.left_dim; ++i)
        for (Eigen::Index j = 0; j < split.right_dim; ++j) m(i, j) = state[i * split.right_dim + j];
    return from_matrix(std::move(m));
}

CoefficientMatrix CoefficientMatrix::from_matrix(Eigen::MatrixXd matrix) {
    if (!matrix.allFinite()) throw std::invalid_argument("coefficient_matrix: non-finite entries");
    const double norm = matrix.norm();
    if (norm == 0.0) throw std::invalid_argument("coefficient_matrix: state has zero norm");
    matrix /= norm;
    return CoefficientMatrix(std::move(matrix));
}

CoefficientMatrix coefficient_matrix(const Eigen::VectorXd& state, const Bipartition& split) {
    return CoefficientMatrix::from_state(state, split);
}

SchmidtSpectrum schmidt_spectrum(const CoefficientMatrix& c, int rank) {
    if (rank <= 0) throw std::invalid_argument("schmidt_spectrum: rank must be positive");
    const auto decomposition = linalg::svd(c.matrix());
    SchmidtSpectrum spectrum;
    spectrum.weights = decomposition.singular_values.array().square();
    // Squared singular values of a Frobenius-normalized matrix sum to one;
    // renormalize away the last few ulps so downstream entropies are exact.
    const double total = spectrum.weights.sum();
    if (std::abs(total - 1.0) > 1e-10)
        throw SolverError("schmidt_spectrum: weights do not sum to one within 1e-10");
    spectrum.weights /= total;
    spectrum.rank = static_cast<int>(std::min<Eigen::Index>(rank, spectrum.weights.size()));
    spectrum.captured_weight = spectrum.weights.head(spectrum.rank).sum();
    return spectrum;
}

ReducedDensity reduce_left(const CoefficientMatrix& c, const Bipartition& split) {
    if (split.left_dim != c.left_dim())
        throw std::invalid_argument("reduce_left: bipartition does not match coefficient matrix");
    return ReducedDensity{c.matrix() * c.matrix().transpose(), split.left_labels};
}

ReducedDensity reduce_right(const CoefficientMatrix& c, const Bipartition& split) {
    if (split.right_dim != c.right_dim())
        throw std::invalid_argument("reduce_right: bipartition does not match coefficient matrix");
    return ReducedDensity{c.matrix().transpose() * c.matrix(), split.right_labels};
}

double entropy_from_weights(const Eigen::VectorXd& weights) {
    double entropy = 0.0;
    for (Eigen::Index i = 0; i < weights.size(); ++i) {
        double w = weights[i];
        if (w < 0.0) {
            if (w < kWeightFloor) throw std::invalid_argument("entropy_from_weights: negative weight below floor");
            w = 0.0;
        }
        if (w > 0.0) entropy -= w * std::log(w);
    }
    return entropy;
}

double von_neumann_entropy(const SchmidtSpectrum& spectrum) { return entropy_from_weights(spectrum.weights); }

double von_neumann_entropy(const ReducedDensity& rho) {
    const auto pairs = linalg::dense_sym_eig(rho.rho);
    Eigen::VectorXd weights(static_cast<Eigen::Index>(pairs.size()));
    for (std::size_t i = 0; i < pairs.size(); ++i) weights[static_cast<Eigen::Index>(i)] = pairs[i].value;
    return entropy_from_weights(weights);
}

double shannon_config_entropy(const Eigen::VectorXd& amplitudes) {
    const double total = amplitudes.squaredNorm();
    if (total == 0.0) throw std::invalid_argument("shannon_config_entropy: all-zero state");
    double entropy = 0.0;
    for (Eigen::Index i = 0; i < amplitudes.size(); ++i) {
        const double p = amplitudes[i] * amplitudes[i] / total;
        if (p > 0.0) entropy -= p * std::log(p);
    }
    return entropy;
}

double coherence_relative_entropy(const ReducedDensity& rho) {
    const double diag_entropy = entropy_from_weights(rho.rho.diagonal());
    const double spectral_entropy = von_neumann_entropy(rho);
    double coherence = diag_entropy - spectral_entropy;
    if (coherence < 0.0) {
        if (coherence < kCoherenceFloor)
            throw SolverError("coherence_relative_entropy: negative beyond the numerical floor");
        coherence = 0.0;
    }
    return coherence;
}

PurityChannels purity_channels(const ReducedDensity& rho) {
    PurityChannels channels;
    channels.diagonal = rho.rho.diagonal().squaredNorm();
    channels.off_diagonal = rho.rho.squaredNorm() - channels.diagonal;
    channels.total = channels.diagonal + channels.off_diagonal;
    const double trace_route = (rho.rho * rho.rho).trace();
    if (std::abs(trace_route - channels.total) > 1e-12 * std::max(1.0, channels.total))
        throw SolverError("purity_channels: Tr rho^2 disagrees between entry-sum and trace routes");
    return channels;
}

std::vector<SingularShift> svd_perturbation_predict(const Eigen::MatrixXd& c, const Eigen::MatrixXd& next) {
    if (c.rows() != next.rows() || c.cols() != next.cols())
        throw std::invalid_argument("svd_perturbation_predict: shape mismatch");
    const Eigen::MatrixXd step = next - c;
    const auto base = linalg::svd(c);
    const auto moved = linalg::svd(next);

    const Eigen::Index r = base.singular_values.size();
    std::vector<SingularShift> shifts(static_cast<std::size_t>(r));
    for (Eigen::Index k = 0; k < r; ++k) {
        SingularShift& s = shifts[static_cast<std::size_t>(k)];
        s.component = static_cast<int>(k);
        s.sigma = base.singular_values[k];
        s.weight = s.sigma * s.sigma;
        s.actual = moved.singular_values[k] - base.singular_values[k];
        const double gap_up = k > 0 ? base.singular_values[k - 1] - s.sigma : std::numeric_limits<double>::infinity();
        const double gap_dn = k + 1 < r ? s.sigma - base.singular_values[k + 1] : s.sigma;
        s.simple = std::min(gap_up, gap_dn) > kDegenerateGap;
        s.predicted = s.simple ? base.left.col(k).dot(step * base.right.col(k))
                               : std::numeric_limits<double>::quiet_NaN();
    }
    return shifts;
}

EntropySign entropy_sign_rule(double weight, double shift) {
    if (weight > 1.0 && weight <= 1.0 + 1e-9) weight = 1.0;  // rounding headroom
    if (weight <= 0.0 || weight > 1.0)
        throw std::invalid_argument("entropy_sign_rule: weight must lie in (0, 1]");
    const double factor = 1.0 + std::log(weight);  // vanishes at weight = 1/e
    if (shift == 0.0 || std::abs(factor) < 1e-12) return EntropySign::neutral;
    const double term = -factor * shift;
    return term < 0.0 ? EntropySign::negative : EntropySign::positive;
}

double linearized_entropy_term(double sigma, double shift) {
    const double weight = sigma * sigma;
    return -2.0 * sigma * (1.0 + std::log(weight)) * shift;
}

DiagnosticsRecord compute_diagnostics(const Eigen::VectorXd& state, const Bipartition& split, int rank) {
    const auto c = coefficient_matrix(state, split);
    const auto spectrum = schmidt_spectrum(c, rank);
    const auto rho_left = reduce_left(c, split);
    const auto rho_right = reduce_right(c, split);

    DiagnosticsRecord record;
    record.s_von_neumann = von_neumann_entropy(spectrum);
    record.s_config = shannon_config_entropy(state);
    record.s_shannon_left = entropy_from_weights(rho_left.rho.diagonal());
    record.s_shannon_right = entropy_from_weights(rho_right.rho.diagonal());
    auto clip_coherence = [](double value) {
        if (value >= 0.0) return value;
        if (value < kCoherenceFloor) throw SolverError("compute_diagnostics: coherence negative beyond the floor");
        return 0.0;
    };
    record.coherence_left = clip_coherence(record.s_shannon_left - record.s_von_neumann);
    record.coherence_right = clip_coherence(record.s_shannon_right - record.s_von_neumann);

    const auto channels = purity_channels(rho_left);
    record.purity = channels.total;
    record.purity_diag = channels.diagonal;
    record.purity_off = channels.off_diagonal;

    record.schmidt_top.fill(0.0);
    const int top = static_cast<int>(std::min<Eigen::Index>(5, spectrum.weights.size()));
    for (int k = 0; k < top; ++k) record.schmidt_top[static_cast<std::size_t>(k)] = spectrum.weights[k];
    record.captured_weight = spectrum.captured_weight;
    return record;
}

}  // namespace acdiag::qinfo
