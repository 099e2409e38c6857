#pragma once

#include <Eigen/Dense>

#include <array>
#include <string>
#include <vector>

#include "acdiag/common.hpp"

namespace acdiag::qinfo {

/// Declared tensor-product structure of a pure state. Entanglement and the
/// basis-resolved measures below are defined only relative to one of these.
struct Bipartition {
    enum class Kind { grid_xy, chain_half };

    Kind kind = Kind::grid_xy;
    Eigen::Index left_dim = 0;
    Eigen::Index right_dim = 0;
    std::vector<std::string> left_labels;
    std::vector<std::string> right_labels;

    Eigen::Index total() const { return left_dim * right_dim; }

    /// x (rows) vs y (columns) cut of a field stored x-major on an nx * ny box.
    static Bipartition grid(Eigen::Index nx, Eigen::Index ny);

    /// First ceil(L/2) sites vs the rest, site 1 being the most significant bit.
    static Bipartition chain_half(int sites);

    /// Degenerate left-only cut (right dimension 1); used by backends whose
    /// state space has no meaningful product structure.
    static Bipartition trivial(Eigen::Index dim);
};

/// Frobenius-normalized coefficient matrix of a pure state: row index runs
/// over the left factor, column index over the right factor.
class CoefficientMatrix {
  public:
    static CoefficientMatrix from_state(const Eigen::VectorXd& state, const Bipartition& split);
    static CoefficientMatrix from_matrix(Eigen::MatrixXd matrix);

    const Eigen::MatrixXd& matrix() const { return matrix_; }
    Eigen::Index left_dim() const { return matrix_.rows(); }
    Eigen::Index right_dim() const { return matrix_.cols(); }

  private:
    explicit CoefficientMatrix(Eigen::MatrixXd m) : matrix_(std::move(m)) {}
    Eigen::MatrixXd matrix_;
};

/// Schmidt weights (squared singular values), descending, summing to one.
struct SchmidtSpectrum {
    Eigen::VectorXd weights;        // full set, descending
    int rank = 0;                   // reporting truncation
    double captured_weight = 0.0;   // sum of the leading `rank` weights
};

/// Hermitian, PSD, unit-trace reduced state with its dephasing-basis labels.
struct ReducedDensity {
    Eigen::MatrixXd rho;
    std::vector<std::string> labels;
};

struct PurityChannels {
    double total = 0.0;         // Tr rho^2
    double diagonal = 0.0;      // sum_i rho(i,i)^2
    double off_diagonal = 0.0;  // sum_{i != j} rho(i,j)^2
};

/// Per-component first-order singular value response to C -> C + E.
struct SingularShift {
    int component = 0;
    double sigma = 0.0;       // singular value of the unperturbed matrix
    double weight = 0.0;      // sigma^2
    double predicted = 0.0;   // u_k^T E v_k  (NaN when not simple)
    double actual = 0.0;      // sigma'_k - sigma_k from a fresh decomposition
    bool simple = true;       // false when the singular value gap is below 1e-8
};

enum class EntropySign { negative, positive, neutral };

CoefficientMatrix coefficient_matrix(const Eigen::VectorXd& state, const Bipartition& split);
SchmidtSpectrum schmidt_spectrum(const CoefficientMatrix& c, int rank = 5);

ReducedDensity reduce_left(const CoefficientMatrix& c, const Bipartition& split);   // C C^T
ReducedDensity reduce_right(const CoefficientMatrix& c, const Bipartition& split);  // C^T C

/// -sum_k w_k ln w_k with the 0 ln 0 = 0 convention. Weights within
/// [-1e-12, 0) are clipped to zero; anything lower is rejected.
double entropy_from_weights(const Eigen::VectorXd& weights);
double von_neumann_entropy(const SchmidtSpectrum& spectrum);
double von_neumann_entropy(const ReducedDensity& rho);

/// Shannon entropy of p_i = |psi_i|^2 / sum_j |psi_j|^2 (nats).
double shannon_config_entropy(const Eigen::VectorXd& amplitudes);

/// Relative entropy of coherence in the stored basis: the Shannon entropy of
/// the diagonal minus the spectral entropy, clipped at zero within -1e-10.
double coherence_relative_entropy(const ReducedDensity& rho);

PurityChannels purity_channels(const ReducedDensity& rho);

/// First-order prediction of each singular value shift between two equally
/// shaped matrices, next = c + E, against the exact recomputed shift.
std::vector<SingularShift> svd_perturbation_predict(const Eigen::MatrixXd& c, const Eigen::MatrixXd& next);

/// Sign of the linearized entropy contribution of one Schmidt component:
/// the weight factor -(1 + ln w) flips at w = 1/e.
EntropySign entropy_sign_rule(double weight, double shift);

/// The contribution itself: -2 sigma (1 + ln sigma^2) * shift.
double linearized_entropy_term(double sigma, double shift);

/// Per (state, parameter) diagnostics bundle. Purity channels are taken in
/// the left-side basis; total purity is side independent for pure states.
struct DiagnosticsRecord {
    double s_von_neumann = 0.0;
    double s_config = 0.0;
    double s_shannon_left = 0.0;
    double s_shannon_right = 0.0;
    double coherence_left = 0.0;
    double coherence_right = 0.0;
    double purity = 0.0;
    double purity_diag = 0.0;
    double purity_off = 0.0;
    std::array<double, 5> schmidt_top{};  // zero padded
    double captured_weight = 0.0;
};

DiagnosticsRecord compute_diagnostics(const Eigen::VectorXd& state, const Bipartition& split, int rank = 5);

}  // namespace acdiag::qinfo
