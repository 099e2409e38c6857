#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include <vector>

#include "acdiag/common.hpp"

namespace acdiag::linalg {

/// Real symmetric sparse operator. Assembled from explicit upper-triangle
/// entries; the represented matrix is always exactly symmetric.
class SparseSymOperator {
  public:
    class Builder {
      public:
        explicit Builder(Eigen::Index dim);

        /// Adds an upper-triangle entry (row <= col). Indices out of range or
        /// below the diagonal are rejected immediately; duplicates are
        /// rejected at build().
        void add(Eigen::Index row, Eigen::Index col, double value);

        SparseSymOperator build();

      private:
        Eigen::Index dim_;
        std::vector<Eigen::Triplet<double>> entries_;
    };

    Eigen::Index dim() const { return matrix_.rows(); }
    const Eigen::SparseMatrix<double>& matrix() const { return matrix_; }
    Eigen::VectorXd apply(const Eigen::VectorXd& x) const { return matrix_ * x; }

    /// Power-iteration estimate of the spectral norm (deterministic seed).
    double norm_estimate() const;

  private:
    explicit SparseSymOperator(Eigen::SparseMatrix<double> matrix) : matrix_(std::move(matrix)) {}
    Eigen::SparseMatrix<double> matrix_;
};

struct EigenPair {
    double value = 0.0;
    Eigen::VectorXd vector;   // unit 2-norm, largest-magnitude entry positive
    double residual = 0.0;    // ||A v - value v||_2
};

struct SVDResult {
    Eigen::VectorXd singular_values;  // descending, nonnegative
    Eigen::MatrixXd left;             // m x r, orthonormal columns
    Eigen::MatrixXd right;            // n x r, orthonormal columns
};

struct ShiftInvertResult {
    std::vector<EigenPair> pairs;  // sorted by |value - shift|
    bool converged = true;         // false: partial results after the restart cap
    int restarts = 0;
};

/// Full spectrum of a real symmetric matrix, eigenvalues ascending.
/// Rejects matrices that are not symmetric within 1e-12 relative.
std::vector<EigenPair> dense_sym_eig(const Eigen::MatrixXd& matrix);

/// Singular value decomposition with descending singular values and the
/// largest-magnitude entry of each left vector made positive.
SVDResult svd(const Eigen::MatrixXd& matrix);

/// The `count` eigenpairs of `op` nearest to `shift`, found by Lanczos
/// iteration on the factorized (A - shift I)^-1 with deflation restarts so
/// that degenerate eigenvalues are resolved with full multiplicity.
/// Residuals are measured against the original operator and must satisfy
/// residual <= tol * (spectral norm estimate). `max_restarts` <= 0 selects
/// the default cap of 10 * count.
ShiftInvertResult shift_invert_eig(const SparseSymOperator& op, double shift, int count,
                                   double tol = 1e-9, int max_restarts = 0);

/// Flips the vector sign so its largest-magnitude entry is positive.
/// Returns the factor (+1 or -1) that was applied.
double apply_sign_convention(Eigen::VectorXd& vector);

}  // namespace acdiag::linalg
