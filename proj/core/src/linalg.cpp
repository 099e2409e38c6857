#include "acdiag/linalg.hpp"

#include <Eigen/SparseLU>

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>

namespace acdiag::linalg {

namespace {

Eigen::VectorXd random_unit_vector(Eigen::Index n, std::mt19937& rng) {
    std::normal_distribution<double> gauss(0.0, 1.0);
    Eigen::VectorXd v(n);
    for (Eigen::Index i = 0; i < n; ++i) v[i] = gauss(rng);
    const double norm = v.norm();
    return norm > 0 ? Eigen::VectorXd(v / norm) : Eigen::VectorXd::Unit(n, 0);
}

}  // namespace

double apply_sign_convention(Eigen::VectorXd& vector) {
    Eigen::Index imax = 0;
    vector.cwiseAbs().maxCoeff(&imax);
    if (vector[imax] < 0.0) {
        vector = -vector;
        return -1.0;
    }
    return 1.0;
}

SparseSymOperator::Builder::Builder(Eigen::Index dim) : dim_(dim) {
    if (dim <= 0) throw std::invalid_argument("SparseSymOperator: dimension must be positive");
}

void SparseSymOperator::Builder::add(Eigen::Index row, Eigen::Index col, double value) {
    if (row < 0 || col < 0 || row >= dim_ || col >= dim_)
        throw std::invalid_argument("SparseSymOperator: index out of range");
    if (row > col)
        throw std::invalid_argument("SparseSymOperator: entries must lie in the upper triangle (row <= col)");
    entries_.emplace_back(static_cast<int>(row), static_cast<int>(col), value);
}

SparseSymOperator SparseSymOperator::Builder::build() {
    auto sorted = entries_;
    std::sort(sorted.begin(), sorted.end(), [](const auto& a, const auto& b) {
        return a.row() != b.row() ? a.row() < b.row() : a.col() < b.col();
    });
    for (std::size_t i = 1; i < sorted.size(); ++i) {
        if (sorted[i].row() == sorted[i - 1].row() && sorted[i].col() == sorted[i - 1].col()) {
            std::ostringstream msg;
            msg << "SparseSymOperator: duplicate entry at (" << sorted[i].row() << ", " << sorted[i].col() << ")";
            throw std::invalid_argument(msg.str());
        }
    }
    std::vector<Eigen::Triplet<double>> full;
    full.reserve(2 * sorted.size());
    for (const auto& t : sorted) {
        full.push_back(t);
        if (t.row() != t.col()) full.emplace_back(t.col(), t.row(), t.value());
    }
    Eigen::SparseMatrix<double> m(dim_, dim_);
    m.setFromTriplets(full.begin(), full.end());
    m.makeCompressed();
    return SparseSymOperator(std::move(m));
}

double SparseSymOperator::norm_estimate() const {
    std::mt19937 rng(0x5ca1ab1eu);
    Eigen::VectorXd v = random_unit_vector(dim(), rng);
    double estimate = 0.0;
    for (int it = 0; it < 40; ++it) {
        Eigen::VectorXd w = matrix_ * v;
        const double norm = w.norm();
        if (norm == 0.0) return 0.0;
        estimate = norm;
        v = w / norm;
    }
    return estimate;
}

std::vector<EigenPair> dense_sym_eig(const Eigen::MatrixXd& matrix) {
    if (matrix.rows() != matrix.cols())
        throw std::invalid_argument("dense_sym_eig: matrix must be square");
    const double scale = std::max(1.0, matrix.cwiseAbs().maxCoeff());
    Eigen::Index bad_row = -1, bad_col = -1;
    double worst = 0.0;
    for (Eigen::Index j = 0; j < matrix.cols(); ++j) {
        for (Eigen::Index i = 0; i < j; ++i) {
            const double diff = std::abs(matrix(i, j) - matrix(j, i));
            if (diff > worst) {
                worst = diff;
                bad_row = i;
                bad_col = j;
            }
        }
    }
    if (worst > 1e-12 * scale) {
        std::ostringstream msg;
        msg << "dense_sym_eig: matrix not symmetric: |A(" << bad_row << "," << bad_col << ") - A(" << bad_col << ","
            << bad_row << ")| = " << worst << " exceeds 1e-12 relative tolerance";
        throw std::invalid_argument(msg.str());
    }

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(matrix);
    if (solver.info() != Eigen::Success)
        throw SolverError("dense_sym_eig: eigendecomposition failed to converge");

    std::vector<EigenPair> pairs(static_cast<std::size_t>(matrix.rows()));
    for (Eigen::Index i = 0; i < matrix.rows(); ++i) {
        EigenPair& p = pairs[static_cast<std::size_t>(i)];
        p.value = solver.eigenvalues()[i];
        p.vector = solver.eigenvectors().col(i);
        apply_sign_convention(p.vector);
        p.residual = (matrix * p.vector - p.value * p.vector).norm();
    }
    return pairs;
}

SVDResult svd(const Eigen::MatrixXd& matrix) {
    if (!matrix.allFinite())
        throw std::invalid_argument("svd: matrix contains non-finite entries");

    SVDResult out;
    // Jacobi for small problems (best accuracy), divide-and-conquer above.
    if (std::min(matrix.rows(), matrix.cols()) <= 32) {
        Eigen::JacobiSVD<Eigen::MatrixXd> solver(matrix, Eigen::ComputeThinU | Eigen::ComputeThinV);
        out.singular_values = solver.singularValues();
        out.left = solver.matrixU();
        out.right = solver.matrixV();
    } else {
        Eigen::BDCSVD<Eigen::MatrixXd> solver(matrix, Eigen::ComputeThinU | Eigen::ComputeThinV);
        out.singular_values = solver.singularValues();
        out.left = solver.matrixU();
        out.right = solver.matrixV();
    }
    for (Eigen::Index k = 0; k < out.left.cols(); ++k) {
        Eigen::Index imax = 0;
        out.left.col(k).cwiseAbs().maxCoeff(&imax);
        if (out.left(imax, k) < 0.0) {
            out.left.col(k) = -out.left.col(k);
            out.right.col(k) = -out.right.col(k);
        }
    }
    return out;
}

namespace {

struct Accepted {
    double value;
    Eigen::VectorXd vector;
    double residual;
};

// One Lanczos cycle on (A - shift I)^-1 with full reorthogonalization,
// deflated against already accepted eigenvectors.
void lanczos_cycle(const Eigen::SparseMatrix<double>& a, const Eigen::SparseLU<Eigen::SparseMatrix<double>>& lu,
                   double shift, double residual_bound, int kdim, std::mt19937& rng, std::vector<Accepted>& accepted,
                   int wanted) {
    const Eigen::Index n = a.rows();
    kdim = static_cast<int>(std::min<Eigen::Index>(kdim, n - static_cast<Eigen::Index>(accepted.size())));
    if (kdim <= 0) return;

    Eigen::MatrixXd basis(n, kdim);
    Eigen::VectorXd alphas(kdim), betas(kdim);

    auto deflate = [&](Eigen::VectorXd& w) {
        for (const auto& acc : accepted) w -= acc.vector * acc.vector.dot(w);
    };

    Eigen::VectorXd v = random_unit_vector(n, rng);
    deflate(v);
    double vnorm = v.norm();
    if (vnorm < 1e-8) return;  // accepted set already spans the sampled direction
    basis.col(0) = v / vnorm;

    int steps = kdim;
    for (int j = 0; j < kdim; ++j) {
        Eigen::VectorXd w = lu.solve(basis.col(j));
        deflate(w);
        alphas[j] = basis.col(j).dot(w);
        w -= alphas[j] * basis.col(j);
        if (j > 0) w -= betas[j - 1] * basis.col(j - 1);
        for (int pass = 0; pass < 2; ++pass) {
            for (int i = 0; i <= j; ++i) w -= basis.col(i) * basis.col(i).dot(w);
            deflate(w);
        }
        betas[j] = w.norm();
        if (betas[j] < 1e-14 * std::max(1.0, std::abs(alphas[j]))) {
            steps = j + 1;  // invariant subspace exhausted
            break;
        }
        if (j + 1 < kdim) basis.col(j + 1) = w / betas[j];
    }

    Eigen::MatrixXd tri = Eigen::MatrixXd::Zero(steps, steps);
    for (int j = 0; j < steps; ++j) {
        tri(j, j) = alphas[j];
        if (j + 1 < steps) {
            tri(j, j + 1) = betas[j];
            tri(j + 1, j) = betas[j];
        }
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> ritz(tri);
    if (ritz.info() != Eigen::Success) return;

    // Largest |mu| of the inverted operator correspond to eigenvalues of A
    // nearest the shift.
    std::vector<int> order(static_cast<std::size_t>(steps));
    for (int i = 0; i < steps; ++i) order[static_cast<std::size_t>(i)] = i;
    std::sort(order.begin(), order.end(), [&](int lhs, int rhs) {
        return std::abs(ritz.eigenvalues()[lhs]) > std::abs(ritz.eigenvalues()[rhs]);
    });

    for (int idx : order) {
        if (static_cast<int>(accepted.size()) >= wanted) break;
        const double mu = ritz.eigenvalues()[idx];
        if (std::abs(mu) < std::numeric_limits<double>::min()) break;
        const double value = shift + 1.0 / mu;
        Eigen::VectorXd x = basis.leftCols(steps) * ritz.eigenvectors().col(idx);
        deflate(x);
        const double xnorm = x.norm();
        if (xnorm < 0.5) continue;  // collapsed onto the accepted set
        x /= xnorm;
        const double residual = (a * x - value * x).norm();
        if (residual <= residual_bound) {
            accepted.push_back({value, std::move(x), residual});
        } else {
            break;  // nearer candidates must converge before farther ones count
        }
    }
}

// Distance of the `count`-th nearest accepted eigenvalue to the shift
// (infinity while fewer than `count` are known).
double quota_distance(const std::vector<Accepted>& accepted, double shift, int count) {
    if (static_cast<int>(accepted.size()) < count) return std::numeric_limits<double>::infinity();
    std::vector<double> distances;
    distances.reserve(accepted.size());
    for (const auto& acc : accepted) distances.push_back(std::abs(acc.value - shift));
    std::nth_element(distances.begin(), distances.begin() + (count - 1), distances.end());
    return distances[static_cast<std::size_t>(count - 1)];
}

}  // namespace

ShiftInvertResult shift_invert_eig(const SparseSymOperator& op, double shift, int count, double tol,
                                   int max_restarts) {
    const Eigen::Index n = op.dim();
    if (count <= 0) throw std::invalid_argument("shift_invert_eig: count must be positive");
    if (count > n) throw std::invalid_argument("shift_invert_eig: count exceeds operator dimension");
    if (tol <= 0.0) throw std::invalid_argument("shift_invert_eig: tolerance must be positive");
    if (max_restarts <= 0) max_restarts = 10 * count;

    Eigen::SparseMatrix<double> shifted = op.matrix();
    for (Eigen::Index i = 0; i < n; ++i) shifted.coeffRef(i, i) -= shift;
    shifted.makeCompressed();

    Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
    lu.compute(shifted);
    if (lu.info() != Eigen::Success) {
        std::ostringstream msg;
        msg << "shift_invert_eig: factorization of (A - " << shift
            << " I) broke down; the shift may coincide with an eigenvalue. Retry with a slightly perturbed shift.";
        throw SolverError(msg.str());
    }

    const double norm_est = std::max(op.norm_estimate(), std::abs(shift));
    const double residual_bound = tol * std::max(norm_est, 1e-300);

    std::mt19937 rng(0xacd1a6u);
    std::vector<Accepted> accepted;
    accepted.reserve(static_cast<std::size_t>(count));

    const int base_kdim = static_cast<int>(std::min<Eigen::Index>(n, std::max(40, 2 * count + 20)));
    // Degenerate eigenvalues surface one copy per deflated cycle, so the
    // quota alone cannot end the iteration: cycles continue until one brings
    // nothing new inside the current count-th distance.
    ShiftInvertResult result;
    bool stable = false;
    for (result.restarts = 0; result.restarts < max_restarts; ++result.restarts) {
        if (static_cast<int>(accepted.size()) >= count && stable) break;
        const double before = quota_distance(accepted, shift, count);
        const std::size_t known = accepted.size();
        const int kdim = base_kdim + 20 * result.restarts;
        lanczos_cycle(op.matrix(), lu, shift, residual_bound, kdim, rng, accepted,
                      static_cast<int>(known) + count);
        bool improved = accepted.size() > known && static_cast<int>(known) < count;
        for (std::size_t i = known; i < accepted.size() && !improved; ++i)
            if (std::abs(accepted[i].value - shift) < before * (1.0 - 1e-12)) improved = true;
        stable = !improved;
    }

    // Unverified quotas (restart cap hit before a cycle came back empty) are
    // reported as partial: a degenerate copy nearer than the count-th value
    // could still be undiscovered.
    result.converged = static_cast<int>(accepted.size()) >= count && stable;
    std::sort(accepted.begin(), accepted.end(), [&](const Accepted& lhs, const Accepted& rhs) {
        return std::abs(lhs.value - shift) < std::abs(rhs.value - shift);
    });
    if (static_cast<int>(accepted.size()) > count) accepted.resize(static_cast<std::size_t>(count));

    result.pairs.reserve(accepted.size());
    for (auto& acc : accepted) {
        EigenPair pair;
        pair.value = acc.value;
        pair.vector = std::move(acc.vector);
        apply_sign_convention(pair.vector);
        pair.residual = acc.residual;
        result.pairs.push_back(std::move(pair));
    }
    return result;
}

}  // namespace acdiag::linalg
