#include "acdiag/spinchain.hpp"

#include <cmath>
#include <stdexcept>

namespace acdiag::spinchain {

namespace {

constexpr int kMaxSites = 14;
constexpr double kInvSqrt2 = 0.70710678118654752440;

void validate(const SpinChainModel& model) {
    if (model.sites < 2) throw std::invalid_argument("spin chain: need at least 2 sites");
    if (model.sites > kMaxSites)
        throw std::invalid_argument("spin chain: sites > 14 exceeds the dense diagonalization budget");
}

// sigma^z eigenvalue at 1-based site n of label s.
inline double z_value(std::uint32_t label, int sites, int site) {
    return (label >> (sites - site)) & 1u ? -1.0 : 1.0;
}

}  // namespace

std::uint32_t reverse_bits(std::uint32_t label, int sites) {
    std::uint32_t reversed = 0;
    for (int b = 0; b < sites; ++b) {
        reversed <<= 1;
        reversed |= (label >> b) & 1u;
    }
    return reversed;
}

SectorBasis bit_reversal_sector(int sites, Parity parity) {
    if (sites < 2) throw std::invalid_argument("bit_reversal_sector: need at least 2 sites");
    if (sites > kMaxSites) throw std::invalid_argument("bit_reversal_sector: sites > 14 unsupported");
    SectorBasis basis;
    basis.sites_ = sites;
    basis.parity_ = parity;
    const std::uint32_t space = std::uint32_t{1} << sites;
    for (std::uint32_t s = 0; s < space; ++s) {
        const std::uint32_t r = reverse_bits(s, sites);
        if (s > r) continue;
        if (s == r) {
            if (parity == Parity::even) basis.elements_.push_back({s, true});
        } else {
            basis.elements_.push_back({s, false});
        }
    }
    return basis;
}

Eigen::VectorXd SectorBasis::embed(const Eigen::VectorXd& sector_vector) const {
    if (sector_vector.size() != dimension())
        throw std::invalid_argument("SectorBasis::embed: dimension mismatch");
    Eigen::VectorXd full = Eigen::VectorXd::Zero(Eigen::Index{1} << sites_);
    const double odd_sign = parity_ == Parity::even ? 1.0 : -1.0;
    for (Eigen::Index j = 0; j < dimension(); ++j) {
        const Element& e = elements_[static_cast<std::size_t>(j)];
        if (e.palindrome) {
            full[e.representative] += sector_vector[j];
        } else {
            full[e.representative] += kInvSqrt2 * sector_vector[j];
            full[reverse_bits(e.representative, sites_)] += odd_sign * kInvSqrt2 * sector_vector[j];
        }
    }
    return full;
}

Eigen::VectorXd SectorBasis::project(const Eigen::VectorXd& full_vector) const {
    if (full_vector.size() != (Eigen::Index{1} << sites_))
        throw std::invalid_argument("SectorBasis::project: dimension mismatch");
    Eigen::VectorXd sector(dimension());
    const double odd_sign = parity_ == Parity::even ? 1.0 : -1.0;
    for (Eigen::Index j = 0; j < dimension(); ++j) {
        const Element& e = elements_[static_cast<std::size_t>(j)];
        if (e.palindrome) {
            sector[j] = full_vector[e.representative];
        } else {
            sector[j] = kInvSqrt2 * (full_vector[e.representative] +
                                     odd_sign * full_vector[reverse_bits(e.representative, sites_)]);
        }
    }
    return sector;
}

linalg::SparseSymOperator build_hamiltonian(const SpinChainModel& model) {
    validate(model);
    const int sites = model.sites;
    const std::uint32_t space = std::uint32_t{1} << sites;
    const double sin_t = std::sin(model.tilt);
    const double cos_t = std::cos(model.tilt);

    linalg::SparseSymOperator::Builder builder(space);
    for (std::uint32_t s = 0; s < space; ++s) {
        double diagonal = 0.0;
        for (int n = 1; n < sites; ++n) diagonal += model.coupling * z_value(s, sites, n) * z_value(s, sites, n + 1);
        for (int n = 1; n <= sites; ++n) diagonal += model.field * cos_t * z_value(s, sites, n);
        builder.add(s, s, diagonal);
        // X at each site flips one bit; emit each unordered pair once.
        for (int n = 1; n <= sites; ++n) {
            const std::uint32_t mask = std::uint32_t{1} << (sites - n);
            if ((s & mask) == 0u) builder.add(s, s | mask, model.field * sin_t);
        }
    }
    return builder.build();
}

double bit_reversal_symmetry_violation(const linalg::SparseSymOperator& hamiltonian, int sites) {
    const auto& m = hamiltonian.matrix();
    if (m.rows() != (Eigen::Index{1} << sites))
        throw std::invalid_argument("bit_reversal_symmetry_violation: dimension is not 2^sites");
    double worst = 0.0;
    for (int col = 0; col < m.outerSize(); ++col) {
        for (Eigen::SparseMatrix<double>::InnerIterator it(m, col); it; ++it) {
            const auto rr = static_cast<Eigen::Index>(reverse_bits(static_cast<std::uint32_t>(it.row()), sites));
            const auto rc = static_cast<Eigen::Index>(reverse_bits(static_cast<std::uint32_t>(it.col()), sites));
            worst = std::max(worst, std::abs(it.value() - m.coeff(rr, rc)));
        }
    }
    return worst;
}

Eigen::MatrixXd sector_hamiltonian(const SpinChainModel& model, const SectorBasis& basis) {
    validate(model);
    if (basis.sites() != model.sites)
        throw std::invalid_argument("sector_hamiltonian: basis and model disagree on sites");
    const auto hamiltonian = build_hamiltonian(model);
    if (bit_reversal_symmetry_violation(hamiltonian, model.sites) > 1e-10)
        throw SolverError("sector_hamiltonian: Hamiltonian does not commute with bit reversal");

    const Eigen::Index dim = basis.dimension();
    const auto& m = hamiltonian.matrix();
    const double odd_sign = basis.parity() == Parity::even ? 1.0 : -1.0;
    Eigen::VectorXd full = Eigen::VectorXd::Zero(m.rows());

    // Each sector basis vector has at most two full-space components, so
    // H * (P e_j) is a sum of at most two sparse columns.
    Eigen::MatrixXd sector(dim, dim);
    for (Eigen::Index j = 0; j < dim; ++j) {
        const auto& e = basis.elements()[static_cast<std::size_t>(j)];
        std::vector<Eigen::Index> touched;
        auto accumulate = [&](std::uint32_t label, double amplitude) {
            for (Eigen::SparseMatrix<double>::InnerIterator it(m, static_cast<Eigen::Index>(label)); it; ++it) {
                if (full[it.row()] == 0.0) touched.push_back(it.row());
                full[it.row()] += amplitude * it.value();
            }
        };
        if (e.palindrome) {
            accumulate(e.representative, 1.0);
        } else {
            accumulate(e.representative, kInvSqrt2);
            accumulate(reverse_bits(e.representative, model.sites), odd_sign * kInvSqrt2);
        }
        sector.col(j) = basis.project(full);
        for (Eigen::Index idx : touched) full[idx] = 0.0;
    }
    // Symmetrize away factor-order rounding.
    sector = 0.5 * (sector + sector.transpose()).eval();
    return sector;
}

std::vector<SectorEigenSet> sweep_spectrum(const SpinChainModel& base, const SectorBasis& basis,
                                           const std::vector<double>& tilt_grid, int workers) {
    for (std::size_t i = 1; i < tilt_grid.size(); ++i)
        if (tilt_grid[i] <= tilt_grid[i - 1])
            throw std::invalid_argument("sweep_spectrum: tilt grid must be strictly increasing");

    std::vector<SectorEigenSet> sets(tilt_grid.size());
    parallel_for(tilt_grid.size(), workers, [&](std::size_t i) {
        SpinChainModel model = base;
        model.tilt = tilt_grid[i];
        const auto pairs = linalg::dense_sym_eig(sector_hamiltonian(model, basis));
        SectorEigenSet& set = sets[i];
        set.tilt = model.tilt;
        set.values.resize(static_cast<Eigen::Index>(pairs.size()));
        set.vectors.resize(basis.dimension(), static_cast<Eigen::Index>(pairs.size()));
        for (std::size_t k = 0; k < pairs.size(); ++k) {
            set.values[static_cast<Eigen::Index>(k)] = pairs[k].value;
            set.vectors.col(static_cast<Eigen::Index>(k)) = pairs[k].vector;
        }
    });
    return sets;
}

}  // namespace acdiag::spinchain
