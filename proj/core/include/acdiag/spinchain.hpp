#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <vector>

#include "acdiag/linalg.hpp"

namespace acdiag::spinchain {

/// Open Ising chain in a tilted field: the ZZ coupling plus a field of fixed
/// magnitude whose direction interpolates between z (tilt 0) and x (tilt
/// pi/2). Bit convention: site 1 is the most significant bit of a basis
/// label; bit value 0 means sigma^z eigenvalue +1.
struct SpinChainModel {
    int sites = 8;
    double coupling = 1.0;  // J
    double field = 1.0;     // B
    double tilt = 0.0;      // theta, radians
};

enum class Parity { even, odd };

/// Reverses the low `sites` bits of a basis label (spatial reflection of the
/// open chain).
std::uint32_t reverse_bits(std::uint32_t label, int sites);

/// Basis of one bit-reversal parity sector. Each basis vector is either a
/// palindrome |s> (even sector only) or (|s> +- |reverse(s)>)/sqrt(2),
/// ordered by ascending representative label s <= reverse(s).
class SectorBasis {
  public:
    struct Element {
        std::uint32_t representative;  // s, with s <= reverse(s)
        bool palindrome;               // s == reverse(s)
    };

    int sites() const { return sites_; }
    Parity parity() const { return parity_; }
    Eigen::Index dimension() const { return static_cast<Eigen::Index>(elements_.size()); }
    const std::vector<Element>& elements() const { return elements_; }

    /// Isometry into the full 2^L space.
    Eigen::VectorXd embed(const Eigen::VectorXd& sector_vector) const;
    /// Adjoint of embed; embed-then-project is the identity on the sector.
    Eigen::VectorXd project(const Eigen::VectorXd& full_vector) const;

  private:
    friend SectorBasis bit_reversal_sector(int sites, Parity parity);
    int sites_ = 0;
    Parity parity_ = Parity::even;
    std::vector<Element> elements_;
};

SectorBasis bit_reversal_sector(int sites, Parity parity);

/// Hamiltonian on the full 2^L space. Diagonal part: ZZ bonds and the
/// longitudinal field; off-diagonal part: single-bit flips from the
/// transverse field. Rejects sites > 14 (dense diagonalization budget).
linalg::SparseSymOperator build_hamiltonian(const SpinChainModel& model);

/// Dense projection P^T H P onto a bit-reversal sector. Verifies that the
/// assembled Hamiltonian commutes with bit reversal before projecting.
Eigen::MatrixXd sector_hamiltonian(const SpinChainModel& model, const SectorBasis& basis);

/// Largest violation of H(reverse(s), reverse(t)) = H(s, t) over the stored
/// entries; zero for every model built by build_hamiltonian.
double bit_reversal_symmetry_violation(const linalg::SparseSymOperator& hamiltonian, int sites);

struct SectorEigenSet {
    double tilt = 0.0;
    Eigen::VectorXd values;   // ascending
    Eigen::MatrixXd vectors;  // orthonormal columns, sector coordinates
};

/// Full sector spectrum at every grid point; the grid must be strictly
/// increasing. Independent tilts may be diagonalized on parallel workers.
std::vector<SectorEigenSet> sweep_spectrum(const SpinChainModel& base, const SectorBasis& basis,
                                           const std::vector<double>& tilt_grid, int workers = 1);

}  // namespace acdiag::spinchain
