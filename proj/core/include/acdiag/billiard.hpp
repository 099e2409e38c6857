#pragma once

#include <Eigen/Dense>

#include <filesystem>
#include <memory>
#include <vector>

#include "acdiag/linalg.hpp"

namespace acdiag::billiard {

/// Closed hard-wall cavity with a one-parameter boundary deformation.
/// quadrupole: polar boundary rho(theta) = 1 + deformation * cos(2 theta);
/// oval:       level set x^2/a^2 + (1 + deformation * x) y^2/b^2 = 1.
/// The boundary stays simple and closed for |deformation| <= 0.2; larger
/// values are rejected.
struct BilliardGeometry {
    enum class Kind { quadrupole, oval };

    Kind kind = Kind::quadrupole;
    double deformation = 0.0;
    double semi_axis_a = 1.0;
    double semi_axis_b = 1.03;
    double refractive_index = 3.3;

    static BilliardGeometry quadrupole(double kappa, double refractive_index = 3.3);
    static BilliardGeometry oval(double epsilon, double a = 1.0, double b = 1.03, double refractive_index = 3.3);
};

/// Quadrupole boundary radius at the given polar angle.
double boundary_radius(const BilliardGeometry& geometry, double angle);

/// Signed interior level: < 1 strictly inside, == 1 on the boundary, > 1
/// outside. For the quadrupole this is r / rho(theta), for the oval the
/// quadratic form x^2/a^2 + (1 + eps x) y^2/b^2.
double boundary_level(const BilliardGeometry& geometry, double x, double y);

/// Inclusive inside-or-boundary test (level <= 1).
bool contains(const BilliardGeometry& geometry, double x, double y);

/// Strict interior test (level < 1); this is the grid mask rule.
bool inside(const BilliardGeometry& geometry, double x, double y);

struct BoundingBox {
    double x_min = 0.0, x_max = 0.0;
    double y_min = 0.0, y_max = 0.0;

    BoundingBox& merge(const BoundingBox& other);
};

/// Axis-aligned bounds of the boundary curve (dense boundary sampling).
BoundingBox bounding_box(const BilliardGeometry& geometry);

/// Square-cell discretization of a bounding rectangle with an interior mask.
/// Lattice lines always pass through x = 0 and y = 0 so mirror-symmetric
/// geometries produce mirror-symmetric masks, and the outermost lattice
/// lines are at least one cell outside the boundary.
class DomainGrid {
  public:
    /// Grid for one geometry; the box is derived from its boundary unless an
    /// explicit envelope (e.g. the union over a deformation sweep) is given.
    /// resolution is in points per unit length and must be at least 20.
    static DomainGrid from_geometry(const BilliardGeometry& geometry, int resolution);
    static DomainGrid from_geometry(const BilliardGeometry& geometry, int resolution, const BoundingBox& envelope);

    /// Debug/reference domain: the open rectangle (0, width) x (0, height)
    /// with Dirichlet boundary exactly on lattice lines.
    static DomainGrid rectangle(double width, double height, int resolution);

    int nx() const { return nx_; }
    int ny() const { return ny_; }
    double dx() const { return dx_; }
    double dy() const { return dx_; }  // square cells by construction
    // Coordinates are exact integer multiples of dx from the zero line, so
    // mirror-image lattice points have bit-identical magnitudes.
    double x(int i) const { return (i - ix0_) * dx_; }
    double y(int j) const { return (j - iy0_) * dx_; }

    bool interior(int i, int j) const { return index_map_[flat(i, j)] >= 0; }
    Eigen::Index interior_index(int i, int j) const { return index_map_[flat(i, j)]; }
    Eigen::Index interior_count() const { return interior_count_; }

    /// Scatters an interior-indexed vector into the full nx * ny box,
    /// x-major (index i * ny + j), zero outside the mask.
    Eigen::VectorXd embed(const Eigen::VectorXd& interior_values) const;

  private:
    std::size_t flat(int i, int j) const { return static_cast<std::size_t>(i) * static_cast<std::size_t>(ny_) + static_cast<std::size_t>(j); }

    int nx_ = 0, ny_ = 0;
    double dx_ = 0.0;
    int ix0_ = 0, iy0_ = 0;  // lattice indices of x = 0 and y = 0
    std::vector<Eigen::Index> index_map_;  // -1 outside
    Eigen::Index interior_count_ = 0;
};

/// 5-point finite-difference -laplacian with zero Dirichlet values at
/// masked-out neighbors; symmetric positive definite.
linalg::SparseSymOperator assemble_dirichlet_laplacian(const DomainGrid& grid);

/// One normalized stationary mode: values over interior points with
/// sum(v^2) dx dy = 1, internal eigenvalue lambda = (n k)^2 and the vacuum
/// wavenumber k = sqrt(lambda) / n.
struct ModeField {
    std::shared_ptr<const DomainGrid> grid;
    Eigen::VectorXd values;
    double eigenvalue = 0.0;
    double wavenumber = 0.0;
};

struct SolveModesOptions {
    double tol = 1e-9;
    const BoundingBox* envelope = nullptr;  // optional fixed sweep box
};

/// The `count` modes with internal eigenvalue nearest (n * target_k)^2,
/// sorted by eigenvalue.
std::vector<ModeField> solve_modes(const BilliardGeometry& geometry, int resolution, double target_k, int count,
                                   const SolveModesOptions& options = {});

/// Text dump: "nx ny dx dy eigenvalue" header line, then row-major (x-major)
/// values over the full box, one row per line.
void write_mode_field(const std::filesystem::path& path, const ModeField& mode);
void write_mode_field(const std::filesystem::path& path, int nx, int ny, double dx, double dy, double eigenvalue,
                      const Eigen::VectorXd& box_values);

struct StoredField {
    int nx = 0, ny = 0;
    double dx = 0.0, dy = 0.0;
    double eigenvalue = 0.0;
    Eigen::VectorXd values;  // full box, x-major
};

StoredField read_mode_field(const std::filesystem::path& path);

}  // namespace acdiag::billiard
