#include "acdiag/billiard.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

#include "acdiag/common.hpp"

namespace acdiag::billiard {

namespace {

constexpr double kMaxDeformation = 0.2;
constexpr int kMinResolution = 20;
constexpr int kBoundarySamples = 4096;

void validate(const BilliardGeometry& geometry) {
    if (std::abs(geometry.deformation) > kMaxDeformation)
        throw std::invalid_argument("billiard geometry: |deformation| > 0.2 is outside the validated range");
    if (geometry.refractive_index <= 0.0)
        throw std::invalid_argument("billiard geometry: refractive index must be positive");
    if (geometry.kind == BilliardGeometry::Kind::oval && (geometry.semi_axis_a <= 0.0 || geometry.semi_axis_b <= 0.0))
        throw std::invalid_argument("billiard geometry: semi-axes must be positive");
}

}  // namespace

BilliardGeometry BilliardGeometry::quadrupole(double kappa, double refractive_index) {
    BilliardGeometry geometry;
    geometry.kind = Kind::quadrupole;
    geometry.deformation = kappa;
    geometry.refractive_index = refractive_index;
    validate(geometry);
    return geometry;
}

BilliardGeometry BilliardGeometry::oval(double epsilon, double a, double b, double refractive_index) {
    BilliardGeometry geometry;
    geometry.kind = Kind::oval;
    geometry.deformation = epsilon;
    geometry.semi_axis_a = a;
    geometry.semi_axis_b = b;
    geometry.refractive_index = refractive_index;
    validate(geometry);
    return geometry;
}

double boundary_radius(const BilliardGeometry& geometry, double angle) {
    if (geometry.kind != BilliardGeometry::Kind::quadrupole)
        throw std::invalid_argument("boundary_radius: defined for the quadrupole boundary only");
    return 1.0 + geometry.deformation * std::cos(2.0 * angle);
}

double boundary_level(const BilliardGeometry& geometry, double x, double y) {
    switch (geometry.kind) {
        case BilliardGeometry::Kind::quadrupole: {
            const double r2 = x * x + y * y;
            if (r2 == 0.0) return 0.0;
            // cos(2 theta) written algebraically so mirror-image points get
            // bit-identical levels
            const double rho = 1.0 + geometry.deformation * (x * x - y * y) / r2;
            return std::sqrt(r2) / rho;
        }
        case BilliardGeometry::Kind::oval: {
            const double a = geometry.semi_axis_a;
            const double b = geometry.semi_axis_b;
            return x * x / (a * a) + (1.0 + geometry.deformation * x) * y * y / (b * b);
        }
    }
    throw std::logic_error("boundary_level: unknown geometry kind");
}

bool contains(const BilliardGeometry& geometry, double x, double y) { return boundary_level(geometry, x, y) <= 1.0; }

bool inside(const BilliardGeometry& geometry, double x, double y) { return boundary_level(geometry, x, y) < 1.0; }

BoundingBox& BoundingBox::merge(const BoundingBox& other) {
    x_min = std::min(x_min, other.x_min);
    x_max = std::max(x_max, other.x_max);
    y_min = std::min(y_min, other.y_min);
    y_max = std::max(y_max, other.y_max);
    return *this;
}

BoundingBox bounding_box(const BilliardGeometry& geometry) {
    validate(geometry);
    BoundingBox box{1e300, -1e300, 1e300, -1e300};
    auto absorb = [&box](double x, double y) {
        box.x_min = std::min(box.x_min, x);
        box.x_max = std::max(box.x_max, x);
        box.y_min = std::min(box.y_min, y);
        box.y_max = std::max(box.y_max, y);
    };
    if (geometry.kind == BilliardGeometry::Kind::quadrupole) {
        for (int s = 0; s < kBoundarySamples; ++s) {
            const double theta = 2.0 * std::numbers::pi * s / kBoundarySamples;
            const double r = boundary_radius(geometry, theta);
            if (r <= 0.0) throw std::invalid_argument("billiard geometry: boundary radius is not positive");
            absorb(r * std::cos(theta), r * std::sin(theta));
        }
    } else {
        const double a = geometry.semi_axis_a;
        const double b = geometry.semi_axis_b;
        for (int s = 0; s <= kBoundarySamples; ++s) {
            const double x = -a + 2.0 * a * s / kBoundarySamples;
            const double stretch = 1.0 + geometry.deformation * x;
            if (stretch <= 0.0) throw std::invalid_argument("billiard geometry: oval boundary degenerates");
            const double y2 = b * b * (1.0 - x * x / (a * a)) / stretch;
            if (y2 < 0.0) continue;
            const double y = std::sqrt(y2);
            absorb(x, y);
            absorb(x, -y);
        }
    }
    return box;
}

namespace {

struct Lattice {
    int zero_index = 0;  // lattice line through the coordinate origin
    int count = 0;
};

// One-dimensional lattice of spacing dx through zero that covers
// [lo - dx, hi + dx]; guarantees at least one fully exterior line each side.
Lattice span_lattice(double lo, double hi, double dx) {
    const int below = static_cast<int>(std::ceil(-lo / dx)) + 1;
    const int above = static_cast<int>(std::ceil(hi / dx)) + 1;
    return {below, below + above + 1};
}

}  // namespace

DomainGrid DomainGrid::from_geometry(const BilliardGeometry& geometry, int resolution) {
    return from_geometry(geometry, resolution, bounding_box(geometry));
}

DomainGrid DomainGrid::from_geometry(const BilliardGeometry& geometry, int resolution, const BoundingBox& envelope) {
    validate(geometry);
    if (resolution < kMinResolution)
        throw std::invalid_argument(
            "DomainGrid: resolution below 20 points per unit length produces untrustworthy modes; "
            "increase the resolution");

    DomainGrid grid;
    grid.dx_ = 1.0 / resolution;
    const Lattice lx = span_lattice(envelope.x_min, envelope.x_max, grid.dx_);
    const Lattice ly = span_lattice(envelope.y_min, envelope.y_max, grid.dx_);
    grid.ix0_ = lx.zero_index;
    grid.iy0_ = ly.zero_index;
    grid.nx_ = lx.count;
    grid.ny_ = ly.count;

    grid.index_map_.assign(static_cast<std::size_t>(grid.nx_) * static_cast<std::size_t>(grid.ny_), -1);
    Eigen::Index next = 0;
    for (int i = 0; i < grid.nx_; ++i)
        for (int j = 0; j < grid.ny_; ++j)
            if (inside(geometry, grid.x(i), grid.y(j))) grid.index_map_[grid.flat(i, j)] = next++;
    grid.interior_count_ = next;
    if (grid.interior_count_ == 0) throw std::invalid_argument("DomainGrid: geometry has an empty interior");
    return grid;
}

DomainGrid DomainGrid::rectangle(double width, double height, int resolution) {
    if (width <= 0.0 || height <= 0.0) throw std::invalid_argument("DomainGrid::rectangle: sides must be positive");
    if (resolution < kMinResolution)
        throw std::invalid_argument(
            "DomainGrid: resolution below 20 points per unit length produces untrustworthy modes; "
            "increase the resolution");

    DomainGrid grid;
    grid.dx_ = 1.0 / resolution;
    const int mx = std::max(2, static_cast<int>(std::lround(width * resolution)));
    const int my = std::max(2, static_cast<int>(std::lround(height * resolution)));
    grid.ix0_ = 1;  // boundary lines x = 0 and y = 0 sit on the lattice
    grid.iy0_ = 1;
    grid.nx_ = mx + 3;  // one exterior line, boundary line, interior, boundary, exterior
    grid.ny_ = my + 3;

    grid.index_map_.assign(static_cast<std::size_t>(grid.nx_) * static_cast<std::size_t>(grid.ny_), -1);
    Eigen::Index next = 0;
    for (int i = 0; i < grid.nx_; ++i)
        for (int j = 0; j < grid.ny_; ++j)
            if (i >= 2 && i <= mx && j >= 2 && j <= my) grid.index_map_[grid.flat(i, j)] = next++;
    grid.interior_count_ = next;
    return grid;
}

Eigen::VectorXd DomainGrid::embed(const Eigen::VectorXd& interior_values) const {
    if (interior_values.size() != interior_count_)
        throw std::invalid_argument("DomainGrid::embed: interior vector size mismatch");
    Eigen::VectorXd box = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(nx_) * static_cast<Eigen::Index>(ny_));
    for (int i = 0; i < nx_; ++i)
        for (int j = 0; j < ny_; ++j) {
            const Eigen::Index idx = index_map_[flat(i, j)];
            if (idx >= 0) box[static_cast<Eigen::Index>(i) * ny_ + j] = interior_values[idx];
        }
    return box;
}

linalg::SparseSymOperator assemble_dirichlet_laplacian(const DomainGrid& grid) {
    if (grid.interior_count() == 0)
        throw std::invalid_argument("assemble_dirichlet_laplacian: grid has an empty interior");
    const double inv_h2 = 1.0 / (grid.dx() * grid.dx());

    linalg::SparseSymOperator::Builder builder(grid.interior_count());
    for (int i = 0; i < grid.nx(); ++i) {
        for (int j = 0; j < grid.ny(); ++j) {
            const Eigen::Index row = grid.interior_index(i, j);
            if (row < 0) continue;
            builder.add(row, row, 4.0 * inv_h2);
            // Masked-out neighbors carry the Dirichlet zero and drop out;
            // interior-order is x-major so these two neighbors are above row.
            if (j + 1 < grid.ny()) {
                const Eigen::Index up = grid.interior_index(i, j + 1);
                if (up >= 0) builder.add(row, up, -inv_h2);
            }
            if (i + 1 < grid.nx()) {
                const Eigen::Index right = grid.interior_index(i + 1, j);
                if (right >= 0) builder.add(row, right, -inv_h2);
            }
        }
    }
    return builder.build();
}

std::vector<ModeField> solve_modes(const BilliardGeometry& geometry, int resolution, double target_k, int count,
                                   const SolveModesOptions& options) {
    if (target_k <= 0.0) throw std::invalid_argument("solve_modes: target_k must be positive");
    if (count <= 0) throw std::invalid_argument("solve_modes: count must be positive");

    auto grid = std::make_shared<DomainGrid>(options.envelope
                                                 ? DomainGrid::from_geometry(geometry, resolution, *options.envelope)
                                                 : DomainGrid::from_geometry(geometry, resolution));
    const auto laplacian = assemble_dirichlet_laplacian(*grid);
    const double n = geometry.refractive_index;
    const double shift = (n * target_k) * (n * target_k);

    auto result = linalg::shift_invert_eig(laplacian, shift, count, options.tol);
    if (!result.converged)
        throw SolverError("solve_modes: shift-invert iteration did not converge within the restart cap");

    std::sort(result.pairs.begin(), result.pairs.end(),
              [](const linalg::EigenPair& lhs, const linalg::EigenPair& rhs) { return lhs.value < rhs.value; });

    const double cell = grid->dx() * grid->dy();
    std::vector<ModeField> modes;
    modes.reserve(result.pairs.size());
    for (auto& pair : result.pairs) {
        ModeField mode;
        mode.grid = grid;
        mode.values = pair.vector / std::sqrt(cell);  // sum(v^2) dx dy = 1
        mode.eigenvalue = pair.value;
        mode.wavenumber = std::sqrt(std::max(pair.value, 0.0)) / n;
        modes.push_back(std::move(mode));
    }
    return modes;
}

void write_mode_field(const std::filesystem::path& path, int nx, int ny, double dx, double dy, double eigenvalue,
                      const Eigen::VectorXd& box_values) {
    if (box_values.size() != static_cast<Eigen::Index>(nx) * ny)
        throw std::invalid_argument("write_mode_field: values do not fill the box");
    std::ofstream out(path);
    if (!out) throw IoError("write_mode_field: cannot open " + path.string());
    out << nx << ' ' << ny << ' ' << format_double(dx) << ' ' << format_double(dy) << ' '
        << format_double(eigenvalue) << '\n';
    for (int i = 0; i < nx; ++i) {
        for (int j = 0; j < ny; ++j) {
            if (j) out << ' ';
            out << format_double(box_values[static_cast<Eigen::Index>(i) * ny + j]);
        }
        out << '\n';
    }
    if (!out) throw IoError("write_mode_field: write failed for " + path.string());
}

void write_mode_field(const std::filesystem::path& path, const ModeField& mode) {
    const auto& grid = *mode.grid;
    write_mode_field(path, grid.nx(), grid.ny(), grid.dx(), grid.dy(), mode.eigenvalue, grid.embed(mode.values));
}

StoredField read_mode_field(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("read_mode_field: cannot open " + path.string());
    StoredField field;
    in >> field.nx >> field.ny >> field.dx >> field.dy >> field.eigenvalue;
    if (!in || field.nx <= 0 || field.ny <= 0)
        throw IoError("read_mode_field: malformed header in " + path.string());
    field.values.resize(static_cast<Eigen::Index>(field.nx) * field.ny);
    for (Eigen::Index idx = 0; idx < field.values.size(); ++idx) {
        if (!(in >> field.values[idx])) throw IoError("read_mode_field: truncated values in " + path.string());
    }
    return field;
}

}  // namespace acdiag::billiard
