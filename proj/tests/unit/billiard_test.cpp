#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <numbers>

#include "acdiag/billiard.hpp"
#include "oracles.hpp"

using namespace acdiag;
using billiard::BilliardGeometry;
using billiard::DomainGrid;

namespace {
constexpr double kPi = std::numbers::pi;
}

TEST_CASE("boundary_radius and the oval level set") {
    const auto circle = BilliardGeometry::quadrupole(0.0);
    for (double theta : {0.0, 0.3, 1.1, 2.9}) CHECK(billiard::boundary_radius(circle, theta) == 1.0);

    const auto quad = BilliardGeometry::quadrupole(0.1);
    CHECK(billiard::boundary_radius(quad, 0.0) == doctest::Approx(1.1).epsilon(1e-15));
    CHECK(billiard::boundary_radius(quad, kPi / 2) == doctest::Approx(0.9).epsilon(1e-15));

    const auto ellipse = BilliardGeometry::oval(0.0);
    CHECK(billiard::boundary_level(ellipse, 0.0, 1.03) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(billiard::contains(ellipse, 0.0, 1.03));
    CHECK_FALSE(billiard::inside(ellipse, 0.0, 1.03));
    CHECK(billiard::inside(ellipse, 0.0, 1.02));
}

TEST_CASE("geometry validation: deformation range and degenerate boundaries") {
    CHECK_THROWS_AS(BilliardGeometry::quadrupole(0.25), std::invalid_argument);
    CHECK_THROWS_AS(BilliardGeometry::oval(-0.21), std::invalid_argument);
    CHECK_NOTHROW(BilliardGeometry::quadrupole(-0.2));
}

TEST_CASE("build_grid: interior count of the unit disc matches the area") {
    const auto grid = DomainGrid::from_geometry(BilliardGeometry::quadrupole(0.0), 100);
    const double expected = kPi * 100.0 * 100.0;
    CHECK(std::abs(static_cast<double>(grid.interior_count()) - expected) / expected < 0.02);
}

TEST_CASE("build_grid: rectangle mask is the full inner lattice block") {
    const auto grid = DomainGrid::rectangle(1.0, 1.0, 50);
    CHECK(grid.interior_count() == 49 * 49);
    int boundary_interior = 0;
    for (int i = 0; i < grid.nx(); ++i)
        for (int j = 0; j < grid.ny(); ++j)
            if (grid.interior(i, j) && (grid.x(i) <= 0.0 || grid.x(i) >= 1.0 || grid.y(j) <= 0.0 || grid.y(j) >= 1.0))
                ++boundary_interior;
    CHECK(boundary_interior == 0);
}

TEST_CASE("build_grid: oval mask is symmetric under y -> -y") {
    const auto grid = DomainGrid::from_geometry(BilliardGeometry::oval(0.1), 40);
    for (int i = 0; i < grid.nx(); ++i)
        for (int j = 0; j < grid.ny(); ++j)
            CHECK(grid.interior(i, j) == grid.interior(i, grid.ny() - 1 - j));
}

TEST_CASE("build_grid: coarse resolutions are rejected with guidance") {
    CHECK_THROWS_WITH_AS(DomainGrid::from_geometry(BilliardGeometry::quadrupole(0.0), 19),
                         doctest::Contains("resolution"), std::invalid_argument);
}

TEST_CASE("build_grid: mask points lie strictly inside the boundary") {
    const auto geometry = BilliardGeometry::quadrupole(0.12);
    const auto grid = DomainGrid::from_geometry(geometry, 30);
    for (int i = 0; i < grid.nx(); ++i)
        for (int j = 0; j < grid.ny(); ++j)
            if (grid.interior(i, j)) CHECK(billiard::boundary_level(geometry, grid.x(i), grid.y(j)) < 1.0);
}

TEST_CASE("assemble_dirichlet_laplacian: unit square ground state near 2 pi^2") {
    const auto grid = DomainGrid::rectangle(1.0, 1.0, 100);
    const auto op = billiard::assemble_dirichlet_laplacian(grid);
    const auto result = linalg::shift_invert_eig(op, 0.0, 1, 1e-9);
    REQUIRE(result.converged);
    const double analytic = 2.0 * kPi * kPi;
    CHECK(std::abs(result.pairs[0].value - analytic) / analytic < 0.01);
    // the sharp discrete value: two 1D chains of 99 points each
    const double discrete = 2.0 * oracles::dirichlet_chain_eigenvalue(1, 99, 0.01);
    CHECK(result.pairs[0].value == doctest::Approx(discrete).epsilon(1e-9));
}

TEST_CASE("assemble_dirichlet_laplacian: disc eigenvalues approach the Bessel zeros") {
    const double j01 = oracles::bessel_zero(0, 1);
    CHECK(j01 == doctest::Approx(2.404825557695773).epsilon(1e-9));
    const auto op = billiard::assemble_dirichlet_laplacian(
        DomainGrid::from_geometry(BilliardGeometry::quadrupole(0.0), 60));
    const auto result = linalg::shift_invert_eig(op, 0.0, 1, 1e-9);
    REQUIRE(result.converged);
    CHECK(std::abs(result.pairs[0].value - j01 * j01) / (j01 * j01) < 0.03);
}

TEST_CASE("assemble_dirichlet_laplacian: staircase boundary error shrinks as dx does") {
    // The mask approximation dominates on a curved boundary; halving dx
    // roughly halves the eigenvalue error (first order in dx).
    const double reference = std::pow(oracles::bessel_zero(0, 1), 2);
    auto error_at = [&](int resolution) {
        const auto op = billiard::assemble_dirichlet_laplacian(
            DomainGrid::from_geometry(BilliardGeometry::quadrupole(0.0), resolution));
        const auto result = linalg::shift_invert_eig(op, 0.0, 1, 1e-9);
        REQUIRE(result.converged);
        return std::abs(result.pairs[0].value - reference);
    };
    const double coarse = error_at(40);
    const double fine = error_at(80);
    CHECK(fine < coarse);
    CHECK(coarse / fine > 1.4);
}

TEST_CASE("assemble_dirichlet_laplacian: 1 x N strip reduces to the 1D chain") {
    const int resolution = 50;
    const double h = 1.0 / resolution;
    const auto grid = DomainGrid::rectangle(1.0, 2.0 * h, resolution);
    REQUIRE(grid.interior_count() == resolution - 1);  // a single interior row
    const auto op = billiard::assemble_dirichlet_laplacian(grid);
    const auto result = linalg::shift_invert_eig(op, 2.0 / (h * h), 3, 1e-10);
    REQUIRE(result.converged);
    std::vector<double> values;
    for (const auto& pair : result.pairs) values.push_back(pair.value);
    std::sort(values.begin(), values.end());
    for (int m = 1; m <= 3; ++m) {
        const double expected = oracles::dirichlet_chain_eigenvalue(m, resolution - 1, h) + 2.0 / (h * h);
        CHECK(values[static_cast<std::size_t>(m - 1)] == doctest::Approx(expected).epsilon(1e-9));
    }
}

TEST_CASE("solve_modes: circle ground mode is nodeless; first excited pair is degenerate") {
    const auto modes = billiard::solve_modes(BilliardGeometry::quadrupole(0.0), 60, 2.405 / 3.3, 3);
    REQUIRE(modes.size() == 3);

    // normalization: sum v^2 dx dy = 1
    const auto& grid = *modes[0].grid;
    for (const auto& mode : modes)
        CHECK(mode.values.squaredNorm() * grid.dx() * grid.dy() == doctest::Approx(1.0).epsilon(1e-10));

    // ground mode keeps one sign everywhere
    CHECK(modes[0].values.minCoeff() * modes[0].values.maxCoeff() >= 0.0);

    // j_{1,1} doublet split only by discretization
    CHECK(std::abs(modes[1].eigenvalue - modes[2].eigenvalue) < 1e-6 * modes[1].eigenvalue);

    // wavenumber bookkeeping: k = sqrt(lambda) / n
    CHECK(modes[0].wavenumber == doctest::Approx(std::sqrt(modes[0].eigenvalue) / 3.3));
}

TEST_CASE("solve_modes: oval modes respect the y mirror after sign alignment") {
    billiard::SolveModesOptions options;
    options.tol = 1e-12;
    const auto modes = billiard::solve_modes(BilliardGeometry::oval(0.1), 40, 2.405 / 3.3, 2, options);
    const auto& grid = *modes[0].grid;
    for (std::size_t a = 0; a < modes.size(); ++a) {
        for (std::size_t b = a + 1; b < modes.size(); ++b)
            if (std::abs(modes[a].eigenvalue - modes[b].eigenvalue) < 1e-3 * modes[a].eigenvalue)
                return;  // near-degenerate pair: mirror may mix the doublet
    }
    for (const auto& mode : modes) {
        const Eigen::VectorXd box = grid.embed(mode.values);
        const double amplitude = box.cwiseAbs().maxCoeff();
        double plus = 0.0, minus = 0.0;
        for (int i = 0; i < grid.nx(); ++i)
            for (int j = 0; j < grid.ny(); ++j) {
                const double direct = box[static_cast<Eigen::Index>(i) * grid.ny() + j];
                const double mirrored = box[static_cast<Eigen::Index>(i) * grid.ny() + (grid.ny() - 1 - j)];
                plus = std::max(plus, std::abs(direct - mirrored));
                minus = std::max(minus, std::abs(direct + mirrored));
            }
        CHECK(std::min(plus, minus) < 1e-6 * amplitude);
    }
}

TEST_CASE("solve_modes: eigenvalues move continuously with the deformation") {
    auto lowest = [](double kappa) {
        return billiard::solve_modes(BilliardGeometry::quadrupole(kappa), 40, 2.405 / 3.3, 1)[0].eigenvalue;
    };
    const double base = lowest(0.05);
    const double coarse_step = std::abs(lowest(0.051) - base);
    const double fine_step = std::abs(lowest(0.0501) - base);
    CHECK(coarse_step < 0.05 * base);
    CHECK(fine_step <= coarse_step + 1e-9);
}

TEST_CASE("mode field dumps round-trip through the text format") {
    const auto modes = billiard::solve_modes(BilliardGeometry::quadrupole(0.0), 30, 2.405 / 3.3, 1);
    const auto path = std::filesystem::temp_directory_path() / "acdiag_mode_roundtrip.dat";
    billiard::write_mode_field(path, modes[0]);
    const auto stored = billiard::read_mode_field(path);
    const auto& grid = *modes[0].grid;
    CHECK(stored.nx == grid.nx());
    CHECK(stored.ny == grid.ny());
    CHECK(stored.dx == grid.dx());
    CHECK(stored.eigenvalue == modes[0].eigenvalue);
    const Eigen::VectorXd box = grid.embed(modes[0].values);
    CHECK((stored.values - box).cwiseAbs().maxCoeff() == 0.0);  // 17 digits round-trip bit-exactly
    std::filesystem::remove(path);
}

TEST_CASE("empty interiors and bad arguments are rejected") {
    CHECK_THROWS_AS(billiard::solve_modes(BilliardGeometry::quadrupole(0.0), 30, -1.0, 1), std::invalid_argument);
    CHECK_THROWS_AS(billiard::solve_modes(BilliardGeometry::quadrupole(0.0), 30, 1.0, 0), std::invalid_argument);
}
