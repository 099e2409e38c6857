#include <benchmark/benchmark.h>

#include "acdiag/billiard.hpp"
#include "acdiag/spinchain.hpp"

using namespace acdiag;

static void SectorHamiltonianL8(benchmark::State& state) {
    spinchain::SpinChainModel model;
    model.tilt = 0.45;
    const auto basis = spinchain::bit_reversal_sector(model.sites, spinchain::Parity::even);
    for (auto _ : state) {
        auto h = spinchain::sector_hamiltonian(model, basis);
        benchmark::DoNotOptimize(h);
    }
}
BENCHMARK(SectorHamiltonianL8);

static void SectorSweepPoint(benchmark::State& state) {
    spinchain::SpinChainModel model;
    const auto basis = spinchain::bit_reversal_sector(model.sites, spinchain::Parity::even);
    double tilt = 0.3;
    for (auto _ : state) {
        tilt += 1e-6;
        auto sets = spinchain::sweep_spectrum(model, basis, {tilt, tilt + 0.005}, 1);
        benchmark::DoNotOptimize(sets);
    }
}
BENCHMARK(SectorSweepPoint);

static void AssembleLaplacian(benchmark::State& state) {
    const auto geometry = billiard::BilliardGeometry::quadrupole(0.06);
    for (auto _ : state) {
        const auto grid = billiard::DomainGrid::from_geometry(geometry, static_cast<int>(state.range(0)));
        auto op = billiard::assemble_dirichlet_laplacian(grid);
        benchmark::DoNotOptimize(op);
    }
}
BENCHMARK(AssembleLaplacian)->Arg(60)->Arg(120);

static void SolveLowestModes(benchmark::State& state) {
    const auto geometry = billiard::BilliardGeometry::quadrupole(0.06);
    for (auto _ : state) {
        auto modes = billiard::solve_modes(geometry, static_cast<int>(state.range(0)), 2.405 / 3.3, 4);
        benchmark::DoNotOptimize(modes);
    }
}
BENCHMARK(SolveLowestModes)->Arg(40)->Arg(80)->Unit(benchmark::kMillisecond);
