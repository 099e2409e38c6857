#include <benchmark/benchmark.h>

#include <random>

#include "acdiag/sweep.hpp"

using namespace acdiag;

static void Assignment(benchmark::State& state) {
    std::mt19937 rng(11);
    std::uniform_real_distribution<double> uniform(0.0, 1.0);
    const Eigen::Index n = state.range(0);
    Eigen::MatrixXd cost(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j) cost(i, j) = uniform(rng);
    for (auto _ : state) {
        auto match = sweep::solve_assignment(cost);
        benchmark::DoNotOptimize(match);
    }
    state.SetComplexityN(state.range(0));
}
BENCHMARK(Assignment)->Arg(16)->Arg(64)->Arg(136)->Complexity();

static void TrackFullSector(benchmark::State& state) {
    // orthonormal frames drifting slowly, the shape of a sector sweep
    std::mt19937 rng(12);
    std::normal_distribution<double> gauss;
    const Eigen::Index dim = 136;
    const int steps = 16;
    Eigen::MatrixXd seed(dim, dim);
    for (Eigen::Index i = 0; i < dim; ++i)
        for (Eigen::Index j = 0; j < dim; ++j) seed(i, j) = gauss(rng);
    const Eigen::MatrixXd q = Eigen::HouseholderQR<Eigen::MatrixXd>(seed).householderQ();

    std::vector<sweep::ParameterEigenSet> sets(steps);
    for (int t = 0; t < steps; ++t) {
        sets[static_cast<std::size_t>(t)].parameter = t;
        sets[static_cast<std::size_t>(t)].values = Eigen::VectorXd::LinSpaced(dim, -10.0, 10.0);
        Eigen::MatrixXd drift(dim, dim);
        for (Eigen::Index i = 0; i < dim; ++i)
            for (Eigen::Index j = 0; j < dim; ++j) drift(i, j) = gauss(rng);
        sets[static_cast<std::size_t>(t)].vectors =
            Eigen::HouseholderQR<Eigen::MatrixXd>(q + 0.01 * t * drift).householderQ();
    }
    for (auto _ : state) {
        auto branches = sweep::track_branches(sets);
        benchmark::DoNotOptimize(branches);
    }
}
BENCHMARK(TrackFullSector);
