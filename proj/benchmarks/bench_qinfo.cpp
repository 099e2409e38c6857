#include <benchmark/benchmark.h>

#include <random>

#include "acdiag/qinfo.hpp"

using namespace acdiag;

static void HalfChainDiagnostics(benchmark::State& state) {
    std::mt19937 rng(7);
    std::normal_distribution<double> gauss;
    Eigen::VectorXd psi(256);
    for (Eigen::Index i = 0; i < psi.size(); ++i) psi[i] = gauss(rng);
    psi.normalize();
    const auto split = qinfo::Bipartition::chain_half(8);
    for (auto _ : state) {
        auto record = qinfo::compute_diagnostics(psi, split);
        benchmark::DoNotOptimize(record);
    }
}
BENCHMARK(HalfChainDiagnostics);

static void GridDiagnostics(benchmark::State& state) {
    std::mt19937 rng(8);
    std::normal_distribution<double> gauss;
    const Eigen::Index n = state.range(0);
    Eigen::VectorXd psi(n * n);
    for (Eigen::Index i = 0; i < psi.size(); ++i) psi[i] = gauss(rng);
    psi.normalize();
    const auto split = qinfo::Bipartition::grid(n, n);
    for (auto _ : state) {
        auto record = qinfo::compute_diagnostics(psi, split);
        benchmark::DoNotOptimize(record);
    }
}
BENCHMARK(GridDiagnostics)->Arg(64)->Arg(128);

static void PerturbationPredict(benchmark::State& state) {
    std::mt19937 rng(9);
    std::normal_distribution<double> gauss;
    Eigen::MatrixXd c(16, 16), e(16, 16);
    for (Eigen::Index i = 0; i < 16; ++i)
        for (Eigen::Index j = 0; j < 16; ++j) {
            c(i, j) = gauss(rng);
            e(i, j) = gauss(rng);
        }
    c /= c.norm();
    const Eigen::MatrixXd next = c + 1e-4 * e / e.norm();
    for (auto _ : state) {
        auto shifts = qinfo::svd_perturbation_predict(c, next);
        benchmark::DoNotOptimize(shifts);
    }
}
BENCHMARK(PerturbationPredict);
