#include <benchmark/benchmark.h>

#include <random>

#include "acdiag/linalg.hpp"

using namespace acdiag;

namespace {

Eigen::MatrixXd random_symmetric(Eigen::Index n, unsigned seed) {
    std::mt19937 rng(seed);
    std::normal_distribution<double> gauss;
    Eigen::MatrixXd a(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j) a(i, j) = gauss(rng);
    return 0.5 * (a + a.transpose()).eval();
}

}  // namespace

static void DenseSymEig(benchmark::State& state) {
    const Eigen::MatrixXd a = random_symmetric(state.range(0), 42);
    for (auto _ : state) {
        auto pairs = linalg::dense_sym_eig(a);
        benchmark::DoNotOptimize(pairs);
    }
    state.SetComplexityN(state.range(0));
}
BENCHMARK(DenseSymEig)->Arg(64)->Arg(136)->Arg(256)->Complexity();

static void ThinSvd(benchmark::State& state) {
    std::mt19937 rng(43);
    std::normal_distribution<double> gauss;
    const Eigen::Index n = state.range(0);
    Eigen::MatrixXd c(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j) c(i, j) = gauss(rng);
    for (auto _ : state) {
        auto result = linalg::svd(c);
        benchmark::DoNotOptimize(result);
    }
}
BENCHMARK(ThinSvd)->Arg(16)->Arg(64)->Arg(200);

static void ShiftInvert1d(benchmark::State& state) {
    const int points = static_cast<int>(state.range(0));
    const double h = 1.0 / (points + 1);
    linalg::SparseSymOperator::Builder builder(points);
    for (int i = 0; i < points; ++i) {
        builder.add(i, i, 2.0 / (h * h));
        if (i + 1 < points) builder.add(i, i + 1, -1.0 / (h * h));
    }
    const auto op = builder.build();
    for (auto _ : state) {
        auto result = linalg::shift_invert_eig(op, 0.0, 4, 1e-9);
        benchmark::DoNotOptimize(result);
    }
}
BENCHMARK(ShiftInvert1d)->Arg(1000)->Arg(10000);
