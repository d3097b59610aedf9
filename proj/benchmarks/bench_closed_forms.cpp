#include <benchmark/benchmark.h>

#include <random>

#include "gwgauss/balanced.hpp"
#include "gwgauss/barycenter.hpp"
#include "gwgauss/discrete_gw.hpp"
#include "gwgauss/monte_carlo.hpp"
#include "gwgauss/unbalanced.hpp"

using namespace gwgauss;

namespace {

GaussianMeasure random_measure(std::mt19937_64& rng, std::size_t dim, double mass = 1.0) {
    std::uniform_real_distribution<double> u(0.1, 10.0);
    std::vector<double> s(dim);
    for (auto& v : s) v = u(rng);
    return gaussian_from_spectrum(mass, std::move(s));
}

void BM_IgwEntropic(benchmark::State& state) {
    std::mt19937_64 rng(1);
    const auto n = static_cast<std::size_t>(state.range(0));
    const auto mu = random_measure(rng, n);
    const auto nu = random_measure(rng, n);
    for (auto _ : state) benchmark::DoNotOptimize(igw_entropic(mu, nu, 0.5));
}
BENCHMARK(BM_IgwEntropic)->Arg(8)->Arg(64)->Arg(512);

void BM_MakeGaussian(benchmark::State& state) {
    const auto n = state.range(0);
    std::mt19937_64 rng(2);
    std::normal_distribution<double> g;
    Eigen::MatrixXd a(n, n);
    for (Eigen::Index i = 0; i < a.size(); ++i) a.data()[i] = g(rng);
    const Eigen::MatrixXd cov = a * a.transpose() + Eigen::MatrixXd::Identity(n, n);
    for (auto _ : state) benchmark::DoNotOptimize(make_gaussian(1.0, cov));
}
BENCHMARK(BM_MakeGaussian)->Arg(8)->Arg(64)->Arg(256);

void BM_BranchCubic(benchmark::State& state) {
    for (auto _ : state) benchmark::DoNotOptimize(minimize_g_plus(2.3, 0.7, 0.4, 1.1));
}
BENCHMARK(BM_BranchCubic);

void BM_UigwEntropic(benchmark::State& state) {
    std::mt19937_64 rng(3);
    const auto n = static_cast<std::size_t>(state.range(0));
    const auto mu = random_measure(rng, n, 1.5);
    const auto nu = random_measure(rng, n / 2 + 1, 0.8);
    for (auto _ : state) benchmark::DoNotOptimize(uigw_entropic(mu, nu, 0.5, 1.0));
}
BENCHMARK(BM_UigwEntropic)->Arg(8)->Arg(64)->Arg(512);

void BM_EntropicBarycenter(benchmark::State& state) {
    std::mt19937_64 rng(4);
    BarycenterSpec spec;
    const auto k = static_cast<std::size_t>(state.range(0));
    for (std::size_t l = 0; l < k; ++l) {
        spec.measures.push_back(random_measure(rng, 4));
        spec.weights.push_back(1.0 / static_cast<double>(k));
    }
    spec.target_dim = 4;
    spec.epsilon = 0.01;
    for (auto _ : state) benchmark::DoNotOptimize(entropic_igw_barycenter(spec));
}
BENCHMARK(BM_EntropicBarycenter)->Arg(2)->Arg(8)->Arg(16);

void BM_MonteCarlo(benchmark::State& state) {
    const CouplingPlan plan(1.0, {2.0, 1.0}, {1.5}, {1.0});
    for (auto _ : state) benchmark::DoNotOptimize(oracle::monte_carlo_igw_cost(plan, 100000, 7));
}
BENCHMARK(BM_MonteCarlo)->Unit(benchmark::kMillisecond);

void BM_DiscreteGw(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    const auto mu = oracle::quantize_gaussian(gaussian_from_spectrum(1.0, {1.0}), n);
    const auto nu = oracle::quantize_gaussian(gaussian_from_spectrum(1.0, {4.0}), n);
    for (auto _ : state) benchmark::DoNotOptimize(oracle::discrete_entropic_gw(mu, nu, 0.5));
}
BENCHMARK(BM_DiscreteGw)->Arg(32)->Arg(64)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
