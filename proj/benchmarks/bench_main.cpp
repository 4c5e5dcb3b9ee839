#include <cmath>
#include <cstdint>

#include <benchmark/benchmark.h>

#include "tqsync/channel.hpp"
#include "tqsync/cost_model.hpp"
#include "tqsync/protocols.hpp"
#include "tqsync/simulator.hpp"

using namespace tqsync;

static void BM_MeasureMinusZ(benchmark::State &state) {
    RngStream rng(1);
    PureQubit psi(std::sqrt(0.3), std::sqrt(0.7), Party::Alice);
    for (auto _ : state) {
        benchmark::DoNotOptimize(measure_minus_z(psi, rng));
    }
    state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_MeasureMinusZ);

static void BM_SamplePm1(benchmark::State &state) {
    RngStream rng(2);
    for (auto _ : state) {
        benchmark::DoNotOptimize(sample_pm1(0.25, rng));
    }
    state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_SamplePm1);

static void BM_CoherentBounces(benchmark::State &state) {
    RngStream rng(3);
    LossyChannel ch(0.99);
    const auto m = static_cast<std::uint64_t>(state.range(0));
    for (auto _ : state) {
        TransmissionLog log;
        benchmark::DoNotOptimize(run_coherent_bounces(m, ch, rng, log));
    }
}
BENCHMARK(BM_CoherentBounces)->Arg(1)->Arg(8)->Arg(64);

static void BM_ImprovedRun(benchmark::State &state) {
    const int k = static_cast<int>(state.range(0));
    const double eps = std::ldexp(1.0, -k);
    TruthModel truth = TruthModel::from_half_turns(1.0, 0.3141);
    LossyChannel ch(1.0);
    std::uint64_t seed = 0;
    for (auto _ : state) {
        ProtocolReport r = improved_estimate(truth, k, eps, QuadratureMode::TwoQuadrature, ch, RngStream(seed++));
        benchmark::DoNotOptimize(r);
    }
}
BENCHMARK(BM_ImprovedRun)->Arg(4)->Arg(8)->Unit(benchmark::kMillisecond);

static void BM_LossyImprovedCost(benchmark::State &state) {
    for (auto _ : state) {
        for (int k = 1; k <= 24; ++k) {
            benchmark::DoNotOptimize(cost::lossy_improved_cost(k, std::ldexp(1.0, -k), 0.99));
        }
    }
}
BENCHMARK(BM_LossyImprovedCost);

static void BM_OptimalK1(benchmark::State &state) {
    const double eps = std::ldexp(1.0, -11);
    for (auto _ : state) {
        benchmark::DoNotOptimize(cost::optimal_k1(11, eps, 0.99));
    }
}
BENCHMARK(BM_OptimalK1);
BENCHMARK_MAIN();
