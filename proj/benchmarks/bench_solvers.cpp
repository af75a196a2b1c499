#include <benchmark/benchmark.h>

#include <vector>

#include "beliefcoop/analysis.hpp"
#include "beliefcoop/common.hpp"
#include "beliefcoop/diverse.hpp"
#include "beliefcoop/extensions.hpp"
#include "beliefcoop/montecarlo.hpp"

using namespace beliefcoop;

namespace {

const GameParams kFig1 = validate_params(3, 50);
const GameParams kUnit = validate_params(2, 8);

void BM_CommonEquilibria(benchmark::State& state) {
    const auto F = LossDistribution::uniform(8);
    CommonSolverOptions opts;
    opts.scan_cells = static_cast<std::size_t>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(solve_common_equilibria(0.05, kFig1, F, opts));
}
BENCHMARK(BM_CommonEquilibria)->Arg(500)->Arg(2000)->Arg(8000);

void BM_DiverseFixedPoint(benchmark::State& state) {
    const auto F = LossDistribution::uniform(1);
    const auto G = BeliefDistribution::uniform();
    DiverseOptions opts;
    opts.grid_size = static_cast<std::size_t>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(solve_diverse_threshold(kUnit, F, G, opts));
}
BENCHMARK(BM_DiverseFixedPoint)->Arg(201)->Arg(1001)->Arg(4001);

void BM_AlphaBetaExact(benchmark::State& state) {
    for (auto _ : state) benchmark::DoNotOptimize(solve_alpha_beta(kUnit, AlphaBetaMode::Exact));
}
BENCHMARK(BM_AlphaBetaExact);

void BM_PiDagger(benchmark::State& state) {
    const AlphaBeta ab = solve_alpha_beta(kUnit, AlphaBetaMode::Approximate);
    for (auto _ : state) benchmark::DoNotOptimize(solve_pi_dagger(kUnit, ab));
}
BENCHMARK(BM_PiDagger);

void BM_DiversityRegion(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    std::vector<double> bs(n);
    std::vector<double> ms(n);
    for (std::size_t i = 0; i < n; ++i) {
        bs[i] = 2.0 + 4.0 * static_cast<double>(i) / static_cast<double>(n - 1);
        ms[i] = 5.0 + 55.0 * static_cast<double>(i) / static_cast<double>(n - 1);
    }
    for (auto _ : state) benchmark::DoNotOptimize(diversity_region(bs, ms));
}
BENCHMARK(BM_DiversityRegion)->Arg(25)->Arg(100);

void BM_Asymmetric(benchmark::State& state) {
    const auto F = LossDistribution::uniform(8);
    for (auto _ : state) benchmark::DoNotOptimize(solve_asymmetric(0.02, 0.06, kFig1, F));
}
BENCHMARK(BM_Asymmetric);

void BM_GroupDiverse(benchmark::State& state) {
    const auto F = LossDistribution::uniform(1);
    const auto G = BeliefDistribution::uniform();
    const int n = static_cast<int>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(solve_group_diverse(n, kUnit, F, G));
}
BENCHMARK(BM_GroupDiverse)->Arg(1)->Arg(5);

void BM_Simulate(benchmark::State& state) {
    const auto F = LossDistribution::uniform(8);
    const auto G = BeliefDistribution::uniform();
    SimConfig cfg;
    cfg.pi = 0.03;
    cfg.n_samples = static_cast<std::uint64_t>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(simulate(cfg, kFig1, F, G));
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_Simulate)->Arg(10000)->Arg(100000);

}  // namespace

BENCHMARK_MAIN();
