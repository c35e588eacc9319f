// Copyright 2026 The smrlab Authors
// SPDX-License-Identifier: Apache-2.0

#include <benchmark/benchmark.h>

#include <array>
#include <vector>

#include "smr/convops.hpp"
#include "smr/maxreg.hpp"
#include "smr/spectral.hpp"
#include "smr/stochastic.hpp"

namespace {

void BM_StochConvolution(benchmark::State& state) {
    const auto steps = static_cast<std::size_t>(state.range(0));
    const auto model = smr::make_geometric_ladder(8, 2.0);
    const smr::TimeGrid grid(1.0, steps);
    const auto g = smr::random_process(steps, model.size(), 1, 7);
    const auto noise = smr::sample_noise(grid, 1, 11);
    for (auto _ : state) {
        benchmark::DoNotOptimize(smr::stoch_convolution(model, g, noise, 0.5, 0.0));
    }
    state.SetItemsProcessed(state.iterations() * static_cast<long>(steps * model.size()));
}
BENCHMARK(BM_StochConvolution)->Arg(250)->Arg(1000)->Arg(4000);

void BM_StochConvolutionTheta(benchmark::State& state) {
    const auto steps = static_cast<std::size_t>(state.range(0));
    const auto model = smr::make_geometric_ladder(4, 2.0);
    const smr::TimeGrid grid(1.0, steps);
    const auto g = smr::random_process(steps, model.size(), 1, 7);
    const auto noise = smr::sample_noise(grid, 1, 11);
    for (auto _ : state) {
        benchmark::DoNotOptimize(smr::stoch_convolution(model, g, noise, 0.25, 0.25));
    }
}
BENCHMARK(BM_StochConvolutionTheta)->Arg(250)->Arg(1000);

void BM_CounterexampleProbe(benchmark::State& state) {
    const std::array<int, 5> ks{8, 12, 16, 20, 24};
    for (auto _ : state) {
        benchmark::DoNotOptimize(smr::counterexample_probe(4.0, ks));
    }
}
BENCHMARK(BM_CounterexampleProbe)->Unit(benchmark::kMillisecond);

void BM_RboundJ(benchmark::State& state) {
    smr::OperatorFamilySpec family;
    family.kind = smr::FamilyKind::kJ;
    family.parameters = {1.0 / 64, 1.0 / 16, 1.0 / 4, 1.0};
    smr::RboundEnsembleSpec ensemble;
    ensemble.paths = 8;
    for (auto _ : state) {
        benchmark::DoNotOptimize(smr::rbound_estimate(family, ensemble, 2));
    }
}
BENCHMARK(BM_RboundJ)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
