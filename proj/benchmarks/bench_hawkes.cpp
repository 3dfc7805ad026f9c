// Apache License, Version 2.0, refer to LICENSE.txt

#include <cmath>

#include <benchmark/benchmark.h>

#include "rolemine/hawkes.hpp"

namespace {

rolemine::HawkesParams three_process_params() {
  rolemine::HawkesParams params;
  params.process_count = 3;
  params.background_rates = {0.01, 0.02, 0.005};
  params.weights = {{0.3, 0.3, 0.3}, {0.3, 0.3, 0.3}, {0.05, 0.05, 0.05}};
  params.lag_pmf.resize(20);
  double mass = 0.0;
  for (int t = 0; t < 20; ++t) {
    params.lag_pmf[static_cast<std::size_t>(t)] = 0.3 * std::pow(0.7, t);
    mass += params.lag_pmf[static_cast<std::size_t>(t)];
  }
  for (double& g : params.lag_pmf) g /= mass;
  return params;
}

void BM_Simulate(benchmark::State& state) {
  const auto params = three_process_params();
  for (auto _ : state) {
    benchmark::DoNotOptimize(rolemine::simulate(params, state.range(0), 99));
  }
}
BENCHMARK(BM_Simulate)->Arg(10000)->Arg(50000);

void BM_ComputeRates(benchmark::State& state) {
  const auto params = three_process_params();
  const auto series = rolemine::simulate(params, state.range(0), 7);
  for (auto _ : state) {
    benchmark::DoNotOptimize(rolemine::compute_rates(series, params));
  }
}
BENCHMARK(BM_ComputeRates)->Arg(10000);

void BM_EmIterations(benchmark::State& state) {
  const auto params = three_process_params();
  const auto series = rolemine::simulate(params, 50000, 7);
  rolemine::EmConfig config;
  config.lag_horizon = 20;
  config.max_iters = static_cast<int>(state.range(0));
  config.tol = 0.0;  // run the full iteration budget
  for (auto _ : state) {
    benchmark::DoNotOptimize(rolemine::fit_em(series, config));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_EmIterations)->Arg(10)->Arg(50);

}  // namespace
