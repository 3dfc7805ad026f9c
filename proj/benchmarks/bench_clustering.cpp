// Apache License, Version 2.0, refer to LICENSE.txt

#include <benchmark/benchmark.h>

#include "rolemine/clustering.hpp"
#include "rolemine/rng.hpp"

namespace {

using rolemine::DataMatrix;

DataMatrix blobs(int per_cluster, int k, int dim, std::uint64_t seed) {
  rolemine::Rng rng(seed);
  DataMatrix points;
  for (int c = 0; c < k; ++c) {
    for (int i = 0; i < per_cluster; ++i) {
      std::vector<double> point(static_cast<std::size_t>(dim));
      for (auto& v : point) v = rng.next_gaussian();
      point[static_cast<std::size_t>(c)] += 5.0;
      points.push_back(std::move(point));
    }
  }
  return points;
}

void BM_KMeansFit(benchmark::State& state) {
  const auto points = blobs(static_cast<int>(state.range(0)) / 5, 5, 13, 1);
  for (auto _ : state) {
    benchmark::DoNotOptimize(rolemine::kmeans_fit(points, 5, 3));
  }
}
BENCHMARK(BM_KMeansFit)->Arg(500)->Arg(1000)->Arg(5000);

void BM_AgglomerativeFit(benchmark::State& state) {
  const auto points = blobs(static_cast<int>(state.range(0)) / 5, 5, 13, 2);
  for (auto _ : state) {
    benchmark::DoNotOptimize(rolemine::agglomerative_fit(points, 5));
  }
}
BENCHMARK(BM_AgglomerativeFit)->Arg(200)->Arg(500)->Arg(1000);

void BM_Silhouette(benchmark::State& state) {
  const auto points = blobs(static_cast<int>(state.range(0)) / 5, 5, 13, 3);
  const auto fit = rolemine::kmeans_fit(points, 5, 3);
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        rolemine::silhouette_score(points, fit.assignment.labels));
  }
}
BENCHMARK(BM_Silhouette)->Arg(500)->Arg(1000);

void BM_Vif(benchmark::State& state) {
  const auto points = blobs(static_cast<int>(state.range(0)) / 5, 5, 13, 4);
  for (auto _ : state) {
    benchmark::DoNotOptimize(rolemine::vif(points));
  }
}
BENCHMARK(BM_Vif)->Arg(1000)->Arg(5000);

}  // namespace
