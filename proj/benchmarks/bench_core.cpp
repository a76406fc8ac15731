#include <benchmark/benchmark.h>

#include <random>

#include "parabgmt/generators.hpp"
#include "parabgmt/geometry.hpp"
#include "parabgmt/measure.hpp"
#include "parabgmt/rectify.hpp"

using namespace parabgmt;

namespace {

PointCloud uniform_cloud(int n, std::size_t count) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  PointCloud c(n);
  for (std::size_t i = 0; i < count; ++i) {
    Eigen::VectorXd x(n);
    for (int j = 0; j < n; ++j) x[j] = u(rng);
    c.push_back(Point{x, u(rng)});
  }
  return c;
}

void BM_Metric(benchmark::State& state) {
  const auto cloud = uniform_cloud(static_cast<int>(state.range(0)), 1024);
  std::size_t i = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(metric_eval(cloud.point(i % 1024), cloud.point((i * 31 + 7) % 1024)));
    ++i;
  }
}
BENCHMARK(BM_Metric)->Arg(1)->Arg(3);

void BM_GreedyCover(benchmark::State& state) {
  const auto cloud = uniform_cloud(2, static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(greedy_cover(cloud, 0.05, Metric::parabolic));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_GreedyCover)->Arg(10000)->Arg(100000)->Unit(benchmark::kMillisecond);

void BM_DetectTangent(benchmark::State& state) {
  const auto mu = gen_flat(HomPlane::coordinate(2, {0}, false), 1.0, 1e-3);
  TangentConfig cfg;
  cfg = resolve_config(mu, cfg);
  const Point a = mu.points().point(mu.size() / 2);
  for (auto _ : state) benchmark::DoNotOptimize(detect_tangent(mu, a, cfg));
}
BENCHMARK(BM_DetectTangent)->Unit(benchmark::kMillisecond);

void BM_WeierstrassGraph(benchmark::State& state) {
  const double dt = 1.0 / static_cast<double>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(gen_weierstrass_graph({1, 0.05, kDefaultWeierstrassTerms, dt}));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_WeierstrassGraph)->Arg(10000)->Arg(100000)->Unit(benchmark::kMillisecond);

void BM_SegmentCantor(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(gen_cantor_segments({{}, 5, 0, 100000}));
}
BENCHMARK(BM_SegmentCantor)->Unit(benchmark::kMillisecond);

void BM_Defeater(benchmark::State& state) {
  DefeaterSpec spec;
  spec.dt = 1e-5;
  spec.depth = 3;
  for (auto _ : state) benchmark::DoNotOptimize(gen_regular_defeater(spec));
}
BENCHMARK(BM_Defeater)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
