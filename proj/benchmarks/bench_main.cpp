#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "hyperquad/lorder.hpp"
#include "hyperquad/nnindex.hpp"
#include "hyperquad/sampling.hpp"

using namespace hyperquad;

namespace {

void BM_LOrderCompare(benchmark::State& state) {
  const auto d = static_cast<std::size_t>(state.range(0));
  const std::vector<Point> pts = sample_ball(d, 1024, 5.0, 1);
  std::vector<FixedVector> keys;
  for (const Point& p : pts) keys.push_back(transform(p));
  std::size_t i = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(compare_transformed(keys[i % 1024], keys[(i * 7 + 3) % 1024]));
    ++i;
  }
}
BENCHMARK(BM_LOrderCompare)->Arg(2)->Arg(3)->Arg(8);

void BM_Build(benchmark::State& state) {
  const std::vector<Point> pts = sample_ball(3, static_cast<std::size_t>(state.range(0)), 5.0, 2);
  for (auto _ : state) benchmark::DoNotOptimize(NeighborIndex::build(pts, 4.0));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_Build)->RangeMultiplier(4)->Range(1 << 10, 1 << 16)->Complexity(benchmark::oNLogN)->Unit(benchmark::kMillisecond);

void BM_Nearest(benchmark::State& state) {
  const std::vector<Point> pts = sample_ball(2, static_cast<std::size_t>(state.range(0)), 5.0, 3);
  const NeighborIndex index = NeighborIndex::build(pts, 4.0);
  const std::vector<Point> queries = sample_ball(2, 1024, 5.0, 4);
  std::size_t i = 0;
  for (auto _ : state) benchmark::DoNotOptimize(index.nearest(queries[i++ % queries.size()]));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_Nearest)->RangeMultiplier(4)->Range(1 << 10, 1 << 18)->Complexity(benchmark::oLogN);

void BM_InsertRemove(benchmark::State& state) {
  const std::vector<Point> pts = sample_ball(3, 1 << 14, 5.0, 5);
  NeighborIndex index = NeighborIndex::build(pts, 4.0);
  const std::vector<Point> extra = sample_ball(3, 1024, 5.0, 6);
  std::size_t i = 0;
  for (auto _ : state) {
    const Point& p = extra[i++ % extra.size()];
    index.insert(p);
    index.remove(p);
  }
}
BENCHMARK(BM_InsertRemove);

}  // namespace

BENCHMARK_MAIN();
