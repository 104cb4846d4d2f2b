// Serial reference vs OpenMP kernels on the same inputs.

#include <benchmark/benchmark.h>

#include "delstab/delaunay.hpp"
#include "delstab/generators.hpp"
#include "delstab/genericity.hpp"
#include "delstab/hull.hpp"
#include "delstab/metric.hpp"
#include "delstab/relaxed.hpp"

using namespace delstab;

namespace {

Exec exec_of(const benchmark::State& state) { return state.range(0) ? Exec::parallel : Exec::serial; }

const GenericityAnalysis& fixture() {
  static const GenericityAnalysis a = [] {
    const auto p = jittered_grid(10, 2, 1.0, 0.2, 3);
    const auto s = sampling_parameters(p);
    return classify_generic(p, deep_interior(p, s.epsilon), s);
  }();
  return a;
}

void BM_DelaunayBruteforce2D(benchmark::State& state) {
  const auto p = uniform_box(60, 2, 1);
  for (auto _ : state) benchmark::DoNotOptimize(delaunay_bruteforce(p, exec_of(state)));
}

void BM_DelaunayBruteforce3D(benchmark::State& state) {
  const auto p = uniform_box(40, 3, 1);
  for (auto _ : state) benchmark::DoNotOptimize(delaunay_bruteforce(p, exec_of(state)));
}

void BM_Hull3D(benchmark::State& state) {
  const auto p = uniform_box(80, 3, 2);
  for (auto _ : state) benchmark::DoNotOptimize(ConvexHull::of(p, exec_of(state)));
}

void BM_Relaxed(benchmark::State& state) {
  const auto& a = fixture();
  RelaxedOptions opt;
  opt.exec = exec_of(state);
  for (auto _ : state)
    benchmark::DoNotOptimize(relaxed_delaunay(a.points, 0.05, a.safe.selected, a.sampling.epsilon, opt));
}

void BM_MetricDelaunay(benchmark::State& state) {
  const auto& a = fixture();
  const auto d = MetricModel::pullback(DisplacementField::sinusoidal(2, 0.01, 2.0, 4),
                                       Box::around(a.points, 3 * a.sampling.epsilon));
  for (auto _ : state)
    benchmark::DoNotOptimize(metric_delaunay(a.points, d, a.safe.selected, a.sampling.epsilon, exec_of(state)));
}

}  // namespace

BENCHMARK(BM_DelaunayBruteforce2D)->ArgName("parallel")->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_DelaunayBruteforce3D)->ArgName("parallel")->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Hull3D)->ArgName("parallel")->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Relaxed)->ArgName("parallel")->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_MetricDelaunay)->ArgName("parallel")->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
