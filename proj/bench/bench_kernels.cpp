#include <benchmark/benchmark.h>

#include "qfp/analytic.hpp"
#include "qfp/counting.hpp"
#include "qfp/expsums.hpp"
#include "qfp/localarith.hpp"
#include "qfp/verify.hpp"

using namespace qfp;

// Arg 0 selects the serial reference, arg 1 the OpenMP kernel.
namespace {

Exec exec_of(const benchmark::State& s) { return s.range(0) ? Exec::Parallel : Exec::Serial; }

void BM_CountPointsNaive(benchmark::State& s) {
  const Pencil p = standard_pencil("p5");
  LocalOptions o;
  o.exec = exec_of(s);
  for (auto _ : s) benchmark::DoNotOptimize(count_points_naive(p, {2, 3}, 3, 2, o));
}

void BM_RepresentationTable(benchmark::State& s) {
  const Pencil p = standard_pencil("p5");
  for (auto _ : s) benchmark::DoNotOptimize(representation_table(p, 4, WeightSpec{}, {}, exec_of(s)).mass);
}

void BM_MinorArcSum(benchmark::State& s) {
  const Pencil p = standard_pencil("toy2");
  const std::vector<long> l = {1, 0, 2, 1};
  for (auto _ : s) benchmark::DoNotOptimize(minor_arc_sum(p, l, 12, {}, exec_of(s)).value);
}

void BM_EvalGenerating(benchmark::State& s) {
  const Pencil p = standard_pencil("p5");
  const std::array<double, 2> alpha{0.31, 0.07};
  for (auto _ : s) benchmark::DoNotOptimize(eval_generating(p, alpha, 5, WeightSpec{}, {}, exec_of(s)));
}

void BM_SingularIntegralThickened(benchmark::State& s) {
  const Pencil p = standard_pencil("p5");
  ThickenedOptions th;
  th.directions = 1L << 10;
  th.shifts = 4;
  for (auto _ : s)
    benchmark::DoNotOptimize(singular_integral_thickened(p, {0.4, 1.0}, WeightSpec{}, th, exec_of(s)).estimate);
}

}  // namespace

BENCHMARK(BM_CountPointsNaive)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_RepresentationTable)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_MinorArcSum)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_EvalGenerating)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_SingularIntegralThickened)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
