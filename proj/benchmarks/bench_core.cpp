#include <benchmark/benchmark.h>

#include "rough1d/corrected_integral.hpp"
#include "rough1d/levy_area.hpp"
#include "rough1d/paths.hpp"
#include "rough1d/rde_solver.hpp"

using namespace rough1d;

namespace {

void BM_GenFbm(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  std::uint64_t seed = 0;
  gen_fbm(0.45, n, seed);  // factor once outside the loop
  for (auto _ : state) benchmark::DoNotOptimize(gen_fbm(0.45, n, ++seed));
}
BENCHMARK(BM_GenFbm)->Arg(256)->Arg(1024)->Unit(benchmark::kMillisecond);

void BM_PlAreaPair(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const Curve curve(gen_fbm(0.45, n, 1), gen_fbm(0.45, n, 2));
  const auto area = pl_area(curve, 2);
  for (auto _ : state) benchmark::DoNotOptimize(area(0, n, 2, 0.1));
}
BENCHMARK(BM_PlAreaPair)->Arg(256)->Arg(4096);

void BM_CorrectedApprox(benchmark::State& state) {
  const int n = 4096;
  const int m = static_cast<int>(state.range(0));
  const Curve curve(sample_smooth("sine", n), sample_smooth("sine-shifted", n));
  const auto area = pl_area(curve, 2 * m - 2);
  const auto f = SmoothFunction::sine();
  for (auto _ : state) benchmark::DoNotOptimize(corrected_approx(f, curve, area, m, 8).value);
}
BENCHMARK(BM_CorrectedApprox)->Arg(1)->Arg(2)->Unit(benchmark::kMillisecond);

void BM_Solve(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const RdeProblem problem{sample_smooth("sine", n), parse_smooth_function("2+sin"), parse_smooth_function("cos"),
                           0.5, 0.4};
  for (auto _ : state) benchmark::DoNotOptimize(solve(problem).y);
}
BENCHMARK(BM_Solve)->Arg(256)->Arg(1024)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
