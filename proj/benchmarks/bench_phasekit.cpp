#include <benchmark/benchmark.h>

#include <phasekit/phasekit.hpp>

using namespace phasekit;

// Husimi density on the auto grid (spacing 0.1 keeps one iteration short).
static void BM_Husimi(benchmark::State& state) {
  const int D = static_cast<int>(state.range(0));
  const FrameSpec f = FrameSpec::coherent(OscParams{}, D);
  const PhaseGrid g = auto_grid(f, 0.1);
  Rng rng(1);
  const CMatrix W = random_density(D, trusted_block(D), rng);
  for (auto _ : state) benchmark::DoNotOptimize(husimi(W, f, g).values.data());
  state.counters["points"] = static_cast<double>(g.size());
}
BENCHMARK(BM_Husimi)->Arg(8)->Arg(16)->Arg(32)->Unit(benchmark::kMillisecond);

// Exact displacement block from the Laguerre closed form.
static void BM_DisplacementBlock(benchmark::State& state) {
  const int D = static_cast<int>(state.range(0));
  const OscParams P;
  CMatrix out;
  double q = 0.3;
  for (auto _ : state) {
    displacement_block(q, -0.7, P, D, D, out);
    benchmark::DoNotOptimize(out.data());
    q += 1e-6;
  }
}
BENCHMARK(BM_DisplacementBlock)->Arg(16)->Arg(32)->Arg(48);

// Matrix-exponential route, for comparison.
static void BM_DisplacementExp(benchmark::State& state) {
  const int D = static_cast<int>(state.range(0));
  const DisplacementBuilder build(OscParams{}, D);
  for (auto _ : state) benchmark::DoNotOptimize(build(0.3, -0.7).matrix.data());
}
BENCHMARK(BM_DisplacementExp)->Arg(16)->Arg(32)->Arg(48);

static void BM_Resolution(benchmark::State& state) {
  const int D = static_cast<int>(state.range(0));
  const FrameSpec f = FrameSpec::coherent(OscParams{}, D);
  const PhaseGrid g = auto_grid(f, 0.05);
  for (auto _ : state) benchmark::DoNotOptimize(resolution_check(f, g, trusted_block(D)).defect);
}
BENCHMARK(BM_Resolution)->Arg(16)->Unit(benchmark::kMillisecond);

static void BM_Reconstruct(benchmark::State& state) {
  const int D = static_cast<int>(state.range(0));
  const FrameSpec f = FrameSpec::coherent(OscParams{}, D);
  const PhaseGrid g = auto_grid(f, 0.1);
  Rng rng(2);
  const DensityField rho = husimi(random_density(D, D, rng), f, g);
  for (auto _ : state) benchmark::DoNotOptimize(reconstruct_state(rho, f).W.data());
}
BENCHMARK(BM_Reconstruct)->Arg(4)->Arg(6)->Unit(benchmark::kMillisecond);
BENCHMARK_MAIN();
