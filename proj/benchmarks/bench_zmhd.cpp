#include <benchmark/benchmark.h>

#include <cmath>

#include "zmhd/momentum.hpp"
#include "zmhd/picard.hpp"
#include "zmhd/presets.hpp"
#include "zmhd/spectral.hpp"
#include "zmhd/transport.hpp"

using namespace zmhd;

namespace {

VectorField swirl(const Grid& g) {
  return VectorField::from_function(g, [](const Vec3& x) {
    return Vec3{0.3 * std::sin(x[1]) + 0.1, 0.2 * std::sin(x[2]), 0.25 * std::cos(x[0])};
  });
}

}  // namespace

static void SpectralVectorGradient(benchmark::State& state) {
  const Grid g = Grid::cube(static_cast<int>(state.range(0)));
  const VectorField u = swirl(g);
  for (auto _ : state) benchmark::DoNotOptimize(spectral::vector_gradient(u));
  state.SetComplexityN(static_cast<std::int64_t>(g.size()));
}
BENCHMARK(SpectralVectorGradient)->RangeMultiplier(2)->Range(8, 32)->Unit(benchmark::kMicrosecond)->Complexity();

static void SplineBuild(benchmark::State& state) {
  const Grid g = Grid::cube(static_cast<int>(state.range(0)));
  const VectorField u = swirl(g);
  for (auto _ : state) benchmark::DoNotOptimize(VectorSpline(u));
}
BENCHMARK(SplineBuild)->RangeMultiplier(2)->Range(8, 32)->Unit(benchmark::kMicrosecond);

static void SplineEvaluate(benchmark::State& state) {
  const Grid g = Grid::cube(16);
  const Spline s(swirl(g)[0]);
  Vec3 x{0.1, 0.2, 0.3};
  for (auto _ : state) {
    benchmark::DoNotOptimize(s.value(x));
    x[0] += 0.013;
  }
}
BENCHMARK(SplineEvaluate);

static void BacktraceStep(benchmark::State& state) {
  const Grid g = Grid::cube(static_cast<int>(state.range(0)));
  const VelocityHistory hist({swirl(g), swirl(g) * 1.01}, 1e-2);
  TraceOptions opts;
  opts.propagator = state.range(1) != 0;
  for (auto _ : state) benchmark::DoNotOptimize(backtrace(hist, 1e-2, 0.0, opts));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(g.size()));
}
BENCHMARK(BacktraceStep)->ArgsProduct({{8, 16}, {0, 1}})->Unit(benchmark::kMillisecond);

static void MomentumCg(benchmark::State& state) {
  const Grid g = Grid::cube(static_cast<int>(state.range(0)));
  const State s0 = make_preset("small-data", g);
  const MomentumOperator op(s0.rho, 1e-3, 1.0, 0.0);
  const VectorField rhs = op.apply(swirl(g));
  const bool precondition = state.range(1) != 0;
  int iterations = 0;
  for (auto _ : state) {
    const MomentumSolve sol = solve_momentum_step(op, rhs, 1e-10, 500, nullptr, precondition);
    iterations = sol.iterations;
    benchmark::DoNotOptimize(sol.u);
  }
  state.counters["cg_iterations"] = iterations;
}
BENCHMARK(MomentumCg)->ArgsProduct({{8, 16}, {0, 1}})->Unit(benchmark::kMillisecond);

static void PicardSweep(benchmark::State& state) {
  const Grid g = Grid::cube(static_cast<int>(state.range(0)));
  const State s0 = make_preset("small-data", g);
  PicardConfig p;
  p.T = 0.01;
  p.dt = 1e-3;
  const std::vector<VectorField> ubar(11, s0.u);
  for (auto _ : state) benchmark::DoNotOptimize(sweep(ubar, s0, PhysicsConfig{}, p));
}
BENCHMARK(PicardSweep)->Arg(8)->Arg(16)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
