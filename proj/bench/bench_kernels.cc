// Serial reference kernels against the OpenMP kernels on Example 3 sized
// coils (torus with 64 CPs against a circle with 32 CPs). Pass
// --benchmark_filter to select, COILOPT_NUM_THREADS to set the thread count.

#include <benchmark/benchmark.h>

#include "coilopt/curve.h"
#include "coilopt/em.h"
#include "coilopt/em_reference.h"
#include "coilopt/quadrature.h"

using namespace coilopt;

namespace {

struct Setup {
  QuadratureRule rule = gauss_legendre(16);
  CoilCurve torus = torus_coil(2.0, 1.0, 16, 64, 2, "C1");
  CoilCurve circle = circle_coil({0.0, 0.0, -1.0}, 3.0, {0.0, 0.0, 1.0}, 32, 2, "C2");
};

const Setup& setup() {
  static const Setup s;
  return s;
}

void BM_MutualInductance_Reference(benchmark::State& state) {
  const Setup& s = setup();
  for (auto _ : state) {
    benchmark::DoNotOptimize(reference::mutual_inductance(s.torus, s.circle, s.rule, kDefaultPermeability));
  }
}

void BM_MutualInductance_Parallel(benchmark::State& state) {
  const Setup& s = setup();
  set_threads(static_cast<int>(state.range(0)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(mutual_inductance(s.torus, s.circle, s.rule));
  }
}

void BM_Sensitivity_Reference(benchmark::State& state) {
  const Setup& s = setup();
  for (auto _ : state) {
    benchmark::DoNotOptimize(reference::mi_sensitivity(s.torus, s.circle, s.rule, kDefaultPermeability));
    benchmark::DoNotOptimize(reference::mi_sensitivity(s.circle, s.torus, s.rule, kDefaultPermeability));
  }
}

void BM_Sensitivity_Parallel(benchmark::State& state) {
  const Setup& s = setup();
  set_threads(static_cast<int>(state.range(0)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(mi_sensitivity(s.torus, s.circle, s.rule));
  }
}

void BM_Field_Reference(benchmark::State& state) {
  const Setup& s = setup();
  const Vec3 x{0.3, 0.2, 0.1};
  for (auto _ : state) {
    benchmark::DoNotOptimize(reference::magnetic_field(s.torus, 1.0, x, s.rule, kDefaultPermeability));
  }
}

void BM_Field_Parallel(benchmark::State& state) {
  const Setup& s = setup();
  set_threads(static_cast<int>(state.range(0)));
  const DiscreteCoil coil = discretize(s.torus, s.rule);
  const Vec3 x{0.3, 0.2, 0.1};
  for (auto _ : state) {
    benchmark::DoNotOptimize(magnetic_field(coil, 1.0, x));
  }
}

void thread_counts(benchmark::internal::Benchmark* b) {
  for (int t = 1; t <= max_threads(); t *= 2) b->Arg(t);
}

}  // namespace

BENCHMARK(BM_MutualInductance_Reference)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_MutualInductance_Parallel)->Apply(thread_counts)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Sensitivity_Reference)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Sensitivity_Parallel)->Apply(thread_counts)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Field_Reference)->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_Field_Parallel)->Apply(thread_counts)->Unit(benchmark::kMicrosecond);

BENCHMARK_MAIN();
