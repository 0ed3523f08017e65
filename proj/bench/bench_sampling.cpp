#include <cmath>

#include <benchmark/benchmark.h>

#include "kbend/builtin.hpp"
#include "kbend/geometry.hpp"
#include "kbend/sampling.hpp"
#include "kbend/weierstrass.hpp"

namespace {

using namespace kbend;

// Bending residual of T = fbar over the m4r5 chart; one jet pair per point.
void run(benchmark::State& state, Exec exec) {
  const WeierstrassSeed seed = m4r5_seed();
  const ImmersionChart f = immersion_f(seed);
  const ImmersionChart t = conjugate_fbar(seed);
  const auto pts = random_samples(f.box(), static_cast<std::size_t>(state.range(0)), 11);
  const PointKernel kernel = [&](const Vec& p) {
    const PointFrame fr = point_frame(f.jet(p));
    return std::abs(fr.A.trace()) + t.jet(p).d1.norm();
  };
  for (auto _ : state) benchmark::DoNotOptimize(map_points(pts, kernel, exec));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_serial(benchmark::State& s) { run(s, Exec::serial); }
void BM_parallel(benchmark::State& s) { run(s, Exec::parallel); }

}  // namespace

BENCHMARK(BM_serial)->Arg(256)->Arg(2048)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_parallel)->Arg(256)->Arg(2048)->Unit(benchmark::kMillisecond);
BENCHMARK_MAIN();
