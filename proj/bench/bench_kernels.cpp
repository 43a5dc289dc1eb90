// Serial reference vs OpenMP kernels. Both paths return identical values;
// only wall time differs.
#include <benchmark/benchmark.h>

#include "peakheight/cosine.hpp"
#include "peakheight/rmt.hpp"
#include "peakheight/validate/covariance.hpp"
#include "peakheight/validate/simulate.hpp"

namespace pn = peakheight::numerics;
using peakheight::Execution;

namespace {

Execution mode(const benchmark::State& state) { return state.range(0) ? Execution::kParallel : Execution::kSerial; }

void BM_CosineMc(benchmark::State& state) {
  const pn::RandomStream s(1, 0);
  for (auto _ : state) benchmark::DoNotOptimize(peakheight::cosine::peak_tail_cosine_mc(6, 0.5, 200000, s, mode(state)));
}

void BM_GoiDraw(benchmark::State& state) {
  const pn::RandomStream s(2, 0);
  for (auto _ : state) {
    benchmark::DoNotOptimize(peakheight::rmt::GoiEigenSample::draw(peakheight::rmt::GoiCovParam(-0.2, 4), 50000, s,
                                                                  peakheight::rmt::GoiSampling::kAuto, mode(state)));
  }
}

void BM_AnisoTail(benchmark::State& state) {
  const auto spec = peakheight::rmt::AnisoSpec::with_kappa(3, 0.9);
  const pn::RandomStream s(3, 0);
  for (auto _ : state) {
    const peakheight::rmt::AnisoPeakHeight a(spec, s, 50000, mode(state));
    benchmark::DoNotOptimize(a.tail(0.5));
  }
}

void BM_PathSimulation(benchmark::State& state) {
  namespace val = peakheight::validate;
  const auto grid = val::Grid1D::covering(0.0, 10.0, 0.01);
  const val::PathSimulator1D sim(val::squared_exponential_1d(), grid);
  const pn::RandomStream base(4, 0);
  for (auto _ : state) {
    auto sums = peakheight::run_chunks<double>(
        peakheight::kDefaultChunks,
        [&](std::size_t k) {
          pn::RandomStream s = base.substream(static_cast<std::uint32_t>(k));
          double acc = 0.0;
          for (int r = 0; r < 4; ++r) acc += sim.draw(s)[500];
          return acc;
        },
        mode(state));
    benchmark::DoNotOptimize(sums);
  }
}

}  // namespace

BENCHMARK(BM_CosineMc)->Arg(0)->Arg(1)->ArgName("parallel")->Unit(benchmark::kMillisecond);
BENCHMARK(BM_GoiDraw)->Arg(0)->Arg(1)->ArgName("parallel")->Unit(benchmark::kMillisecond);
BENCHMARK(BM_AnisoTail)->Arg(0)->Arg(1)->ArgName("parallel")->Unit(benchmark::kMillisecond);
BENCHMARK(BM_PathSimulation)->Arg(0)->Arg(1)->ArgName("parallel")->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
