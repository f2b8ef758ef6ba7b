#include <benchmark/benchmark.h>

#include <vector>

#include "qdm/analysis.hpp"
#include "qdm/doppler.hpp"
#include "qdm/fft.hpp"
#include "qdm/modulation.hpp"

using namespace qdm;

namespace {

const WaveConfig kWave(1.0);
const ArrayConfig kArray16(kWave, 16, 2.0);
const PskConfig kQpsk(4, 1.0);

void BM_SelectElement(benchmark::State& state) {
  const ArrayConfig array(kWave, static_cast<int>(state.range(0)), 2.0);
  double target = 0.0;
  for (auto _ : state) {
    target += 0.1;
    benchmark::DoNotOptimize(select_element(Phase(target), array));
  }
}
BENCHMARK(BM_SelectElement)->Arg(16)->Arg(128);

void BM_ModulateJoint(benchmark::State& state) {
  int sym = 0;
  for (auto _ : state) {
    sym = (sym + 1) & 3;
    benchmark::DoNotOptimize(modulate_joint(sym, 3 - sym, kQpsk, kQpsk, kArray16));
  }
}
BENCHMARK(BM_ModulateJoint);

void BM_SteppedSweepSpectrum(benchmark::State& state) {
  const ArrayConfig array(kWave, 64, 2.0);
  const SweepConfig cfg(array, 1e-3, 8, 8);
  for (auto _ : state) {
    const SweepWaveform w = stepped_sweep_waveform(cfg);
    benchmark::DoNotOptimize(
        estimate_doppler_shift(w, static_cast<int>(next_pow2(w.samples.size()))));
  }
}
BENCHMARK(BM_SteppedSweepSpectrum);

void BM_SerPoint(benchmark::State& state) {
  const std::vector<double> grid = {8.0};
  for (auto _ : state) {
    benchmark::DoNotOptimize(ser_sweep(kArray16, kQpsk, kQpsk, grid, state.range(0), 42));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_SerPoint)->Arg(1000)->Arg(10000);

}  // namespace

BENCHMARK_MAIN();
