#include <benchmark/benchmark.h>

#include <cmath>
#include <numbers>
#include <random>

#include "cgsim/analog.hpp"
#include "cgsim/chain.hpp"
#include "cgsim/dds.hpp"
#include "cgsim/dem.hpp"
#include "cgsim/dsm.hpp"
#include "cgsim/spectral.hpp"

namespace {

std::vector<cgsim::DsmCode> sine_codes(std::size_t n) {
  const auto lut = cgsim::build_lut(9, 128, 255);
  return cgsim::modulate_differential(cgsim::synthesize(lut, n), 0x1A5, 0x0F3, true).p;
}

void BM_MashStep(benchmark::State& state) {
  cgsim::MashState s = cgsim::seeded_state(0x1A5);
  int x = 0;
  for (auto _ : state) {
    const auto step = cgsim::mash_step(x, s, true);
    s = step.state;
    x = (x + 37) & 511;
    benchmark::DoNotOptimize(step.code);
  }
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_MashStep);

void BM_DwaEncode(benchmark::State& state) {
  cgsim::DwaState s;
  int c = 0;
  for (auto _ : state) {
    const auto step = cgsim::dwa_encode(c, s);
    s = step.state;
    c = (c + 3) & 7;
    benchmark::DoNotOptimize(step.mask);
  }
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_DwaEncode);

void BM_EncodeStream(benchmark::State& state) {
  const auto codes = sine_codes(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(cgsim::encode_stream(codes, cgsim::Selection::kDwa));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_EncodeStream)->Arg(1 << 16);

void BM_DacWaveform(benchmark::State& state) {
  const auto masks = cgsim::encode_stream(sine_codes(static_cast<std::size_t>(state.range(0))),
                                          cgsim::Selection::kDwa);
  const cgsim::AnalogConfig cfg;
  for (auto _ : state) {
    benchmark::DoNotOptimize(cgsim::dac_waveform(masks, masks, cfg));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_DacWaveform)->Arg(1 << 13)->Unit(benchmark::kMillisecond);

void BM_Analyze(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  std::mt19937_64 rng(1);
  std::normal_distribution<double> g(0.0, 1e-4);
  cgsim::Waveform w{2.56e6, std::vector<double>(n)};
  for (std::size_t i = 0; i < n; ++i) {
    w.samples[i] = std::sin(2.0 * std::numbers::pi * static_cast<double>(i) / 128.0) + g(rng);
  }
  for (auto _ : state) {
    benchmark::DoNotOptimize(cgsim::analyze(w, 20e3, 400e3));
  }
}
BENCHMARK(BM_Analyze)->Arg(1 << 13)->Arg(1 << 16)->Arg(1 << 19)->Unit(benchmark::kMillisecond);

void BM_RunChain(benchmark::State& state) {
  cgsim::ChainConfig cfg;
  cfg.periods = static_cast<int>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(cgsim::run_chain(cfg));
  }
}
BENCHMARK(BM_RunChain)->Arg(64)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
