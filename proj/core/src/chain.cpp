#include "cgsim/chain.hpp"

#include <fmt/format.h>

#include <array>
#include <cmath>
#include <stdexcept>

#include "cgsim/error.hpp"

namespace cgsim {

void validate(const ChainConfig& cfg) {
  if (cfg.lut_depth <= 0 || cfg.lut_depth % 4 != 0) {
    throw ParameterError("lut_depth", "must be a positive multiple of 4");
  }
  if (cfg.lut_amp_bits < 2 || cfg.lut_amp_bits > kMashBits) {
    throw ParameterError("lut_amp_bits",
                         fmt::format("must lie in [2, {}] to fit the modulator input", kMashBits));
  }
  if (cfg.lut_amplitude < 0 || cfg.lut_amplitude > (1 << (cfg.lut_amp_bits - 1)) - 1) {
    throw ParameterError("lut_amplitude", "overflows lut_amp_bits");
  }
  if (cfg.dsm_seed_p == 0 || cfg.dsm_seed_p > kLfsrMask) {
    throw ParameterError("dsm_seed_p", "must lie in [1, 511]");
  }
  if (cfg.dsm_seed_n == 0 || cfg.dsm_seed_n > kLfsrMask) {
    throw ParameterError("dsm_seed_n", "must lie in [1, 511]");
  }
  validate(cfg.analog);
  if (cfg.load_ohm < 0.0 || !std::isfinite(cfg.load_ohm)) {
    throw ParameterError("load_ohm", "must be >= 0");
  }
  if (cfg.periods < kMinPeriods) {
    throw ParameterError("periods", fmt::format("must be >= {}", kMinPeriods));
  }
  if (cfg.warmup_periods < 0) throw ParameterError("warmup_periods", "must be >= 0");
  const double f0 = cfg.fundamental_hz();
  const double bin = f0 / cfg.periods;
  if (!(cfg.band_hz >= bin) || cfg.band_hz >= cfg.analog.clock_hz / 2.0) {
    throw ParameterError("band_hz", fmt::format("must lie in [{}, {}) Hz", bin,
                                                cfg.analog.clock_hz / 2.0));
  }
  if (kMaxHarmonic * f0 >= cfg.analog.clock_hz / 2.0) {
    throw ParameterError("lut_depth", "harmonic 20 of the output lies above Nyquist");
  }
}

DigitalStreams run_digital(const ChainConfig& cfg) {
  DigitalStreams d;
  d.lut = build_lut(cfg.lut_amp_bits, cfg.lut_depth, cfg.lut_amplitude);
  const std::vector<int> samples = synthesize(d.lut, cfg.cycles());
  d.codes = modulate_differential(samples, cfg.dsm_seed_p, cfg.dsm_seed_n, cfg.dither);
  const Selection sel = cfg.dwa ? Selection::kDwa : Selection::kThermometer;
  d.p_masks = encode_stream(d.codes.p, sel);
  d.n_masks = encode_stream(d.codes.n, sel);
  return d;
}

namespace {

std::size_t window_first(const ChainConfig& cfg, std::size_t per_cycle) {
  return static_cast<std::size_t>(cfg.warmup_periods) *
         static_cast<std::size_t>(cfg.lut_depth) * per_cycle;
}

std::size_t window_size(const ChainConfig& cfg, std::size_t per_cycle) {
  return static_cast<std::size_t>(cfg.periods) *
         static_cast<std::size_t>(cfg.lut_depth) * per_cycle;
}

}  // namespace

ChainResult run_chain(const ChainConfig& cfg) {
  validate(cfg);
  ChainResult r;
  r.digital = run_digital(cfg);
  const Waveform dac_full = dac_waveform(r.digital.p_masks, r.digital.n_masks, cfg.analog);
  const Waveform lpf_full = lpf_apply(dac_full, cfg.analog);

  const auto per_cycle = static_cast<std::size_t>(cfg.analog.sub_steps);
  const std::size_t first = window_first(cfg, per_cycle);
  const std::size_t count = window_size(cfg, per_cycle);
  r.dac = slice(dac_full, first, count);
  r.filtered = slice(lpf_full, first, count);
  r.output = v_to_i(r.filtered, cfg.load_ohm, cfg.analog);

  const double f0 = cfg.fundamental_hz();
  r.dac_analysis = analyze(r.dac, f0, cfg.band_hz);
  r.cg_analysis = analyze(r.output.current, f0, cfg.band_hz);
  return r;
}

Waveform ideal_dac_output(const ChainConfig& cfg) {
  validate(cfg);
  const DigitalStreams d = run_digital(cfg);
  std::array<double, kDwaElements> unit{};
  unit.fill(1.0);
  const Waveform w =
      element_sum_dac(d.p_masks, d.n_masks, unit, unit, cfg.analog.clock_hz);
  return slice(w, window_first(cfg, 1), window_size(cfg, 1));
}

ResetComparison compare_reset(const ChainConfig& cfg) {
  ChainConfig full = cfg;
  full.analog.reset_mode = ResetMode::kFullPeriod;
  ChainConfig half = cfg;
  half.analog.reset_mode = ResetMode::kHalfPeriod;
  ResetComparison c;
  c.full_period = run_chain(full).cg_analysis;
  c.half_period = run_chain(half).cg_analysis;
  c.noise_delta_db =
      noise_floor_delta(c.full_period.spectrum, c.half_period.spectrum, cfg.band_hz);
  return c;
}

std::vector<LoadPoint> sweep_load(const ChainConfig& cfg,
                                  std::span<const double> loads_ohm) {
  for (std::size_t i = 0; i < loads_ohm.size(); ++i) {
    if (!(loads_ohm[i] >= 0.0)) {
      throw ParameterError("loads", fmt::format("load {} is negative", loads_ohm[i]));
    }
    if (i > 0 && loads_ohm[i] < loads_ohm[i - 1]) {
      throw ParameterError("loads", "loads must be ascending");
    }
  }
  // The voltage chain does not see the load; run it once.
  ChainConfig base = cfg;
  base.load_ohm = 0.0;
  const ChainResult r = run_chain(base);
  const double f0 = cfg.fundamental_hz();

  std::vector<LoadPoint> points;
  points.reserve(loads_ohm.size());
  for (double load : loads_ohm) {
    const CurrentOutput out = v_to_i(r.filtered, load, cfg.analog);
    const Analysis a = analyze(out.current, f0, cfg.band_hz);
    points.push_back({load, a.metrics.fundamental_amplitude, out.driving_error});
  }
  return points;
}

}  // namespace cgsim
