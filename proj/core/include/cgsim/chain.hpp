#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "cgsim/analog.hpp"
#include "cgsim/dds.hpp"
#include "cgsim/dem.hpp"
#include "cgsim/dsm.hpp"
#include "cgsim/spectral.hpp"

namespace cgsim {

/// Everything needed to run table -> modulator -> DWA -> DAC -> LPF -> V-I.
struct ChainConfig {
  int lut_amp_bits = 9;
  int lut_depth = 128;
  int lut_amplitude = 255;
  bool dither = true;
  std::uint16_t dsm_seed_p = 0x1A5;
  std::uint16_t dsm_seed_n = 0x0F3;
  bool dwa = true;
  AnalogConfig analog;
  double load_ohm = 1e3;
  int periods = 64;         // analysed record, whole periods of f0
  int warmup_periods = 8;   // discarded while the filter settles
  double band_hz = 400e3;

  double fundamental_hz() const noexcept { return analog.clock_hz / lut_depth; }
  std::size_t cycles() const noexcept {
    return static_cast<std::size_t>(warmup_periods + periods) *
           static_cast<std::size_t>(lut_depth);
  }
};

inline constexpr int kMinPeriods = 16;

/// Throws ParameterError naming the first offending key.
void validate(const ChainConfig& cfg);

struct DigitalStreams {
  SineLut lut;
  DifferentialCodes codes;
  std::vector<ElementMask> p_masks;
  std::vector<ElementMask> n_masks;
};

/// Table, modulators and element selection for warmup + periods cycles.
DigitalStreams run_digital(const ChainConfig& cfg);

struct ChainResult {
  DigitalStreams digital;
  Waveform dac;        // differential volts, analysed window only
  Waveform filtered;   // LPF output, analysed window only
  CurrentOutput output;
  Analysis dac_analysis;
  Analysis cg_analysis;
};

ChainResult run_chain(const ChainConfig& cfg);

/// Digital chain into an ideal (matched, instantaneous) element-sum DAC,
/// one sample per clock, analysed window only.
Waveform ideal_dac_output(const ChainConfig& cfg);

struct ResetComparison {
  Analysis full_period;   // current output, FULL_PERIOD
  Analysis half_period;   // current output, HALF_PERIOD
  double noise_delta_db = 0.0;  // full minus half, integrated in band
};

/// Runs both reset modes with otherwise identical config and seeds.
ResetComparison compare_reset(const ChainConfig& cfg);

struct LoadPoint {
  double load_ohm = 0.0;
  double amplitude_a = 0.0;     // delivered fundamental, peak
  double driving_error = 0.0;
};

/// Delivered amplitude and driving error per load. Loads must be
/// nonnegative and ascending.
std::vector<LoadPoint> sweep_load(const ChainConfig& cfg,
                                  std::span<const double> loads_ohm);

}  // namespace cgsim
