#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "cgsim/dsm.hpp"
#include "cgsim/waveform.hpp"

namespace cgsim {

inline constexpr int kDwaElements = 7;

/// Bit i set selects unit element i.
using ElementMask = std::uint8_t;

/// Data-weighted-averaging rotation state for one polarity.
struct DwaState {
  int pointer = 0;  // next element to select, in [0, kDwaElements)
  std::array<std::uint64_t, kDwaElements> usage{};
};

struct DwaStep {
  ElementMask mask = 0;
  DwaState state;
};

/// Selects `code` elements starting at the pointer and advances the pointer
/// by `code` (mod 7). Throws std::invalid_argument for code outside [0, 7].
DwaStep dwa_encode(int code, const DwaState& state);

/// Fixed thermometer selection, elements 0..code-1.
ElementMask thermometer_mask(int code);

enum class Selection { kDwa, kThermometer };

/// Element masks for a modulator code stream (dac_code() per cycle).
std::vector<ElementMask> encode_stream(std::span<const DsmCode> codes,
                                       Selection selection);

/// Static, instantaneous unit-element DAC: per clock, P minus N of
/// (sum of selected caps / sum of all caps). One sample per clock.
Waveform element_sum_dac(std::span<const ElementMask> p_masks,
                         std::span<const ElementMask> n_masks,
                         std::span<const double> caps_p,
                         std::span<const double> caps_n, double clock_hz);

/// Relative unit-element sizes 1 + e_i, e_i ~ N(0, sigma^2), for both
/// polarities, drawn from `seed`.
struct ElementArrays {
  std::array<double, kDwaElements> p{};
  std::array<double, kDwaElements> n{};
};
ElementArrays draw_mismatch(double sigma, std::uint64_t seed);

struct DemBenefitOptions {
  std::size_t samples = 1u << 16;  // whole LUT periods
  double clock_hz = 2.56e6;
  double band_hz = 40e3;           // SNDR integration band
  int lut_amp_bits = 9;
  int lut_depth = 128;
  int lut_amplitude = 255;
  std::uint16_t seed_p = 0x1A5;
  std::uint16_t seed_n = 0x0F3;
  bool dither = true;
};

struct DemBenefit {
  double snr_with_dwa_db = 0.0;
  double snr_fixed_db = 0.0;
};

/// Runs the digital chain (table, modulator, dither) into a mismatched
/// element-sum DAC twice, with DWA and with fixed thermometer selection,
/// and returns the Hann-windowed in-band SNDR of each.
DemBenefit dem_benefit(double mismatch_sigma, std::uint64_t seed,
                       const DemBenefitOptions& options = {});

/// As above with explicit element arrays.
DemBenefit dem_benefit(const ElementArrays& caps,
                       const DemBenefitOptions& options = {});

}  // namespace cgsim
