#include "cgsim/dem.hpp"

#include <fmt/format.h>

#include <numeric>
#include <random>
#include <stdexcept>

#include "cgsim/dds.hpp"
#include "cgsim/spectral.hpp"

namespace cgsim {

DwaStep dwa_encode(int code, const DwaState& state) {
  if (code < 0 || code > kDwaElements) {
    throw std::invalid_argument(
        fmt::format("dwa_encode: code {} outside [0, {}]", code, kDwaElements));
  }
  DwaStep out{0, state};
  int e = state.pointer;
  for (int i = 0; i < code; ++i) {
    out.mask = static_cast<ElementMask>(out.mask | (1u << e));
    ++out.state.usage[static_cast<std::size_t>(e)];
    e = e + 1 == kDwaElements ? 0 : e + 1;
  }
  out.state.pointer = e;
  return out;
}

ElementMask thermometer_mask(int code) {
  if (code < 0 || code > kDwaElements) {
    throw std::invalid_argument(
        fmt::format("thermometer_mask: code {} outside [0, {}]", code, kDwaElements));
  }
  return static_cast<ElementMask>((1u << code) - 1u);
}

std::vector<ElementMask> encode_stream(std::span<const DsmCode> codes,
                                       Selection selection) {
  std::vector<ElementMask> masks;
  masks.reserve(codes.size());
  DwaState state;
  for (DsmCode c : codes) {
    if (selection == Selection::kDwa) {
      DwaStep step = dwa_encode(c.dac_code(), state);
      masks.push_back(step.mask);
      state = step.state;
    } else {
      masks.push_back(thermometer_mask(c.dac_code()));
    }
  }
  return masks;
}

namespace {

double selected_fraction(ElementMask mask, std::span<const double> caps,
                         double total) {
  double sum = 0.0;
  for (int i = 0; i < kDwaElements; ++i) {
    if (mask & (1u << i)) sum += caps[static_cast<std::size_t>(i)];
  }
  return sum / total;
}

}  // namespace

Waveform element_sum_dac(std::span<const ElementMask> p_masks,
                         std::span<const ElementMask> n_masks,
                         std::span<const double> caps_p,
                         std::span<const double> caps_n, double clock_hz) {
  if (p_masks.size() != n_masks.size()) {
    throw std::invalid_argument("element_sum_dac: mask stream lengths differ");
  }
  if (caps_p.size() != kDwaElements || caps_n.size() != kDwaElements) {
    throw std::invalid_argument("element_sum_dac: expected 7 elements per polarity");
  }
  const double total_p = std::accumulate(caps_p.begin(), caps_p.end(), 0.0);
  const double total_n = std::accumulate(caps_n.begin(), caps_n.end(), 0.0);
  Waveform w{clock_hz, std::vector<double>(p_masks.size())};
  for (std::size_t i = 0; i < p_masks.size(); ++i) {
    w.samples[i] = selected_fraction(p_masks[i], caps_p, total_p) -
                   selected_fraction(n_masks[i], caps_n, total_n);
  }
  return w;
}

ElementArrays draw_mismatch(double sigma, std::uint64_t seed) {
  if (sigma < 0.0) throw std::invalid_argument("mismatch sigma must be >= 0");
  ElementArrays a;
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  for (auto& c : a.p) c = 1.0 + sigma * normal(rng);
  for (auto& c : a.n) c = 1.0 + sigma * normal(rng);
  return a;
}

DemBenefit dem_benefit(double mismatch_sigma, std::uint64_t seed,
                       const DemBenefitOptions& options) {
  return dem_benefit(draw_mismatch(mismatch_sigma, seed), options);
}

DemBenefit dem_benefit(const ElementArrays& caps,
                       const DemBenefitOptions& options) {
  const SineLut lut =
      build_lut(options.lut_amp_bits, options.lut_depth, options.lut_amplitude);
  if (options.samples % static_cast<std::size_t>(lut.depth) != 0) {
    throw std::invalid_argument("dem_benefit: samples must be whole table periods");
  }
  const std::vector<int> samples = synthesize(lut, options.samples);
  const DifferentialCodes codes = modulate_differential(
      samples, options.seed_p, options.seed_n, options.dither);
  const double f0 = options.clock_hz / lut.depth;

  const auto sndr = [&](Selection sel) {
    const auto mp = encode_stream(codes.p, sel);
    const auto mn = encode_stream(codes.n, sel);
    const Waveform w = element_sum_dac(mp, mn, caps.p, caps.n, options.clock_hz);
    return windowed_sndr_db(w, f0, options.band_hz);
  };
  return {sndr(Selection::kDwa), sndr(Selection::kThermometer)};
}

}  // namespace cgsim
