#include "cgsim/dsm.hpp"

#include <fmt/format.h>

#include <stdexcept>

namespace cgsim {

LfsrStep lfsr_step(std::uint16_t state) {
  if (state == 0 || (state & ~kLfsrMask) != 0) {
    throw std::invalid_argument(
        fmt::format("lfsr_step: invalid 9-bit state {:#x}", state));
  }
  const int out = (state >> 8) & 1;
  const int feedback = out ^ ((state >> 4) & 1);
  const auto next =
      static_cast<std::uint16_t>(((state << 1) | feedback) & kLfsrMask);
  return {next, out};
}

bool mash_state_is_valid(const MashState& s) {
  const auto bit = [](int v) { return v == 0 || v == 1; };
  return s.residue1 < kMashModulus && s.residue2 < kMashModulus &&
         s.residue3 < kMashModulus && bit(s.y2_delay) && bit(s.y3_delay[0]) &&
         bit(s.y3_delay[1]) && s.lfsr != 0 && (s.lfsr & ~kLfsrMask) == 0;
}

MashStep mash_step(int x, const MashState& state, bool dither_on) {
  if (x < 0 || x >= kMashModulus) {
    throw std::invalid_argument(
        fmt::format("mash_step: input {} outside [0, {})", x, kMashModulus));
  }
  MashStep out;
  MashState& s = out.state;
  s = state;

  if (dither_on) {
    s.lfsr = lfsr_step(s.lfsr).state;
    out.dither2 = (s.lfsr >> kDitherTap2) & 1;
    out.dither3 = (s.lfsr >> kDitherTap3) & 1;
  }

  const int sum1 = s.residue1 + x;
  const int sum2 = s.residue2 + (sum1 & (kMashModulus - 1)) + out.dither2;
  const int sum3 = s.residue3 + (sum2 & (kMashModulus - 1)) + out.dither3;
  const int y1 = sum1 >> kMashBits;
  const int y2 = sum2 >> kMashBits;
  const int y3 = sum3 >> kMashBits;
  s.residue1 = static_cast<std::uint16_t>(sum1 & (kMashModulus - 1));
  s.residue2 = static_cast<std::uint16_t>(sum2 & (kMashModulus - 1));
  s.residue3 = static_cast<std::uint16_t>(sum3 & (kMashModulus - 1));

  out.code.value = y1 + (y2 - state.y2_delay) +
                   (y3 - 2 * state.y3_delay[0] + state.y3_delay[1]);
  out.carry = {y1, y2, y3};
  s.y2_delay = y2;
  s.y3_delay = {y3, state.y3_delay[0]};
  return out;
}

std::vector<DsmCode> modulate_channel(std::span<const int> samples,
                                      MashState& state, bool dither_on,
                                      Polarity polarity) {
  std::vector<DsmCode> codes;
  codes.reserve(samples.size());
  const int sign = polarity == Polarity::kPositive ? 1 : -1;
  for (int sample : samples) {
    const MashStep step = mash_step(sign * sample + kMashOffset, state, dither_on);
    codes.push_back(step.code);
    state = step.state;
  }
  return codes;
}

MashState seeded_state(std::uint16_t lfsr_seed) {
  if (lfsr_seed == 0 || (lfsr_seed & ~kLfsrMask) != 0) {
    throw std::invalid_argument(
        fmt::format("LFSR seed {} must lie in [1, 511]", lfsr_seed));
  }
  MashState s;
  s.lfsr = lfsr_seed;
  return s;
}

DifferentialCodes modulate_differential(std::span<const int> samples,
                                        std::uint16_t seed_p,
                                        std::uint16_t seed_n, bool dither_on) {
  MashState p = seeded_state(seed_p);
  MashState n = seeded_state(seed_n);
  return {modulate_channel(samples, p, dither_on, Polarity::kPositive),
          modulate_channel(samples, n, dither_on, Polarity::kNegative)};
}

}  // namespace cgsim
