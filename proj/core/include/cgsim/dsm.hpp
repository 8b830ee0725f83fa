#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <vector>

namespace cgsim {

inline constexpr int kMashBits = 9;
inline constexpr int kMashModulus = 1 << kMashBits;  // 512
/// Added to signed table codes to form the unsigned modulator input.
inline constexpr int kMashOffset = kMashModulus / 2;
inline constexpr int kDsmMin = -3;
inline constexpr int kDsmMax = 4;

// 9-bit Fibonacci LFSR, x^9 + x^5 + 1 (feedback taps at bits 8 and 4).
inline constexpr std::uint16_t kLfsrMask = 0x1FF;
inline constexpr int kLfsrPeriod = 511;
// State bits used as dither for the stage-2 and stage-3 inputs.
inline constexpr int kDitherTap2 = 0;
inline constexpr int kDitherTap3 = 4;

struct LfsrStep {
  std::uint16_t state = 1;
  int bit = 0;  // bit shifted out of the register
};

/// One shift of the dither generator. Throws std::invalid_argument for a
/// zero state or one with bits above bit 8.
LfsrStep lfsr_step(std::uint16_t state);

/// 8-level modulator output, y1 + (1-z^-1) y2 + (1-z^-1)^2 y3.
struct DsmCode {
  int value = 0;  // in [kDsmMin, kDsmMax]

  /// Unit-element count 0..7; DAC code 0 is the all-off (reset) state.
  int dac_code() const noexcept { return value - kDsmMin; }
  friend bool operator==(DsmCode, DsmCode) = default;
};

/// Register state of the three cascaded error-feedback accumulators and
/// the noise-cancellation combiner.
struct MashState {
  std::uint16_t residue1 = 0;
  std::uint16_t residue2 = 0;
  std::uint16_t residue3 = 0;
  int y2_delay = 0;                 // y2[n-1]
  std::array<int, 2> y3_delay{};    // y3[n-1], y3[n-2]
  std::uint16_t lfsr = 1;

  friend bool operator==(const MashState&, const MashState&) = default;
};

/// True when residues are 9-bit, delays are bits and the LFSR is nonzero.
bool mash_state_is_valid(const MashState& s);

struct MashStep {
  DsmCode code;
  MashState state;
  // Per-stage carries and the dither bits applied this cycle; exposed so
  // tests can check the reconstruction identity cycle by cycle.
  std::array<int, 3> carry{};
  int dither2 = 0;
  int dither3 = 0;
};

/// One clock of the modulator. `x` is the unsigned 9-bit input. Stage i
/// adds its input (stage 1: x, stage i+1: residue_i) plus, for stages 2 and
/// 3 when dither is on, one LFSR bit at the LSB; the carry out of the 9-bit
/// accumulator is y_i and the residue is kept. The differentiating combiner
/// then shapes the stage-2 dither to first order and the stage-3 dither to
/// second order, so that
///   512*Y = x + (1-z^-1) d2 + (1-z^-1)^2 d3 - (1-z^-1)^3 r3.
/// Throws std::invalid_argument when x is outside [0, 512).
MashStep mash_step(int x, const MashState& state, bool dither_on);

enum class Polarity { kPositive, kNegative };

/// Modulates one polarity of a signed sample stream: the P channel sees
/// +sample + 256, the N channel -sample + 256. `state` is advanced in place.
std::vector<DsmCode> modulate_channel(std::span<const int> samples,
                                      MashState& state, bool dither_on,
                                      Polarity polarity);

/// Initial state with the given LFSR seed and cleared accumulators.
MashState seeded_state(std::uint16_t lfsr_seed);

struct DifferentialCodes {
  std::vector<DsmCode> p;
  std::vector<DsmCode> n;
};

/// Both polarities with independent modulator states seeded separately.
DifferentialCodes modulate_differential(std::span<const int> samples,
                                        std::uint16_t seed_p,
                                        std::uint16_t seed_n, bool dither_on);

}  // namespace cgsim
