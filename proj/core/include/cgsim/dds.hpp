#pragma once

#include <cstddef>
#include <iosfwd>
#include <vector>

namespace cgsim {

/// Quantized single-period sine table.
///
/// `table[k] = round(amplitude * sin(2*pi*k/depth))`, rounded half away
/// from zero. Only the first quarter wave is evaluated; the rest is
/// mirrored so that
///   table[depth/2 - k] == table[k]      for k in [0, depth/4]
///   table[k + depth/2] == -table[k]     for k in [0, depth/2)
/// hold exactly. Codes are signed; the unsigned memory view is an offset
/// applied by the modulator.
struct SineLut {
  int depth = 128;
  int amp_bits = 9;
  int amplitude = 255;
  std::vector<int> table;

  int operator[](std::size_t k) const { return table[k]; }
  std::size_t size() const noexcept { return table.size(); }
  /// Largest magnitude representable in amp_bits signed bits.
  int max_code() const noexcept { return (1 << (amp_bits - 1)) - 1; }
};

/// Throws std::invalid_argument when depth is not a positive multiple of 4
/// or when amplitude does not fit in amp_bits.
SineLut build_lut(int amp_bits, int depth, int amplitude);

/// Checks every SineLut invariant (length, code range, both symmetries).
bool lut_is_valid(const SineLut& lut);

/// Modulo-depth rotational counter addressing the table.
struct PhaseAccumulator {
  int counter = 0;
  int depth = 128;
};

struct PhaseStep {
  PhaseAccumulator next;
  int index = 0;  // pre-increment counter
};

PhaseStep step_phase(PhaseAccumulator acc);

/// `count` consecutive table samples read through a phase accumulator.
std::vector<int> synthesize(const SineLut& lut, std::size_t count,
                            PhaseAccumulator start = {});

/// Worst spur in dBc over (0, band_hz] from an exact one-period FFT of the
/// table clocked at clock_hz (fundamental = clock_hz / depth). Returns a
/// very low floor when the band holds no harmonic bin. Throws when the band
/// is narrower than one bin or reaches Nyquist.
double lut_spur_level(const SineLut& lut, double band_hz, double clock_hz);

/// `index,code` CSV.
void write_lut_csv(std::ostream& os, const SineLut& lut);

/// Parses the CSV written by write_lut_csv. Rows must be indexed 0..depth-1
/// in order; the result is validated with lut_is_valid.
SineLut read_lut_csv(std::istream& is, int amp_bits);

}  // namespace cgsim
