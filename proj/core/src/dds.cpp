#include "cgsim/dds.hpp"

#include <fmt/format.h>
#include <fmt/ostream.h>

#include <algorithm>
#include <cmath>
#include <istream>
#include <limits>
#include <numbers>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>

#include "cgsim/spectral.hpp"

namespace cgsim {

SineLut build_lut(int amp_bits, int depth, int amplitude) {
  if (depth <= 0 || depth % 4 != 0) {
    throw std::invalid_argument(
        fmt::format("build_lut: depth {} is not a positive multiple of 4", depth));
  }
  if (amp_bits < 2 || amp_bits > 30) {
    throw std::invalid_argument(
        fmt::format("build_lut: amp_bits {} out of range [2, 30]", amp_bits));
  }
  const int max_code = (1 << (amp_bits - 1)) - 1;
  if (amplitude < 0 || amplitude > max_code) {
    throw std::invalid_argument(fmt::format(
        "build_lut: amplitude {} overflows {} signed bits (max {})", amplitude,
        amp_bits, max_code));
  }

  SineLut lut{depth, amp_bits, amplitude, std::vector<int>(depth)};
  const int quarter = depth / 4;
  const int half = depth / 2;
  for (int k = 0; k <= quarter; ++k) {
    const double phase = 2.0 * std::numbers::pi * k / depth;
    // lround rounds half away from zero.
    lut.table[k] = static_cast<int>(std::lround(amplitude * std::sin(phase)));
  }
  for (int k = 1; k < quarter; ++k) lut.table[half - k] = lut.table[k];
  lut.table[half] = 0;
  for (int k = 0; k < half; ++k) lut.table[k + half] = -lut.table[k];
  return lut;
}

bool lut_is_valid(const SineLut& lut) {
  const auto depth = static_cast<std::size_t>(lut.depth);
  if (lut.depth <= 0 || lut.depth % 4 != 0 || lut.table.size() != depth) {
    return false;
  }
  const int max_code = lut.max_code();
  for (int c : lut.table) {
    if (c < -max_code || c > max_code) return false;
  }
  const std::size_t half = depth / 2;
  for (std::size_t k = 0; k < half; ++k) {
    if (lut.table[k + half] != -lut.table[k]) return false;
  }
  for (std::size_t k = 0; k <= depth / 4; ++k) {
    if (lut.table[half - k] != lut.table[k]) return false;
  }
  return true;
}

PhaseStep step_phase(PhaseAccumulator acc) {
  PhaseStep out{acc, acc.counter};
  out.next.counter = acc.counter + 1 == acc.depth ? 0 : acc.counter + 1;
  return out;
}

std::vector<int> synthesize(const SineLut& lut, std::size_t count,
                            PhaseAccumulator start) {
  if (start.depth != lut.depth || start.counter < 0 ||
      start.counter >= start.depth) {
    throw std::invalid_argument("synthesize: accumulator does not address the table");
  }
  std::vector<int> out(count);
  PhaseAccumulator acc = start;
  for (auto& v : out) {
    const PhaseStep s = step_phase(acc);
    v = lut.table[static_cast<std::size_t>(s.index)];
    acc = s.next;
  }
  return out;
}

double lut_spur_level(const SineLut& lut, double band_hz, double clock_hz) {
  if (clock_hz <= 0.0) throw std::invalid_argument("lut_spur_level: clock must be positive");
  const double bin_hz = clock_hz / lut.depth;
  if (band_hz < bin_hz) {
    throw std::invalid_argument(fmt::format(
        "lut_spur_level: band {} Hz narrower than one bin ({} Hz)", band_hz, bin_hz));
  }
  if (band_hz >= clock_hz / 2.0) {
    throw std::invalid_argument("lut_spur_level: band must lie below Nyquist");
  }
  std::vector<double> x(lut.table.begin(), lut.table.end());
  const std::vector<double> power = power_spectrum(x);
  const double p0 = power[1];
  if (!(p0 > 0.0)) throw std::invalid_argument("lut_spur_level: table has no fundamental");

  const auto last = static_cast<std::size_t>(std::floor(band_hz / bin_hz));
  double worst = 0.0;
  for (std::size_t k = 2; k <= last && k < power.size(); ++k) {
    worst = std::max(worst, power[k]);
  }
  return worst > 0.0 ? 10.0 * std::log10(worst / p0) : kDbFloor;
}

void write_lut_csv(std::ostream& os, const SineLut& lut) {
  fmt::print(os, "index,code\n");
  for (std::size_t k = 0; k < lut.table.size(); ++k) {
    fmt::print(os, "{},{}\n", k, lut.table[k]);
  }
}

SineLut read_lut_csv(std::istream& is, int amp_bits) {
  std::string line;
  if (!std::getline(is, line) || line.rfind("index,code", 0) != 0) {
    throw std::runtime_error("LUT CSV: expected header 'index,code'");
  }
  SineLut lut;
  lut.amp_bits = amp_bits;
  lut.table.clear();
  std::size_t row = 0;
  while (std::getline(is, line)) {
    if (line.empty() || line == "\r") continue;
    std::istringstream ss(line);
    long index = 0;
    long code = 0;
    char comma = 0;
    if (!(ss >> index >> comma >> code) || comma != ',') {
      throw std::runtime_error(fmt::format("LUT CSV: malformed row '{}'", line));
    }
    if (index != static_cast<long>(row)) {
      throw std::runtime_error(
          fmt::format("LUT CSV: expected index {}, found {}", row, index));
    }
    lut.table.push_back(static_cast<int>(code));
    ++row;
  }
  lut.depth = static_cast<int>(lut.table.size());
  int peak = 0;
  for (int c : lut.table) peak = std::max(peak, std::abs(c));
  lut.amplitude = peak;
  if (!lut_is_valid(lut)) {
    throw std::runtime_error(fmt::format(
        "LUT CSV: {} rows do not form a symmetric {}-bit sine table",
        lut.table.size(), amp_bits));
  }
  return lut;
}

}  // namespace cgsim
