#pragma once

#include <cstddef>
#include <iosfwd>
#include <string_view>
#include <vector>

namespace cgsim {

/// Uniformly sampled real-valued signal. Units (volts or amperes) are
/// carried by context; the CSV writer names them in the header.
struct Waveform {
  double sample_rate_hz = 0.0;
  std::vector<double> samples;

  std::size_t size() const noexcept { return samples.size(); }
  bool empty() const noexcept { return samples.empty(); }
  double time_at(std::size_t i) const noexcept {
    return static_cast<double>(i) / sample_rate_hz;
  }
};

/// Copy of `count` samples starting at `first`; the sample rate is kept.
Waveform slice(const Waveform& w, std::size_t first, std::size_t count);

/// Writes `time_s,<value_column>` rows for samples [first, first + count).
/// `value_column` should carry the unit, e.g. "value_v" or "value_a".
void write_waveform_csv(std::ostream& os, const Waveform& w,
                        std::string_view value_column, std::size_t first,
                        std::size_t count);

}  // namespace cgsim
