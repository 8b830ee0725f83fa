#include "cgsim/waveform.hpp"

#include <fmt/format.h>
#include <fmt/ostream.h>

#include <ostream>
#include <stdexcept>

namespace cgsim {

Waveform slice(const Waveform& w, std::size_t first, std::size_t count) {
  if (first > w.size() || count > w.size() - first) {
    throw std::out_of_range("waveform slice out of range");
  }
  Waveform out{w.sample_rate_hz, {}};
  out.samples.assign(w.samples.begin() + static_cast<std::ptrdiff_t>(first),
                     w.samples.begin() +
                         static_cast<std::ptrdiff_t>(first + count));
  return out;
}

void write_waveform_csv(std::ostream& os, const Waveform& w,
                        std::string_view value_column, std::size_t first,
                        std::size_t count) {
  if (first > w.size() || count > w.size() - first) {
    throw std::out_of_range("waveform export range out of bounds");
  }
  fmt::print(os, "time_s,{}\n", value_column);
  for (std::size_t i = first; i < first + count; ++i) {
    fmt::print(os, "{:.12g},{:.12g}\n", w.time_at(i - first), w.samples[i]);
  }
}

}  // namespace cgsim
