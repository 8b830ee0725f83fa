#pragma once

#include <cstddef>
#include <iosfwd>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "cgsim/waveform.hpp"

namespace cgsim {

/// Harmonics 2 through kMaxHarmonic enter THD and are excluded from noise.
inline constexpr int kMaxHarmonic = 20;

/// Level assigned to bins with exactly zero power, in dBc.
inline constexpr double kDbFloor = -400.0;

/// Raised when the record does not hold an integer number of fundamental
/// periods, i.e. f0 does not fall on an FFT bin.
class NonCoherentRecord : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Rectangular-window coherent spectrum, one-sided, bins 0..N/2.
struct Spectrum {
  double bin_hz = 0.0;
  std::size_t fundamental_bin = 0;
  std::vector<double> mags_db;  // dBc, fundamental bin is exactly 0

  std::size_t size() const noexcept { return mags_db.size(); }
  double freq(std::size_t k) const noexcept {
    return static_cast<double>(k) * bin_hz;
  }
  /// Highest bin index whose frequency is <= band_hz.
  std::size_t last_bin(double band_hz) const noexcept;
  /// True when k is a harmonic 2..kMaxHarmonic of the fundamental.
  bool is_harmonic(std::size_t k) const noexcept;
};

struct Metrics {
  double thd_pct = 0.0;          // harmonics 2..20 over the fundamental
  double sfdr_dbc = 0.0;         // fundamental minus largest in-band spur
  double worst_spur_dbc = 0.0;   // level of that spur (<= 0)
  double worst_spur_hz = 0.0;
  double inband_noise_dbc = 0.0; // integrated, fundamental and harmonics excluded
  double band_hz = 0.0;
  double fundamental_hz = 0.0;
  double fundamental_amplitude = 0.0;  // peak, in waveform units
};

struct Analysis {
  Spectrum spectrum;
  Metrics metrics;
};

/// |X[k]|^2 for k = 0..N/2 of the unnormalized real DFT of `x`.
std::vector<double> power_spectrum(std::span<const double> x);

/// Mean-square value of the length-n record whose one-sided power
/// spectrum is `power` (Parseval).
double mean_square_from_power(std::span<const double> power, std::size_t n);

/// Coherent THD/SFDR/spur/noise analysis. The record must contain an
/// integer number of f0 periods and 20*f0 must lie below Nyquist. The DC
/// bin is excluded from spur and noise searches.
Analysis analyze(const Waveform& w, double f0_hz, double band_hz);

/// Integrated in-band noise in dBc over bins 1..band, fundamental and
/// harmonics excluded.
double inband_noise_dbc(const Spectrum& s, double band_hz);

/// Fundamental over everything else in bins 1..band (noise, harmonics and
/// spurs), in dB.
double inband_sndr_db(const Spectrum& s, double band_hz);

/// Hann-windowed SNDR over bins 2..band: the fundamental main lobe (k0 +- 2)
/// against everything else. Tolerates components that are not coherent
/// with the record, as long as the fundamental is.
double windowed_sndr_db(const Waveform& w, double f0_hz, double band_hz);

/// Integrated in-band noise of `a` minus that of `b`, in dB.
double noise_floor_delta(const Spectrum& a, const Spectrum& b, double band_hz);

/// `freq_hz,dbc` rows for bins up to max_hz.
void write_spectrum_csv(std::ostream& os, const Spectrum& s, double max_hz);

}  // namespace cgsim
