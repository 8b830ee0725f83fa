#include "cgsim/spectral.hpp"

#include <fftw3.h>
#include <fmt/format.h>
#include <fmt/ostream.h>

#include <algorithm>
#include <cmath>
#include <memory>
#include <mutex>
#include <numbers>
#include <ostream>

namespace cgsim {

namespace {

// FFTW planning is not thread-safe; execution on distinct plans is.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

struct PlanDeleter {
  void operator()(fftw_plan_s* p) const {
    std::lock_guard lock(planner_mutex());
    fftw_destroy_plan(p);
  }
};

struct FftwFree {
  void operator()(void* p) const { fftw_free(p); }
};

double to_db(double ratio) {
  return ratio > 0.0 ? 10.0 * std::log10(ratio) : kDbFloor;
}

std::size_t coherent_bin(const Waveform& w, double f0_hz) {
  const std::size_t n = w.size();
  const double k0_exact = f0_hz * static_cast<double>(n) / w.sample_rate_hz;
  const double k0_round = std::round(k0_exact);
  if (k0_round < 1.0 || std::abs(k0_exact - k0_round) > 1e-6) {
    throw NonCoherentRecord(fmt::format(
        "record of {} samples at {} Hz holds {:.6f} periods of {} Hz; trim it "
        "to an integer number of periods",
        n, w.sample_rate_hz, k0_exact, f0_hz));
  }
  return static_cast<std::size_t>(k0_round);
}

}  // namespace

std::vector<double> power_spectrum(std::span<const double> x) {
  const std::size_t n = x.size();
  if (n == 0) throw std::invalid_argument("power_spectrum: empty record");
  const std::size_t bins = n / 2 + 1;

  std::unique_ptr<double, FftwFree> in(
      static_cast<double*>(fftw_malloc(sizeof(double) * n)));
  std::unique_ptr<fftw_complex, FftwFree> out(
      static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * bins)));
  if (!in || !out) throw std::bad_alloc();

  std::unique_ptr<fftw_plan_s, PlanDeleter> plan;
  {
    // FFTW_ESTIMATE keeps the algorithm choice, and thus the rounding,
    // identical from run to run.
    std::lock_guard lock(planner_mutex());
    plan.reset(fftw_plan_dft_r2c_1d(static_cast<int>(n), in.get(), out.get(),
                                    FFTW_ESTIMATE));
  }
  std::copy(x.begin(), x.end(), in.get());
  fftw_execute(plan.get());

  std::vector<double> power(bins);
  for (std::size_t k = 0; k < bins; ++k) {
    const double re = out.get()[k][0];
    const double im = out.get()[k][1];
    power[k] = re * re + im * im;
  }
  return power;
}

double mean_square_from_power(std::span<const double> power, std::size_t n) {
  if (power.size() != n / 2 + 1) {
    throw std::invalid_argument("power spectrum length does not match n");
  }
  // Interior bins stand for a conjugate pair; DC and (even n) Nyquist don't.
  double sum = power[0];
  const std::size_t last = power.size() - 1;
  for (std::size_t k = 1; k < power.size(); ++k) {
    const bool unpaired = (n % 2 == 0) && k == last;
    sum += unpaired ? power[k] : 2.0 * power[k];
  }
  return sum / (static_cast<double>(n) * static_cast<double>(n));
}

std::size_t Spectrum::last_bin(double band_hz) const noexcept {
  if (mags_db.empty() || bin_hz <= 0.0) return 0;
  const double k = std::floor(band_hz / bin_hz * (1.0 + 1e-12));
  return std::min(static_cast<std::size_t>(std::max(k, 0.0)), size() - 1);
}

bool Spectrum::is_harmonic(std::size_t k) const noexcept {
  if (fundamental_bin == 0 || k % fundamental_bin != 0) return false;
  const std::size_t h = k / fundamental_bin;
  return h >= 2 && h <= static_cast<std::size_t>(kMaxHarmonic);
}

Analysis analyze(const Waveform& w, double f0_hz, double band_hz) {
  const std::size_t n = w.size();
  if (n < 4) throw std::invalid_argument("analyze: record too short");
  if (w.sample_rate_hz <= 0.0 || f0_hz <= 0.0) {
    throw std::invalid_argument("analyze: sample rate and f0 must be positive");
  }
  const double bin_hz = w.sample_rate_hz / static_cast<double>(n);
  const std::size_t k0 = coherent_bin(w, f0_hz);
  if (k0 * kMaxHarmonic > n / 2) {
    throw std::invalid_argument(fmt::format(
        "analyze: harmonic {} of {} Hz lies above Nyquist ({} Hz)",
        kMaxHarmonic, f0_hz, w.sample_rate_hz / 2.0));
  }
  if (band_hz < bin_hz) {
    throw std::invalid_argument("analyze: band narrower than one bin");
  }

  const std::vector<double> power = power_spectrum(w.samples);
  const double p0 = power[k0];
  if (!(p0 > 0.0)) {
    throw std::invalid_argument("analyze: no energy at the fundamental");
  }

  Analysis a;
  Spectrum& s = a.spectrum;
  s.bin_hz = bin_hz;
  s.fundamental_bin = k0;
  s.mags_db.resize(power.size());
  for (std::size_t k = 0; k < power.size(); ++k) {
    s.mags_db[k] = k == k0 ? 0.0 : to_db(power[k] / p0);
  }

  Metrics& m = a.metrics;
  m.band_hz = band_hz;
  m.fundamental_hz = f0_hz;
  m.fundamental_amplitude = 2.0 * std::sqrt(p0) / static_cast<double>(n);

  double harmonic_power = 0.0;
  for (int h = 2; h <= kMaxHarmonic; ++h) {
    harmonic_power += power[k0 * static_cast<std::size_t>(h)];
  }
  m.thd_pct = 100.0 * std::sqrt(harmonic_power / p0);

  const std::size_t last = s.last_bin(band_hz);
  double worst = 0.0;
  std::size_t worst_k = 0;
  for (std::size_t k = 1; k <= last; ++k) {
    if (k == k0) continue;
    if (worst_k == 0 || power[k] > worst) {
      worst = power[k];
      worst_k = k;
    }
  }
  m.worst_spur_dbc = worst_k == 0 ? kDbFloor : to_db(worst / p0);
  m.worst_spur_hz = s.freq(worst_k);
  m.sfdr_dbc = -m.worst_spur_dbc;
  m.inband_noise_dbc = inband_noise_dbc(s, band_hz);
  return a;
}

double inband_noise_dbc(const Spectrum& s, double band_hz) {
  const std::size_t last = s.last_bin(band_hz);
  double sum = 0.0;
  for (std::size_t k = 1; k <= last; ++k) {
    if (k == s.fundamental_bin || s.is_harmonic(k)) continue;
    if (s.mags_db[k] <= kDbFloor) continue;
    sum += std::pow(10.0, s.mags_db[k] / 10.0);
  }
  return to_db(sum);
}

double inband_sndr_db(const Spectrum& s, double band_hz) {
  const std::size_t last = s.last_bin(band_hz);
  double sum = 0.0;
  for (std::size_t k = 1; k <= last; ++k) {
    if (k == s.fundamental_bin || s.mags_db[k] <= kDbFloor) continue;
    sum += std::pow(10.0, s.mags_db[k] / 10.0);
  }
  return -to_db(sum);
}

double windowed_sndr_db(const Waveform& w, double f0_hz, double band_hz) {
  const std::size_t n = w.size();
  if (n < 16) throw std::invalid_argument("windowed_sndr_db: record too short");
  if (w.sample_rate_hz <= 0.0 || f0_hz <= 0.0) {
    throw std::invalid_argument("windowed_sndr_db: sample rate and f0 must be positive");
  }
  const std::size_t k0 = coherent_bin(w, f0_hz);
  const double bin_hz = w.sample_rate_hz / static_cast<double>(n);
  const auto last = static_cast<std::size_t>(std::floor(band_hz / bin_hz + 1e-9));
  if (k0 < 4 || last < k0 + 2 || last > n / 2) {
    throw std::invalid_argument(
        "windowed_sndr_db: band must hold the fundamental main lobe and stay below Nyquist");
  }
  std::vector<double> x(w.samples);
  for (std::size_t i = 0; i < n; ++i) {
    x[i] *= 0.5 - 0.5 * std::cos(2.0 * std::numbers::pi * static_cast<double>(i) /
                                 static_cast<double>(n));
  }
  const std::vector<double> power = power_spectrum(x);
  double signal = 0.0;
  double rest = 0.0;
  for (std::size_t k = 2; k <= last; ++k) {
    (k + 2 >= k0 && k <= k0 + 2 ? signal : rest) += power[k];
  }
  if (!(signal > 0.0)) {
    throw std::invalid_argument("windowed_sndr_db: no energy at the fundamental");
  }
  return -to_db(rest / signal);
}

double noise_floor_delta(const Spectrum& a, const Spectrum& b,
                         double band_hz) {
  if (a.size() != b.size() || a.bin_hz != b.bin_hz ||
      a.fundamental_bin != b.fundamental_bin) {
    throw std::invalid_argument("noise_floor_delta: spectra on different bin grids");
  }
  return inband_noise_dbc(a, band_hz) - inband_noise_dbc(b, band_hz);
}

void write_spectrum_csv(std::ostream& os, const Spectrum& s, double max_hz) {
  fmt::print(os, "freq_hz,dbc\n");
  const std::size_t last = s.last_bin(max_hz);
  for (std::size_t k = 0; k <= last && k < s.size(); ++k) {
    fmt::print(os, "{:.10g},{:.6f}\n", s.freq(k), s.mags_db[k]);
  }
}

}  // namespace cgsim
