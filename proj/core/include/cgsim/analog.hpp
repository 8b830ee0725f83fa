#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "cgsim/dem.hpp"
#include "cgsim/waveform.hpp"

namespace cgsim {

inline constexpr double kBoltzmann = 1.380649e-23;  // J/K

enum class ResetMode { kFullPeriod, kHalfPeriod };

std::string_view to_string(ResetMode mode) noexcept;
/// Accepts "FULL_PERIOD" or "HALF_PERIOD"; throws ParameterError("reset_mode").
ResetMode parse_reset_mode(std::string_view text);

/// Behavioral knobs of the DAC, filter and output stage.
///
/// The silicon values of the capacitances, switch errors and filter corner
/// are not published; the defaults are modeling assumptions chosen so that
/// the simulated chain is in the regime the measurements describe. Zero is
/// accepted for the non-ideality magnitudes (mismatch_sigma, temperature_k,
/// settle_tau_s, q_inject_v, glitch_area_vs) and turns the effect off.
struct AnalogConfig {
  double clock_hz = 2.56e6;
  int sub_steps = 64;              // even, so the falling edge is a sub-step
  double vref = 0.5;               // full-scale level per polarity, volts
  double unit_cap_f = 50e-15;      // assumed unit capacitor
  double mismatch_sigma = 0.005;   // relative sigma of the unit caps
  double temperature_k = 300.0;    // kT/C noise
  double settle_tau_s = 20e-9;     // output node time constant
  double q_inject_v = 1e-3;        // reset-release error (feedthrough + injection)
  double glitch_area_vs = 2e-11;   // per toggling element
  ResetMode reset_mode = ResetMode::kHalfPeriod;
  double lpf_fc_hz = 40e3;
  double lpf_q = 0.70710678118654752;
  double gm_a_per_v = 14e-6;       // ~2 uApp into the load at full swing
  double r_out_ohm = 200e3;
  std::uint64_t seed = 1;

  double sample_rate_hz() const noexcept { return clock_hz * sub_steps; }
};

/// Throws ParameterError naming the first offending field.
void validate(const AnalogConfig& cfg);

/// Unit capacitances in farads, C_i = C (1 + e_i), e_i ~ N(0, sigma^2),
/// drawn once from cfg.seed (P array first, then N).
struct CapArrays {
  std::array<double, kDwaElements> p{};
  std::array<double, kDwaElements> n{};
};
CapArrays draw_caps(const AnalogConfig& cfg);

/// Single-ended output of one DAC polarity, cfg.sub_steps samples per clock.
///
/// Per clock the node relaxes toward vref * (selected caps / all caps) plus
/// the error held on it since the last reset, with time constant
/// settle_tau_s. Every element toggle adds a one-sub-step glitch of area
/// glitch_area_vs. A cycle with no element selected is a reset cycle:
///
///  - FULL_PERIOD grounds the node for the whole cycle. The switch opens at
///    the next rising edge together with the element drivers, so the held
///    error becomes q_inject_v + sqrt(kT/C_total) z plus the turn-on glitch
///    present on the node at that instant.
///  - HALF_PERIOD drives the cycle's first half normally and grounds only
///    the second half. The clock-gated switch opens before the drivers
///    switch, so no glitch is captured, and the injection and kT/C terms
///    are halved.
///
/// One z ~ N(0, 1) is drawn from `noise_stream` at every rising edge that
/// follows a reset cycle, in both modes, so matched seeds give matched
/// noise. Back-to-back FULL_PERIOD resets keep the switch closed and
/// discard the draw.
std::vector<double> simulate_polarity(std::span<const ElementMask> masks,
                                      std::span<const double> caps_f,
                                      const AnalogConfig& cfg,
                                      std::uint64_t noise_stream);

/// Differential (P minus N) DAC output in volts. Throws
/// std::invalid_argument when the mask streams differ in length.
Waveform dac_waveform(std::span<const ElementMask> p_masks,
                      std::span<const ElementMask> n_masks,
                      const AnalogConfig& cfg);

/// Direct-form biquad coefficients, a0 normalized to 1.
struct Biquad {
  double b0 = 1.0, b1 = 0.0, b2 = 0.0;
  double a1 = 0.0, a2 = 0.0;
};

/// w0^2 / (s^2 + s w0/Q + w0^2) through the bilinear transform, prewarped
/// at fc. Throws std::invalid_argument when fc is not below Nyquist.
Biquad design_lowpass(double fc_hz, double q, double sample_rate_hz);

/// Second-order low-pass of the waveform, starting from rest.
Waveform lpf_apply(const Waveform& w, const AnalogConfig& cfg);

struct CurrentOutput {
  Waveform current;             // amperes delivered into the load
  double driving_error = 0.0;   // load / (r_out + load)
};

/// Fraction of the ideal current lost in the load.
double driving_error(double load_ohm, double r_out_ohm);

/// V-I stage with finite output resistance; throws for a negative load.
CurrentOutput v_to_i(const Waveform& w, double load_ohm, const AnalogConfig& cfg);

}  // namespace cgsim
