#include "cgsim/analog.hpp"

#include <fmt/format.h>

#include <bit>
#include <cmath>
#include <numbers>
#include <numeric>
#include <random>
#include <stdexcept>

#include "cgsim/error.hpp"

namespace cgsim {

namespace {

constexpr std::uint64_t kCapStream = 0;
constexpr std::uint64_t kNoiseStreamP = 1;
constexpr std::uint64_t kNoiseStreamN = 2;

std::mt19937_64 make_rng(std::uint64_t seed, std::uint64_t stream) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed),
                    static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream)};
  return std::mt19937_64(seq);
}

void require_positive(double v, const char* key) {
  if (!(v > 0.0) || !std::isfinite(v)) {
    throw ParameterError(key, fmt::format("must be positive, got {}", v));
  }
}

void require_nonnegative(double v, const char* key) {
  if (!(v >= 0.0) || !std::isfinite(v)) {
    throw ParameterError(key, fmt::format("must be >= 0, got {}", v));
  }
}

}  // namespace

std::string_view to_string(ResetMode mode) noexcept {
  return mode == ResetMode::kFullPeriod ? "FULL_PERIOD" : "HALF_PERIOD";
}

ResetMode parse_reset_mode(std::string_view text) {
  if (text == "FULL_PERIOD") return ResetMode::kFullPeriod;
  if (text == "HALF_PERIOD") return ResetMode::kHalfPeriod;
  throw ParameterError("reset_mode",
                       fmt::format("expected FULL_PERIOD or HALF_PERIOD, got '{}'", text));
}

void validate(const AnalogConfig& cfg) {
  require_positive(cfg.clock_hz, "clock_hz");
  if (cfg.sub_steps < 2 || cfg.sub_steps % 2 != 0) {
    throw ParameterError("sub_steps",
                         fmt::format("must be even and >= 2, got {}", cfg.sub_steps));
  }
  require_positive(cfg.vref, "vref");
  require_positive(cfg.unit_cap_f, "unit_cap_f");
  require_nonnegative(cfg.mismatch_sigma, "mismatch_sigma");
  if (cfg.mismatch_sigma > 0.2) {
    throw ParameterError("mismatch_sigma", "above 0.2 the unit caps may go negative");
  }
  require_nonnegative(cfg.temperature_k, "temperature_k");
  require_nonnegative(cfg.settle_tau_s, "settle_tau_s");
  require_nonnegative(cfg.q_inject_v, "q_inject_v");
  require_nonnegative(cfg.glitch_area_vs, "glitch_area_vs");
  require_positive(cfg.lpf_fc_hz, "lpf_fc_hz");
  if (cfg.lpf_fc_hz >= cfg.sample_rate_hz() / 2.0) {
    throw ParameterError("lpf_fc_hz", "must lie below Nyquist of the sub-sampled waveform");
  }
  require_positive(cfg.lpf_q, "lpf_q");
  require_positive(cfg.gm_a_per_v, "gm_a_per_v");
  require_positive(cfg.r_out_ohm, "r_out_ohm");
}

CapArrays draw_caps(const AnalogConfig& cfg) {
  CapArrays caps;
  auto rng = make_rng(cfg.seed, kCapStream);
  std::normal_distribution<double> normal(0.0, 1.0);
  for (auto& c : caps.p) c = cfg.unit_cap_f * (1.0 + cfg.mismatch_sigma * normal(rng));
  for (auto& c : caps.n) c = cfg.unit_cap_f * (1.0 + cfg.mismatch_sigma * normal(rng));
  return caps;
}

std::vector<double> simulate_polarity(std::span<const ElementMask> masks,
                                      std::span<const double> caps_f,
                                      const AnalogConfig& cfg,
                                      std::uint64_t noise_stream) {
  if (caps_f.size() != kDwaElements) {
    throw std::invalid_argument("simulate_polarity: expected 7 unit caps");
  }
  const int steps = cfg.sub_steps;
  const int half = steps / 2;
  const bool full_period = cfg.reset_mode == ResetMode::kFullPeriod;
  const double t_sub = 1.0 / cfg.sample_rate_hz();
  const double alpha =
      cfg.settle_tau_s > 0.0 ? -std::expm1(-t_sub / cfg.settle_tau_s) : 1.0;
  const double glitch_height = cfg.glitch_area_vs / t_sub;
  const double total = std::accumulate(caps_f.begin(), caps_f.end(), 0.0);
  const double ktc_sigma = std::sqrt(kBoltzmann * cfg.temperature_k / total);

  auto rng = make_rng(cfg.seed, noise_stream);
  std::normal_distribution<double> normal(0.0, 1.0);

  std::vector<double> out(masks.size() * static_cast<std::size_t>(steps));
  double node = 0.0;
  double held = 0.0;
  ElementMask prev = 0;
  bool prev_reset = false;
  auto o = out.begin();

  for (const ElementMask mask : masks) {
    double selected = 0.0;
    for (int i = 0; i < kDwaElements; ++i) {
      if (mask & (1u << i)) selected += caps_f[static_cast<std::size_t>(i)];
    }
    const double level = cfg.vref * selected / total;
    const int toggles = std::popcount(static_cast<unsigned>(mask ^ prev));
    const bool reset = mask == 0;

    if (prev_reset) {
      const double z = normal(rng);
      if (full_period) {
        if (!reset) {
          held = cfg.q_inject_v + ktc_sigma * z + glitch_height * toggles;
        }
      } else {
        held = 0.5 * (cfg.q_inject_v + ktc_sigma * z);
      }
    }

    for (int j = 0; j < steps; ++j, ++o) {
      if (reset && (full_period || j >= half)) {
        node = 0.0;
        *o = 0.0;
        continue;
      }
      node += alpha * (level + held - node);
      *o = j == 0 ? node + glitch_height * toggles : node;
    }
    if (reset) held = 0.0;
    prev = mask;
    prev_reset = reset;
  }
  return out;
}

Waveform dac_waveform(std::span<const ElementMask> p_masks,
                      std::span<const ElementMask> n_masks,
                      const AnalogConfig& cfg) {
  if (p_masks.size() != n_masks.size()) {
    throw std::invalid_argument(fmt::format(
        "dac_waveform: P stream has {} cycles, N stream {}", p_masks.size(),
        n_masks.size()));
  }
  validate(cfg);
  const CapArrays caps = draw_caps(cfg);
  std::vector<double> p = simulate_polarity(p_masks, caps.p, cfg, kNoiseStreamP);
  const std::vector<double> n = simulate_polarity(n_masks, caps.n, cfg, kNoiseStreamN);
  for (std::size_t i = 0; i < p.size(); ++i) p[i] -= n[i];
  return {cfg.sample_rate_hz(), std::move(p)};
}

Biquad design_lowpass(double fc_hz, double q, double sample_rate_hz) {
  if (!(fc_hz > 0.0) || fc_hz >= sample_rate_hz / 2.0) {
    throw std::invalid_argument(fmt::format(
        "design_lowpass: fc {} Hz must lie in (0, {}) Hz", fc_hz, sample_rate_hz / 2.0));
  }
  if (!(q > 0.0)) throw std::invalid_argument("design_lowpass: Q must be positive");
  const double k = std::tan(std::numbers::pi * fc_hz / sample_rate_hz);
  const double k2 = k * k;
  const double norm = 1.0 / (1.0 + k / q + k2);
  Biquad bq;
  bq.b0 = k2 * norm;
  bq.b1 = 2.0 * bq.b0;
  bq.b2 = bq.b0;
  bq.a1 = 2.0 * (k2 - 1.0) * norm;
  bq.a2 = (1.0 - k / q + k2) * norm;
  return bq;
}

Waveform lpf_apply(const Waveform& w, const AnalogConfig& cfg) {
  const Biquad bq = design_lowpass(cfg.lpf_fc_hz, cfg.lpf_q, w.sample_rate_hz);
  Waveform out{w.sample_rate_hz, std::vector<double>(w.size())};
  // Transposed direct form II.
  double s1 = 0.0;
  double s2 = 0.0;
  for (std::size_t i = 0; i < w.size(); ++i) {
    const double x = w.samples[i];
    const double y = bq.b0 * x + s1;
    s1 = bq.b1 * x - bq.a1 * y + s2;
    s2 = bq.b2 * x - bq.a2 * y;
    out.samples[i] = y;
  }
  return out;
}

double driving_error(double load_ohm, double r_out_ohm) {
  if (load_ohm < 0.0) throw std::invalid_argument("load must be >= 0 ohm");
  return load_ohm / (r_out_ohm + load_ohm);
}

CurrentOutput v_to_i(const Waveform& w, double load_ohm, const AnalogConfig& cfg) {
  const double err = driving_error(load_ohm, cfg.r_out_ohm);
  const double gain = cfg.gm_a_per_v * (1.0 - err);
  CurrentOutput out{{w.sample_rate_hz, std::vector<double>(w.size())}, err};
  for (std::size_t i = 0; i < w.size(); ++i) out.current.samples[i] = gain * w.samples[i];
  return out;
}

}  // namespace cgsim
