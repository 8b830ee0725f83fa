#include "cgsim/cli/commands.hpp"

#include <fmt/format.h>
#include <fmt/ostream.h>

#include <charconv>
#include <fstream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>

#include "cgsim/error.hpp"

namespace cgsim::cli {

namespace fs = std::filesystem;

void write_atomic(const fs::path& path, const std::function<void(std::ostream&)>& body) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error(fmt::format("cannot write '{}'", tmp.string()));
    body(out);
    out.flush();
    if (!out) throw std::runtime_error(fmt::format("write failed for '{}'", tmp.string()));
  }
  fs::rename(tmp, path);
}

void cmd_emit_lut(const RunConfig& cfg, std::ostream& log) {
  validate(cfg);
  const SineLut lut =
      build_lut(cfg.chain.lut_amp_bits, cfg.chain.lut_depth, cfg.chain.lut_amplitude);
  const fs::path path = cfg.out_dir / "lut.csv";
  write_atomic(path, [&](std::ostream& os) { write_lut_csv(os, lut); });
  fmt::print(log, "wrote {}\n", path.string());
}

void cmd_modulate(const RunConfig& cfg, const std::optional<fs::path>& lut_path,
                  std::ostream& log) {
  validate(cfg);
  SineLut lut;
  if (lut_path) {
    std::ifstream in(*lut_path);
    if (!in) throw std::runtime_error(fmt::format("cannot open LUT '{}'", lut_path->string()));
    lut = read_lut_csv(in, cfg.chain.lut_amp_bits);
  } else {
    lut = build_lut(cfg.chain.lut_amp_bits, cfg.chain.lut_depth, cfg.chain.lut_amplitude);
  }
  const std::size_t cycles =
      static_cast<std::size_t>(cfg.chain.warmup_periods + cfg.chain.periods) * lut.size();
  const std::vector<int> samples = synthesize(lut, cycles);
  const DifferentialCodes codes = modulate_differential(
      samples, cfg.chain.dsm_seed_p, cfg.chain.dsm_seed_n, cfg.chain.dither);

  const fs::path path = cfg.out_dir / "codes.csv";
  write_atomic(path, [&](std::ostream& os) {
    os << "cycle,p_code,n_code\n";
    for (std::size_t i = 0; i < cycles; ++i) {
      fmt::print(os, "{},{},{}\n", i, codes.p[i].value, codes.n[i].value);
    }
  });
  fmt::print(log, "wrote {} ({} cycles)\n", path.string(), cycles);
}

namespace {

void write_metric_block(std::ostream& os, std::string_view prefix, const Metrics& m) {
  fmt::print(os, "{}thd_pct={:.10g}\n", prefix, m.thd_pct);
  fmt::print(os, "{}sfdr_dbc={:.10g}\n", prefix, m.sfdr_dbc);
  fmt::print(os, "{}worst_spur_dbc={:.10g}\n", prefix, m.worst_spur_dbc);
  fmt::print(os, "{}worst_spur_hz={:.10g}\n", prefix, m.worst_spur_hz);
  fmt::print(os, "{}inband_noise_dbc={:.10g}\n", prefix, m.inband_noise_dbc);
}

std::size_t export_count(const RunConfig& cfg) {
  return static_cast<std::size_t>(cfg.export_periods) *
         static_cast<std::size_t>(cfg.chain.lut_depth) *
         static_cast<std::size_t>(cfg.chain.analog.sub_steps);
}

}  // namespace

void write_metrics(std::ostream& os, const RunConfig& cfg, const ChainResult& r) {
  fmt::print(os, "reset_mode={}\n", to_string(cfg.chain.analog.reset_mode));
  fmt::print(os, "fundamental_hz={:.10g}\n", r.cg_analysis.metrics.fundamental_hz);
  fmt::print(os, "band_hz={:.10g}\n", r.cg_analysis.metrics.band_hz);
  fmt::print(os, "periods={}\n", cfg.chain.periods);
  write_metric_block(os, "", r.cg_analysis.metrics);
  fmt::print(os, "amplitude_a={:.10g}\n", r.cg_analysis.metrics.fundamental_amplitude);
  fmt::print(os, "load_ohm={:.10g}\n", cfg.chain.load_ohm);
  fmt::print(os, "driving_error={:.10g}\n", r.output.driving_error);
  write_metric_block(os, "dac_", r.dac_analysis.metrics);
  fmt::print(os, "dac_amplitude_v={:.10g}\n", r.dac_analysis.metrics.fundamental_amplitude);
}

ChainResult cmd_simulate(const RunConfig& cfg, std::ostream& report) {
  validate(cfg);
  ChainResult r = run_chain(cfg.chain);
  const std::size_t n = export_count(cfg);
  const double max_hz = cfg.chain.analog.clock_hz / 2.0;

  write_atomic(cfg.out_dir / "dac_out.csv",
               [&](std::ostream& os) { write_waveform_csv(os, r.dac, "dac_v", 0, n); });
  write_atomic(cfg.out_dir / "cg_out.csv", [&](std::ostream& os) {
    write_waveform_csv(os, r.output.current, "current_a", 0, n);
  });
  write_atomic(cfg.out_dir / "spectrum.csv", [&](std::ostream& os) {
    write_spectrum_csv(os, r.cg_analysis.spectrum, max_hz);
  });
  std::ostringstream metrics;
  write_metrics(metrics, cfg, r);
  write_atomic(cfg.out_dir / "metrics.txt", [&](std::ostream& os) { os << metrics.str(); });
  report << metrics.str();
  return r;
}

ResetComparison cmd_compare_reset(const RunConfig& cfg, std::ostream& report) {
  validate(cfg);
  ResetComparison c = compare_reset(cfg.chain);
  const double max_hz = cfg.chain.analog.clock_hz / 2.0;
  write_atomic(cfg.out_dir / "spectrum_full_period.csv", [&](std::ostream& os) {
    write_spectrum_csv(os, c.full_period.spectrum, max_hz);
  });
  write_atomic(cfg.out_dir / "spectrum_half_period.csv", [&](std::ostream& os) {
    write_spectrum_csv(os, c.half_period.spectrum, max_hz);
  });
  std::ostringstream text;
  fmt::print(text, "band_hz={:.10g}\n", cfg.chain.band_hz);
  fmt::print(text, "full_period_inband_noise_dbc={:.10g}\n", c.full_period.metrics.inband_noise_dbc);
  fmt::print(text, "half_period_inband_noise_dbc={:.10g}\n", c.half_period.metrics.inband_noise_dbc);
  fmt::print(text, "full_period_thd_pct={:.10g}\n", c.full_period.metrics.thd_pct);
  fmt::print(text, "half_period_thd_pct={:.10g}\n", c.half_period.metrics.thd_pct);
  fmt::print(text, "noise_delta_db={:.10g}\n", c.noise_delta_db);
  write_atomic(cfg.out_dir / "compare_reset.txt", [&](std::ostream& os) { os << text.str(); });
  report << text.str();
  return c;
}

std::vector<LoadPoint> cmd_sweep_load(const RunConfig& cfg, std::span<const double> loads_ohm,
                                      std::ostream& report) {
  validate(cfg);
  const std::vector<LoadPoint> points = sweep_load(cfg.chain, loads_ohm);
  const fs::path path = cfg.out_dir / "load_sweep.csv";
  write_atomic(path, [&](std::ostream& os) {
    os << "load_ohm,amplitude_a,driving_error\n";
    for (const LoadPoint& p : points) {
      fmt::print(os, "{:.12g},{:.12g},{:.12g}\n", p.load_ohm, p.amplitude_a, p.driving_error);
    }
  });
  for (const LoadPoint& p : points) {
    fmt::print(report, "load_ohm={:.6g} amplitude_a={:.6g} driving_error_pct={:.4f}\n",
               p.load_ohm, p.amplitude_a, 100.0 * p.driving_error);
  }
  return points;
}

std::vector<double> default_loads() {
  std::vector<double> loads;
  for (int r = 0; r <= 5000; r += 250) loads.push_back(r);
  return loads;
}

std::vector<double> parse_loads(std::string_view text) {
  std::vector<double> loads;
  while (!text.empty()) {
    const auto comma = text.find(',');
    std::string_view item = text.substr(0, comma);
    while (!item.empty() && item.front() == ' ') item.remove_prefix(1);
    while (!item.empty() && item.back() == ' ') item.remove_suffix(1);
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(item.data(), item.data() + item.size(), v);
    if (item.empty() || ec != std::errc{} || ptr != item.data() + item.size()) {
      throw ParameterError("loads", fmt::format("'{}' is not a resistance", item));
    }
    loads.push_back(v);
    if (comma == std::string_view::npos) break;
    text.remove_prefix(comma + 1);
  }
  if (loads.empty()) throw ParameterError("loads", "empty list");
  return loads;
}

}  // namespace cgsim::cli
