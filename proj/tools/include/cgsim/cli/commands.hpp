#pragma once

#include <filesystem>
#include <functional>
#include <iosfwd>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "cgsim/chain.hpp"
#include "cgsim/cli/run_config.hpp"

namespace cgsim::cli {

/// Writes through a sibling temp file and renames it over `path`.
void write_atomic(const std::filesystem::path& path,
                  const std::function<void(std::ostream&)>& body);

/// lut.csv
void cmd_emit_lut(const RunConfig& cfg, std::ostream& log);

/// codes.csv (cycle, p_code, n_code) for warmup + periods table periods.
/// With `lut_path` the table is read from CSV instead of built.
void cmd_modulate(const RunConfig& cfg, const std::optional<std::filesystem::path>& lut_path,
                  std::ostream& log);

/// dac_out.csv, cg_out.csv, spectrum.csv and metrics.txt; the metrics
/// report is also written to `report`.
ChainResult cmd_simulate(const RunConfig& cfg, std::ostream& report);

/// spectrum_full_period.csv, spectrum_half_period.csv and compare_reset.txt.
ResetComparison cmd_compare_reset(const RunConfig& cfg, std::ostream& report);

/// load_sweep.csv (load_ohm, amplitude_a, driving_error).
std::vector<LoadPoint> cmd_sweep_load(const RunConfig& cfg, std::span<const double> loads_ohm,
                                      std::ostream& report);

/// 0 to 5 kOhm in 250 Ohm steps.
std::vector<double> default_loads();

/// Comma-separated list of ohms.
std::vector<double> parse_loads(std::string_view text);

/// Flat key=value metrics of a chain run.
void write_metrics(std::ostream& os, const RunConfig& cfg, const ChainResult& r);

/// Full command line; returns the process exit code (2 for a bad config).
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace cgsim::cli
