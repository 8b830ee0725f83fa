#include <fmt/format.h>
#include <fmt/ostream.h>

#include <CLI11.hpp>
#include <optional>
#include <ostream>
#include <string>

#include "cgsim/cli/commands.hpp"
#include "cgsim/error.hpp"

namespace cgsim::cli {

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Cycle-accurate current-generator chain simulator", "cgsim"};
  app.require_subcommand(1);
  app.fallthrough();

  std::string config_path;
  std::string out_dir;
  std::optional<std::uint64_t> seed;
  std::optional<double> band_hz;
  app.add_option("--config", config_path, "flat key=value config (defaults when omitted)");
  app.add_option("--out", out_dir, "output directory (overrides out_dir)");
  app.add_option("--seed", seed, "noise seed; also derives both LFSR seeds");
  app.add_option("--band-hz", band_hz, "analysis band (overrides band_hz)");

  auto* emit = app.add_subcommand("emit-lut", "write lut.csv");
  auto* modulate = app.add_subcommand("modulate", "write per-cycle P/N modulator codes");
  std::string lut_path;
  modulate->add_option("--lut", lut_path, "read the table from this CSV");
  auto* simulate = app.add_subcommand("simulate", "run the full chain and write metrics");
  auto* compare = app.add_subcommand("compare-reset", "A/B the two reset modes");
  auto* sweep = app.add_subcommand("sweep-load", "driving error versus load");
  std::string loads_text;
  sweep->add_option("--loads", loads_text, "comma-separated ohms, ascending (default 0:250:5000)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err);
  }

  try {
    RunConfig cfg = config_path.empty() ? RunConfig{} : load_config(config_path);
    if (!out_dir.empty()) cfg.out_dir = out_dir;
    if (seed) apply_seed(cfg, *seed);
    if (band_hz) cfg.chain.band_hz = *band_hz;
    validate(cfg);

    if (emit->parsed()) {
      cmd_emit_lut(cfg, out);
    } else if (modulate->parsed()) {
      cmd_modulate(cfg, lut_path.empty() ? std::nullopt : std::optional<std::filesystem::path>(lut_path), out);
    } else if (simulate->parsed()) {
      cmd_simulate(cfg, out);
    } else if (compare->parsed()) {
      cmd_compare_reset(cfg, out);
    } else if (sweep->parsed()) {
      const std::vector<double> loads = loads_text.empty() ? default_loads() : parse_loads(loads_text);
      cmd_sweep_load(cfg, loads, out);
    }
  } catch (const ParameterError& e) {
    fmt::print(err, "error: {}\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    fmt::print(err, "error: {}\n", e.what());
    return 1;
  }
  return 0;
}

}  // namespace cgsim::cli
