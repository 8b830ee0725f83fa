#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "cgsim/chain.hpp"

namespace cgsim::cli {

/// Chain parameters plus the output side of a run.
struct RunConfig {
  ChainConfig chain;
  std::filesystem::path out_dir = "out";
  int export_periods = 2;  // periods written to dac_out.csv / cg_out.csv
};

/// Every key a config file must set, in file order.
const std::vector<std::string>& config_keys();

/// Parses a flat `key = value` file. Blank lines and `#` comments are
/// ignored. Every key of config_keys() must appear exactly once; unknown,
/// duplicate, missing or malformed keys throw ParameterError naming the key.
RunConfig parse_config(std::istream& is);
RunConfig load_config(const std::filesystem::path& path);

/// Writes every key in config_keys() order; parse_config reads it back.
void write_config(std::ostream& os, const RunConfig& cfg);

/// Range and consistency checks for the whole run.
void validate(const RunConfig& cfg);

/// --seed: replaces the analog noise seed and derives both LFSR seeds.
void apply_seed(RunConfig& cfg, std::uint64_t seed);

}  // namespace cgsim::cli
