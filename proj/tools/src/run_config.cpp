#include "cgsim/cli/run_config.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <charconv>
#include <fstream>
#include <functional>
#include <istream>
#include <map>
#include <ostream>

#include "cgsim/error.hpp"

namespace cgsim::cli {

namespace {

std::string_view trim(std::string_view s) {
  const auto ws = " \t\r\n";
  const auto b = s.find_first_not_of(ws);
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(ws);
  return s.substr(b, e - b + 1);
}

[[noreturn]] void malformed(const std::string& key, std::string_view text,
                            std::string_view expected) {
  throw ParameterError(key, fmt::format("expected {}, got '{}'", expected, text));
}

double parse_double(const std::string& key, std::string_view text) {
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc{} || ptr != text.data() + text.size()) malformed(key, text, "a number");
  return v;
}

std::uint64_t parse_unsigned(const std::string& key, std::string_view text) {
  int base = 10;
  if (text.starts_with("0x") || text.starts_with("0X")) {
    text.remove_prefix(2);
    base = 16;
  }
  std::uint64_t v = 0;
  const auto [ptr, ec] =
      std::from_chars(text.data(), text.data() + text.size(), v, base);
  if (text.empty() || ec != std::errc{} || ptr != text.data() + text.size()) {
    malformed(key, text, "an unsigned integer");
  }
  return v;
}

int parse_int(const std::string& key, std::string_view text) {
  int v = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc{} || ptr != text.data() + text.size()) malformed(key, text, "an integer");
  return v;
}

bool parse_bool(const std::string& key, std::string_view text) {
  if (text == "true" || text == "1") return true;
  if (text == "false" || text == "0") return false;
  malformed(key, text, "true or false");
}

std::uint16_t parse_seed16(const std::string& key, std::string_view text) {
  const std::uint64_t v = parse_unsigned(key, text);
  if (v > 0xFFFF) malformed(key, text, "a 9-bit LFSR seed");
  return static_cast<std::uint16_t>(v);
}

struct Field {
  std::string key;
  std::function<void(RunConfig&, std::string_view)> set;
  std::function<std::string(const RunConfig&)> get;
};

std::string num(double v) { return fmt::format("{}", v); }

const std::vector<Field>& fields() {
  static const std::vector<Field> table = [] {
    std::vector<Field> f;
    auto dbl = [&f](std::string key, double AnalogConfig::*m) {
      f.push_back({key,
                   [key, m](RunConfig& c, std::string_view t) { c.chain.analog.*m = parse_double(key, t); },
                   [m](const RunConfig& c) { return num(c.chain.analog.*m); }});
    };
    auto chain_int = [&f](std::string key, int ChainConfig::*m) {
      f.push_back({key,
                   [key, m](RunConfig& c, std::string_view t) { c.chain.*m = parse_int(key, t); },
                   [m](const RunConfig& c) { return std::to_string(c.chain.*m); }});
    };
    auto chain_bool = [&f](std::string key, bool ChainConfig::*m) {
      f.push_back({key,
                   [key, m](RunConfig& c, std::string_view t) { c.chain.*m = parse_bool(key, t); },
                   [m](const RunConfig& c) { return std::string(c.chain.*m ? "true" : "false"); }});
    };
    auto seed16 = [&f](std::string key, std::uint16_t ChainConfig::*m) {
      f.push_back({key,
                   [key, m](RunConfig& c, std::string_view t) { c.chain.*m = parse_seed16(key, t); },
                   [m](const RunConfig& c) { return fmt::format("{:#05x}", c.chain.*m); }});
    };

    chain_int("lut_amp_bits", &ChainConfig::lut_amp_bits);
    chain_int("lut_depth", &ChainConfig::lut_depth);
    chain_int("lut_amplitude", &ChainConfig::lut_amplitude);
    chain_bool("dither", &ChainConfig::dither);
    seed16("dsm_seed_p", &ChainConfig::dsm_seed_p);
    seed16("dsm_seed_n", &ChainConfig::dsm_seed_n);
    chain_bool("dwa", &ChainConfig::dwa);

    dbl("clock_hz", &AnalogConfig::clock_hz);
    f.push_back({"sub_steps",
                 [](RunConfig& c, std::string_view t) { c.chain.analog.sub_steps = parse_int("sub_steps", t); },
                 [](const RunConfig& c) { return std::to_string(c.chain.analog.sub_steps); }});
    dbl("vref", &AnalogConfig::vref);
    dbl("unit_cap_f", &AnalogConfig::unit_cap_f);
    dbl("mismatch_sigma", &AnalogConfig::mismatch_sigma);
    dbl("temperature_k", &AnalogConfig::temperature_k);
    dbl("settle_tau_s", &AnalogConfig::settle_tau_s);
    dbl("q_inject_v", &AnalogConfig::q_inject_v);
    dbl("glitch_area_vs", &AnalogConfig::glitch_area_vs);
    f.push_back({"reset_mode",
                 [](RunConfig& c, std::string_view t) { c.chain.analog.reset_mode = parse_reset_mode(t); },
                 [](const RunConfig& c) { return std::string(to_string(c.chain.analog.reset_mode)); }});
    dbl("lpf_fc_hz", &AnalogConfig::lpf_fc_hz);
    dbl("lpf_q", &AnalogConfig::lpf_q);
    dbl("gm_a_per_v", &AnalogConfig::gm_a_per_v);
    dbl("r_out_ohm", &AnalogConfig::r_out_ohm);
    f.push_back({"seed",
                 [](RunConfig& c, std::string_view t) { c.chain.analog.seed = parse_unsigned("seed", t); },
                 [](const RunConfig& c) { return std::to_string(c.chain.analog.seed); }});

    f.push_back({"load_ohm",
                 [](RunConfig& c, std::string_view t) { c.chain.load_ohm = parse_double("load_ohm", t); },
                 [](const RunConfig& c) { return num(c.chain.load_ohm); }});
    chain_int("periods", &ChainConfig::periods);
    chain_int("warmup_periods", &ChainConfig::warmup_periods);
    f.push_back({"band_hz",
                 [](RunConfig& c, std::string_view t) { c.chain.band_hz = parse_double("band_hz", t); },
                 [](const RunConfig& c) { return num(c.chain.band_hz); }});
    f.push_back({"out_dir",
                 [](RunConfig& c, std::string_view t) {
                   if (t.empty()) malformed("out_dir", t, "a directory");
                   c.out_dir = std::filesystem::path(std::string(t));
                 },
                 [](const RunConfig& c) { return c.out_dir.string(); }});
    f.push_back({"export_periods",
                 [](RunConfig& c, std::string_view t) { c.export_periods = parse_int("export_periods", t); },
                 [](const RunConfig& c) { return std::to_string(c.export_periods); }});
    return f;
  }();
  return table;
}

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

}  // namespace

const std::vector<std::string>& config_keys() {
  static const std::vector<std::string> keys = [] {
    std::vector<std::string> k;
    for (const Field& f : fields()) k.push_back(f.key);
    return k;
  }();
  return keys;
}

RunConfig parse_config(std::istream& is) {
  RunConfig cfg;
  std::map<std::string, bool> seen;
  for (const Field& f : fields()) seen[f.key] = false;

  std::string line;
  int line_no = 0;
  while (std::getline(is, line)) {
    ++line_no;
    std::string_view text = line;
    if (const auto hash = text.find('#'); hash != std::string_view::npos) {
      text = text.substr(0, hash);
    }
    text = trim(text);
    if (text.empty()) continue;
    const auto eq = text.find('=');
    if (eq == std::string_view::npos) {
      throw ParameterError(std::string(text),
                           fmt::format("line {}: expected key = value", line_no));
    }
    const std::string key(trim(text.substr(0, eq)));
    const std::string_view value = trim(text.substr(eq + 1));
    const auto it = std::find_if(fields().begin(), fields().end(),
                                 [&](const Field& f) { return f.key == key; });
    if (it == fields().end()) {
      throw ParameterError(key, fmt::format("line {}: unknown key", line_no));
    }
    if (seen[key]) throw ParameterError(key, fmt::format("line {}: duplicate key", line_no));
    seen[key] = true;
    it->set(cfg, value);
  }
  for (const Field& f : fields()) {
    if (!seen[f.key]) throw ParameterError(f.key, "missing key");
  }
  validate(cfg);
  return cfg;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error(fmt::format("cannot open config '{}'", path.string()));
  return parse_config(in);
}

void write_config(std::ostream& os, const RunConfig& cfg) {
  for (const Field& f : fields()) os << f.key << " = " << f.get(cfg) << '\n';
}

void validate(const RunConfig& cfg) {
  cgsim::validate(cfg.chain);
  if (cfg.export_periods < 0 || cfg.export_periods > cfg.chain.periods) {
    throw ParameterError("export_periods",
                         fmt::format("must lie in [0, periods = {}]", cfg.chain.periods));
  }
}

void apply_seed(RunConfig& cfg, std::uint64_t seed) {
  cfg.chain.analog.seed = seed;
  const std::uint64_t h = splitmix64(seed);
  cfg.chain.dsm_seed_p = static_cast<std::uint16_t>(1 + (h & 0xFFFF) % kLfsrMask);
  auto n = static_cast<std::uint16_t>(1 + ((h >> 16) & 0xFFFF) % kLfsrMask);
  if (n == cfg.chain.dsm_seed_p) n = static_cast<std::uint16_t>(n % kLfsrMask + 1);
  cfg.chain.dsm_seed_n = n;
}

}  // namespace cgsim::cli
