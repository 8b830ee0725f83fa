#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace cgsim {

/// A configuration value is missing, malformed or out of range. `key` is
/// the flat config key (identical to the struct field name).
class ParameterError : public std::invalid_argument {
 public:
  ParameterError(std::string key, const std::string& what)
      : std::invalid_argument(key + ": " + what), key_(std::move(key)) {}

  const std::string& key() const noexcept { return key_; }

 private:
  std::string key_;
};

}  // namespace cgsim
