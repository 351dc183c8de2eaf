#pragma once

#include <stdexcept>
#include <string>

namespace orchid {

// Invalid or inconsistent run configuration. Maps to CLI exit code 2.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

// Non-finite loss or state during training. Maps to CLI exit code 3.
class NumericAbort : public std::runtime_error {
 public:
  explicit NumericAbort(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace orchid
