#pragma once

#include <stdexcept>
#include <string>

namespace mkldd {

/// Malformed or unusable input data (bad CSV rows, single-class training sets).
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid parameter values (thresholds, kernel specs, config keys).
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

}  // namespace mkldd
