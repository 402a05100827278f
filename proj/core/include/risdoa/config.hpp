#pragma once

// Flat key = value configuration files for experiments.
//
//   # comment
//   preset = snr_sweep
//   sweep_values = -6, -3, 0
//   snr_db = inf
//
// Keys are listed in README.md. Unknown keys are errors.

#include <iosfwd>
#include <stdexcept>
#include <string>

#include "risdoa/bench.hpp"

namespace risdoa {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Applies one key/value pair to `spec`. Throws ConfigError.
void apply_config_value(ExperimentSpec& spec, const std::string& key, const std::string& value);

/// Applies every line of `is` to `spec`. A `preset` line resets the spec
/// to that preset first, so it should come before overrides.
void parse_config(std::istream& is, ExperimentSpec& spec, const std::string& source = "<config>");

ExperimentSpec load_config_file(const std::string& path, ExperimentSpec spec);

/// Writes the effective configuration; parse_config() reads it back.
void write_config(std::ostream& os, const ExperimentSpec& spec);

}  // namespace risdoa
