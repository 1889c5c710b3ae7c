#pragma once

#include <string>

#include "latus/scenario.hpp"

namespace latus {

struct SimConfig {
  SystemParams params;
  FleetSpec fleet;
};

/// Parses YAML text. Missing keys keep their defaults; unknown keys, wrong
/// types and violated invariants are all collected into one ConfigError.
SimConfig parse_config(const std::string &yaml_text);

/// Reads and parses a config file; throws ConfigError if it cannot be read.
SimConfig load_config(const std::string &path);

}  // namespace latus
