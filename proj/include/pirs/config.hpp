#pragma once

#include <string>
#include <vector>

#include "pirs/protocol.hpp"

namespace pirs {

/// Everything a config file can set. The frame block is already in linear
/// units; sweep lists are empty unless the file overrides an experiment grid.
struct ExperimentConfig {
  FrameConfig frame;
  std::vector<int> sweep_M;
  std::vector<int> sweep_bits;
  int trials = 100;
};

// Parse flat `section.key = value` text. Collects every problem (syntax,
// unknown keys, bad values, frame invariants) and throws ConfigError listing
// all of them with `source:line` context.
ExperimentConfig parse_config(const std::string& text, const std::string& source = "<config>");
ExperimentConfig load_config(const std::string& path);

// Loads and checks a config file; the returned frame is valid.
FrameConfig validate_config(const std::string& path);

// Keys accepted by the parser, in documentation order.
const std::vector<std::string>& config_keys();

double dbm_to_watts(double dbm);
double db_to_linear(double db);

}  // namespace pirs
