#pragma once

#include <filesystem>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "mwmlab/dominance.hpp"

namespace mwmlab {

class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string key, const std::string& message)
      : std::runtime_error(message), key_(std::move(key)) {}
  const std::string& key() const { return key_; }

 private:
  std::string key_;
};

// Ordered key/value pairs; a key may repeat (policy, cost).
using KeyValues = std::vector<std::pair<std::string, std::string>>;

// `key = value` lines, `#` starts a comment, blank lines ignored. Dashes in
// keys are read as underscores.
KeyValues parse_config_text(std::string_view text);
KeyValues read_config_file(const std::filesystem::path& path);

struct ParsedConfig {
  SimConfig config;
  std::vector<std::string> defaults_applied;  // "key = value" for each default used
};

// Flag values override file values key by key.
ParsedConfig parse_config(const KeyValues& file_values, const KeyValues& flag_values);

std::vector<std::string_view> config_keys();
std::vector<std::string_view> required_config_keys();

// "N K" on the first line, then N rows of K non-negative integers.
WeightMatrix parse_weight_matrix(std::string_view text);

}  // namespace mwmlab
