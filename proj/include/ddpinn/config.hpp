#pragma once

#include "ddpinn/training.hpp"

#include <map>
#include <string>
#include <vector>

namespace ddpinn {

//! Flat key=value pairs; '#' starts a comment line.
using KeyValues = std::map<std::string, std::string>;

//! Throws ConfigError with the line number on malformed or duplicate keys.
KeyValues parse_key_values(const std::string& text);

std::string read_text_file(const std::string& path);

//! Builds a run config from kv, erasing the keys it consumes.
TrainConfig train_config_from(KeyValues& kv);

//! Throws ConfigError naming any keys left in kv.
void reject_unknown(const KeyValues& kv);

//! Parse a run config file (unknown keys rejected).
TrainConfig load_train_config(const std::string& path);

//! Canonical key=value text of a config; parses back to the same config.
std::string config_to_text(const TrainConfig& config);

std::vector<int> parse_int_list(const std::string& text);

//! Numbers as 17 significant digits.
std::string format_double(double v);

}  // namespace ddpinn
