// Session config files: flat `key = value` lines, `#` comments, and optional
// `[section]` headers that prefix the following keys ("[channel]" + "loss" ->
// "channel.loss"). Every key can also be overridden from the command line.
#pragma once

#include "polqkd/session.hpp"

#include <filesystem>
#include <istream>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace polqkd {

using KeyValues = std::map<std::string, std::string>;

/// Key, default, description. The default is what an absent key means.
struct ConfigKey {
  std::string_view key;
  std::string_view default_value;
  std::string_view help;
};

std::span<const ConfigKey> config_keys();

/// Throws ConfigError on malformed lines, duplicate or unknown keys.
KeyValues parse_key_values(std::istream& in);
KeyValues read_key_values(const std::filesystem::path& path);

/// Builds and validates a SessionConfig. Relative table paths resolve against `base_dir`.
SessionConfig session_config_from(const KeyValues& values, const std::filesystem::path& base_dir = {});

/// The config rendered back into keys; table profiles are inlined as "t:theta;..." samples.
KeyValues to_key_values(const SessionConfig& cfg);

}  // namespace polqkd
