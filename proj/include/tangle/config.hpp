#pragma once

#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "tangle/scenario.hpp"

namespace tangle {

inline constexpr std::string_view kVersion = "0.1.0";

/// Flat "section.key" -> value settings, as read from an INI file or flags.
using Settings = std::map<std::string, std::string>;

struct SettingKey {
  std::string_view key;   // section.key
  std::string_view flag;  // long CLI flag without dashes
  std::string_view help;
};

/// Every recognised key with its CLI twin.
std::span<const SettingKey> setting_keys();

/// Parses INI text. Unknown sections or keys are ConfigInvalid.
Settings parse_ini(std::string_view text);
Settings read_ini_file(const std::string& path);

/// Later entries win.
Settings merge(Settings base, const Settings& overrides);

/// Builds and validates a scenario. Throws ConfigInvalid on bad values.
/// An [attack] section is only applied when attack.kind is set.
ScenarioConfig build_scenario(const Settings& settings);

/// Every key of `config`, INI formatted, headed by a version stamp.
std::string resolved_ini(const ScenarioConfig& config);

}  // namespace tangle
