#pragma once

// Text configuration: one `key = value` per line, `#` starts a comment.
// Keys are the SystemParams field names (E_he/E_eg/J also accepted in lower
// case); `direction = forward|backward`. Unknown keys are a ConfigError.

#include "pblockade/core_model.hpp"

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace pblockade {

struct Setting {
    std::string key;
    std::string value;
    std::string origin;   // "file:line" or "--flag", used in error messages
};

// Names accepted by apply_settings, in canonical spelling.
const std::vector<std::string>& parameter_keys();

// Canonical spelling of a key, or empty if unknown.
std::string canonical_key(std::string_view key);

std::vector<Setting> parse_config_text(std::string_view text, std::string_view source = "<config>");
std::vector<Setting> read_config_file(const std::filesystem::path& path);

// Applies settings in order on top of `base`. If exactly one of kappa1/kappa2
// is given the other is completed from kappa1 + kappa2 = 2. The result is
// validated; every failure is reported as ConfigError.
SystemParams apply_settings(SystemParams base, const std::vector<Setting>& settings);

// Round-trippable text form (shortest exact decimal representation).
std::string to_config_text(const SystemParams& p);

double parse_double(std::string_view text, std::string_view what);

std::string format_double(double x);

} // namespace pblockade
