#pragma once

#include "hydride/driver.hpp"

#include <string>
#include <vector>

namespace hydride {

struct ParsedConfig {
    RunConfig config;
    std::vector<std::string> defaulted;  // "section.key" entries filled from defaults
};

/// Parses an INI-style run description with sections [domain], [time],
/// [material], [initial], [sources], [solver] and [output]. Errors carry
/// "origin:line:" context. With `check` the resolved configuration must also
/// pass check_config.
ParsedConfig parse_config_text(const std::string& text, const std::string& origin = "<config>", bool check = true);
ParsedConfig load_config(const std::string& path, bool check = true);

RunConfig parse_config(const std::string& path);

/// Closest candidate by edit distance, or "" when nothing is reasonably close.
std::string nearest_key(const std::string& key, const std::vector<std::string>& candidates);

/// Fully resolved configuration in the same format, defaults annotated.
/// Parsing the result reproduces the configuration.
std::string render_manifest(const RunConfig& config, const std::vector<std::string>& defaulted = {});

}  // namespace hydride
