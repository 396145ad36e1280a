#pragma once

#include <filesystem>
#include <iosfwd>
#include <map>
#include <string>

#include "imst/cotracker.hpp"

namespace imst {

/// Flat `key=value` settings. Lines starting with `#` and blank lines are ignored.
using ConfigMap = std::map<std::string, std::string>;

ConfigMap parse_config(std::istream& in);
/// Reads a key=value file, or the `config` object of a run manifest (JSON).
ConfigMap load_config(const std::filesystem::path& path);
void write_config(std::ostream& out, const ConfigMap& map);

/// Applies `map` on top of `base`. Unknown keys and malformed values throw
/// std::invalid_argument.
TrackerConfig tracker_config_from(const ConfigMap& map, TrackerConfig base = {});
/// Every key with a value that reproduces `config` exactly.
ConfigMap to_config_map(const TrackerConfig& config);

}  // namespace imst
