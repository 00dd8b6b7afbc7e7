// Copyright 2026 The clde Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef CLDE_CONFIG_IO_HPP_
#define CLDE_CONFIG_IO_HPP_

#include <cstdint>
#include <string>
#include <vector>

#include "clde/sim_config.hpp"

namespace clde {

/// Configuration text format:
///
///   # comment
///   [section]
///   key = value            # lists are comma separated
///
/// Sections: plant, observer, estimator, purge, sim, baseline, sweep, and
/// manifest (written next to outputs, ignored on input). Keys omitted from
/// a file keep the defaults of SimConfig.
struct ConfigKey {
  std::string section;
  std::string name;
  std::string description;
};

/// Every accepted key with a one-line description, in rendering order.
const std::vector<ConfigKey>& config_keys();

/// Parses configuration text on top of the defaults. Throws ConfigError
/// naming the key and line for unknown sections or keys, malformed lines,
/// duplicate keys, unparsable values and values that fail validation.
SimConfig parse_config(const std::string& text);
SimConfig load_config(const std::string& path);

/// Applies one `section.key = value` assignment (used for overrides).
void set_config_value(SimConfig& cfg, const std::string& section,
                      const std::string& key, const std::string& value);

/// Fully resolved configuration; parse_config(render_config(c)) == c.
std::string render_config(const SimConfig& cfg);

/// Everything needed to reproduce an output: the resolved configuration plus
/// a [manifest] section.
struct RunManifest {
  SimConfig config;
  std::string version;
  std::string command;
  std::vector<std::string> outputs;
};

std::string render_manifest(const RunManifest& manifest);

/// FNV-1a 64 of the rendered configuration with the seed line removed.
std::uint64_t config_hash(const SimConfig& cfg);

}  // namespace clde

#endif  // CLDE_CONFIG_IO_HPP_
