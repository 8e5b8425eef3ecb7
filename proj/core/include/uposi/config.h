// Copyright 2026 The uposi Authors.
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

#ifndef UPOSI_CONFIG_H_
#define UPOSI_CONFIG_H_

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "uposi/harness.h"
#include "uposi/osi.h"
#include "uposi/trpo.h"

namespace uposi {

// Everything a command needs besides its seed. Serialized as JSON with the
// sections "env" (task overrides), "trpo", "osi" and "eval".
struct RunConfig {
  nlohmann::json env = nlohmann::json::object();
  TrpoConfig trpo;
  OsiConfig osi;
  EvalConfig eval;

  static RunConfig FromJson(const nlohmann::json& j);
  nlohmann::json ToJson() const;
};

// Parses a JSON config file. Throws IoError or ConfigError with the path.
nlohmann::json LoadConfigFile(const std::filesystem::path& path);

// Applies "section.key=value". The value is parsed as JSON when possible
// and taken as a string otherwise. Throws ConfigError on malformed input.
void ApplyOverride(nlohmann::json& config, const std::string& assignment);

// Defaults, then the optional file, then the overrides in order. Unknown
// keys in the trpo, osi and eval sections are rejected.
RunConfig ResolveConfig(const std::optional<std::filesystem::path>& file,
                        const std::vector<std::string>& overrides);

std::uint64_t Fnv1a64(std::string_view bytes);

// 16 hex digits of the FNV-1a hash of the canonical JSON dump.
std::string JsonHash(const nlohmann::json& j);

// $UPOSI_OUT_DIR when set and non-empty, otherwise "runs".
std::filesystem::path DefaultOutDir();

}  // namespace uposi

#endif  // UPOSI_CONFIG_H_
