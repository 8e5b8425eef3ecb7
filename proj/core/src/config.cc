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

#include "uposi/config.h"

#include <cstdlib>
#include <fstream>

#include <fmt/format.h>

#include "uposi/error.h"

namespace uposi {

RunConfig RunConfig::FromJson(const nlohmann::json& j) {
  RunConfig c;
  c.env = j.value("env", nlohmann::json::object());
  c.trpo = TrpoConfig::FromJson(j.value("trpo", nlohmann::json::object()));
  c.osi = OsiConfig::FromJson(j.value("osi", nlohmann::json::object()));
  c.eval = EvalConfig::FromJson(j.value("eval", nlohmann::json::object()));
  return c;
}

nlohmann::json RunConfig::ToJson() const {
  return {{"env", env},
          {"trpo", trpo.ToJson()},
          {"osi", osi.ToJson()},
          {"eval", eval.ToJson()}};
}

nlohmann::json LoadConfigFile(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config file " + path.string());
  try {
    nlohmann::json j = nlohmann::json::parse(in);
    if (!j.is_object()) {
      throw ConfigError("config file " + path.string() +
                        " must hold a JSON object");
    }
    return j;
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError("config file " + path.string() + ": " + e.what());
  }
}

void ApplyOverride(nlohmann::json& config, const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos || eq == 0) {
    throw ConfigError("override '" + assignment + "' is not key=value");
  }
  const std::string key = assignment.substr(0, eq);
  const std::string text = assignment.substr(eq + 1);
  nlohmann::json value =
      nlohmann::json::parse(text, nullptr, /*allow_exceptions=*/false);
  if (value.is_discarded()) value = text;
  nlohmann::json::json_pointer ptr;
  size_t start = 0;
  while (true) {
    const auto dot = key.find('.', start);
    const std::string part = key.substr(start, dot - start);
    if (part.empty()) throw ConfigError("override key '" + key + "' is empty");
    ptr /= part;
    if (dot == std::string::npos) break;
    start = dot + 1;
  }
  config[ptr] = std::move(value);
}

namespace {

void RejectUnknownKeys(const nlohmann::json& given,
                       const nlohmann::json& known, const std::string& where) {
  if (!given.is_object()) {
    throw ConfigError("config section '" + where + "' must be an object");
  }
  for (const auto& [key, value] : given.items()) {
    if (!known.contains(key)) {
      throw ConfigError("unknown config key '" + where + key + "'");
    }
    if (known.at(key).is_object()) {
      RejectUnknownKeys(value, known.at(key), where + key + ".");
    }
  }
}

}  // namespace

RunConfig ResolveConfig(const std::optional<std::filesystem::path>& file,
                        const std::vector<std::string>& overrides) {
  const nlohmann::json defaults = RunConfig().ToJson();
  nlohmann::json merged = defaults;
  if (file) merged.merge_patch(LoadConfigFile(*file));
  for (const auto& o : overrides) ApplyOverride(merged, o);
  nlohmann::json known = defaults;
  known["env"] = nlohmann::json::object();
  for (const auto& [key, value] : merged.items()) {
    if (!known.contains(key)) {
      throw ConfigError("unknown config section '" + key + "'");
    }
    if (key != "env") RejectUnknownKeys(value, known.at(key), key + ".");
  }
  try {
    return RunConfig::FromJson(merged);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
}

std::uint64_t Fnv1a64(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string JsonHash(const nlohmann::json& j) {
  return fmt::format("{:016x}", Fnv1a64(j.dump()));
}

std::filesystem::path DefaultOutDir() {
  const char* dir = std::getenv("UPOSI_OUT_DIR");
  if (dir != nullptr && *dir != '\0') return dir;
  return "runs";
}

}  // namespace uposi
