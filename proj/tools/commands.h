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

#ifndef UPOSI_TOOLS_COMMANDS_H_
#define UPOSI_TOOLS_COMMANDS_H_

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "uposi/results.h"

namespace uposi::tools {

// Inputs shared by every command. Paths are used verbatim.
struct CommandArgs {
  std::string command;  // train-up, train-osi, eval sweep, ...
  std::string task;
  std::uint64_t seed = 1;
  std::optional<std::filesystem::path> config_file;
  std::vector<std::string> overrides;
  std::filesystem::path out_dir;
  std::string up;       // UP checkpoint
  std::string osi;      // OSI network
  std::string regular;  // regular-policy checkpoint
  bool regular_mode = false;  // train-up: drop mu from the policy input
  std::optional<int> grid_points;
  std::optional<int> n_eval;
  std::optional<double> fixed_mu;  // friction-track UP_FIXED value
  bool evaluate_osi = true;        // train-osi: per-round UP-OSI sweep
};

// Builds the manifest for `args` (resolving the configuration).
Manifest MakeManifest(const CommandArgs& args);

// Executes a manifest, writing every output and the manifest itself into
// `out_dir`. Progress goes to `log`. Throws uposi::Error on failure.
void Execute(const Manifest& manifest, const std::filesystem::path& out_dir,
             std::ostream& log);

}  // namespace uposi::tools

#endif  // UPOSI_TOOLS_COMMANDS_H_
