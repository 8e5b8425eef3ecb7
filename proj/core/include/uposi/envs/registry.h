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

#ifndef UPOSI_ENVS_REGISTRY_H_
#define UPOSI_ENVS_REGISTRY_H_

#include <memory>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "uposi/envs/environment.h"

namespace uposi {

// Canonical task names: "dpend", "arm", "hopper", "cartpole".
std::vector<std::string> TaskNames();

// Builds a task environment; `overrides` may replace any physical constant.
// Throws ConfigError for an unknown task.
std::unique_ptr<Environment> MakeEnvironment(const std::string& task,
                                             const nlohmann::json& overrides);
std::unique_ptr<Environment> MakeEnvironment(const std::string& task);

}  // namespace uposi

#endif  // UPOSI_ENVS_REGISTRY_H_
