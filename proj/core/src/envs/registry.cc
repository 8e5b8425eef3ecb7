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

#include "uposi/envs/registry.h"

#include <nlohmann/json.hpp>

#include "uposi/envs/arm_throw.h"
#include "uposi/envs/cartpole_swingup.h"
#include "uposi/envs/double_pendulum.h"
#include "uposi/envs/hopper.h"
#include "uposi/error.h"

namespace uposi {

std::vector<std::string> TaskNames() {
  return {"dpend", "arm", "hopper", "cartpole"};
}

std::unique_ptr<Environment> MakeEnvironment(const std::string& task,
                                             const nlohmann::json& overrides) {
  const nlohmann::json& j =
      overrides.is_object() ? overrides : nlohmann::json::object();
  if (task == "dpend") {
    return std::make_unique<DoublePendulumEnv>(DoublePendulumParams::FromJson(j));
  }
  if (task == "arm") {
    return std::make_unique<ArmThrowEnv>(ArmThrowParams::FromJson(j));
  }
  if (task == "hopper") {
    return std::make_unique<HopperEnv>(HopperParams::FromJson(j));
  }
  if (task == "cartpole") {
    return std::make_unique<CartPoleSwingUpEnv>(CartPoleParams::FromJson(j));
  }
  throw ConfigError("unknown task '" + task +
                    "' (expected dpend, arm, hopper or cartpole)");
}

std::unique_ptr<Environment> MakeEnvironment(const std::string& task) {
  return MakeEnvironment(task, nlohmann::json::object());
}

}  // namespace uposi
