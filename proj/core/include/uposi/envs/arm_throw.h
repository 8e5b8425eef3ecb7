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

#ifndef UPOSI_ENVS_ARM_THROW_H_
#define UPOSI_ENVS_ARM_THROW_H_

#include <nlohmann/json_fwd.hpp>

#include "uposi/envs/environment.h"
#include "uposi/envs/planar_chain.h"

namespace uposi {

// Two-link planar arm throwing a point-mass block; mu is the block mass.
// The block rides rigidly at the gripper until released, then flies
// ballistically (integrated in closed form for constant gravity).
//
// q = [shoulder angle, elbow angle], 0 = pointing straight down.
// Observation = [q, qd, block x, block y].
struct ArmThrowParams {
  enum class Release { kVelocityTrigger, kTimed };

  double base_height = 0.8;
  double link_length[2] = {0.4, 0.4};
  double link_mass[2] = {1.0, 1.0};
  Bounds block_mass_bounds = {0.2, 2.0};
  double torque_limit[2] = {40.0, 40.0};
  double init_noise = 0.01;
  double k_height = 10.0;
  double k_effort = 1e-5;
  double k_velocity = 1e-3;
  double alive_bonus = 35.0;
  double target_height = 2.0;
  double floor_height = -0.2;
  double horizontal_limit = 0.8;
  Release release = Release::kVelocityTrigger;
  // Velocity trigger: earliest step at which release may happen, and the
  // step at which the block is released regardless.
  int min_attach_steps = 50;
  int max_attach_steps = 300;
  // Timed mode: release step.
  int release_step = 150;
  int max_steps = 1000;

  static ArmThrowParams FromJson(const nlohmann::json& j);
};

class ArmThrowEnv : public Environment {
 public:
  // aux layout.
  enum Aux {
    kAttached = 0,
    kBlockX,
    kBlockY,
    kBlockVx,
    kBlockVy,
    kPrevGripperVy,
    kAuxSize
  };

  explicit ArmThrowEnv(ArmThrowParams params = {});

  const EnvSpec& spec() const override { return spec_; }
  EnvState Reset(const ModelParams& mu, RandomSource& rng) const override;
  StepResult Step(const EnvState& state, const Vector& action,
                  const ModelParams& mu) const override;
  Vector Observe(const EnvState& state) const override;
  double TaskMetric(const EnvState& state) const override;

  const ArmThrowParams& params() const { return params_; }
  PlanarChain Chain(double block_mass, bool attached) const;
  double Reward(const EnvState& state, const Vector& torque) const;
  bool Terminated(const EnvState& state) const;
  // Releases the block with the gripper's current velocity.
  EnvState Release(const EnvState& state) const;

 private:
  ArmThrowParams params_;
  EnvSpec spec_;
};

}  // namespace uposi

#endif  // UPOSI_ENVS_ARM_THROW_H_
