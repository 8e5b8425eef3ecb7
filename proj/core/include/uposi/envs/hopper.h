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

#ifndef UPOSI_ENVS_HOPPER_H_
#define UPOSI_ENVS_HOPPER_H_

#include <nlohmann/json_fwd.hpp>

#include "uposi/envs/environment.h"
#include "uposi/envs/planar_chain.h"

namespace uposi {

// Planar one-legged hopper: torso, thigh, shank and foot. mu is the
// foot-ground friction coefficient.
//
// q = [x, z, torso pitch, hip, knee, ankle]; (x, z) is the torso center of
// mass. The foot touches the ground at a heel and a toe point through a
// spring-damper normal force and a viscous tangential force clamped to the
// Coulomb cone |f_t| <= mu f_n. Contact forces are solved with the damping
// and stiffness terms treated implicitly so the stiff contact stays stable
// at the control timestep. Observation = [q without x, qd].
struct HopperParams {
  double link_mass[4] = {3.5, 1.5, 1.0, 0.5};
  double torso_length = 0.4;
  double thigh_length = 0.45;
  double shank_length = 0.5;
  double ankle_height = 0.05;
  double heel = -0.13;
  double toe = 0.26;
  Bounds friction_bounds = {0.3, 1.0};
  double torque_limit[3] = {60.0, 60.0, 30.0};
  double contact_stiffness = 2e5;
  double contact_damping = 2e3;
  double tangential_damping = 2e4;
  double init_noise = 0.005;
  double k_velocity = 1.0;
  double k_effort = 0.002;
  double alive_bonus = 3.0;
  double fall_height_fraction = 0.8;
  double fall_pitch = 1.0;
  int max_steps = 1000;

  static HopperParams FromJson(const nlohmann::json& j);
};

class HopperEnv : public Environment {
 public:
  explicit HopperEnv(HopperParams params = {});

  const EnvSpec& spec() const override { return spec_; }
  EnvState Reset(const ModelParams& mu, RandomSource& rng) const override;
  StepResult Step(const EnvState& state, const Vector& action,
                  const ModelParams& mu) const override;
  Vector Observe(const EnvState& state) const override;
  double TaskMetric(const EnvState& state) const override;

  const HopperParams& params() const { return params_; }
  const PlanarChain& chain() const { return chain_; }
  // Torso height when standing upright with the foot flat on the ground.
  double StandingHeight() const;
  // Mean x of the heel and toe contact points.
  double FootX(const EnvState& state) const;
  double Reward(const EnvState& next_state, const Vector& torque) const;
  bool Terminated(const EnvState& state) const;

 private:
  HopperParams params_;
  EnvSpec spec_;
  PlanarChain chain_;
};

}  // namespace uposi

#endif  // UPOSI_ENVS_HOPPER_H_
