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

#ifndef UPOSI_ENVS_DOUBLE_PENDULUM_H_
#define UPOSI_ENVS_DOUBLE_PENDULUM_H_

#include <nlohmann/json_fwd.hpp>

#include "uposi/envs/environment.h"
#include "uposi/envs/planar_chain.h"

namespace uposi {

// Double inverted pendulum on a cart. mu is the lower pole's center-of-mass
// offset; the center of mass sits at (mu, 0.2 mu) from the pole's geometric
// center, expressed in the pole frame (x across the pole, y along it).
//
// q = [cart x, lower pole angle from upright, upper pole angle relative to
// the lower pole]. Observation = [q, qd].
struct DoublePendulumParams {
  double cart_mass = 1.0;
  double pole_mass[2] = {0.5, 0.5};
  double pole_length[2] = {0.5, 0.5};
  Bounds offset_bounds = {-0.6, 0.6};
  double force_limit = 50.0;
  double init_noise = 0.01;
  double k_angle = 10.0;
  double k_cart = 1.0;
  double alive_bonus = 10.0;
  double cart_limit = 5.0;
  double angle_limit = 0.5 * 3.14159265358979323846;
  int max_steps = 1000;

  static DoublePendulumParams FromJson(const nlohmann::json& j);
};

class DoublePendulumEnv : public Environment {
 public:
  explicit DoublePendulumEnv(DoublePendulumParams params = {});

  const EnvSpec& spec() const override { return spec_; }
  EnvState Reset(const ModelParams& mu, RandomSource& rng) const override;
  StepResult Step(const EnvState& state, const Vector& action,
                  const ModelParams& mu) const override;
  Vector Observe(const EnvState& state) const override;

  const DoublePendulumParams& params() const { return params_; }
  PlanarChain Chain(double offset) const;
  double Energy(const EnvState& state, const ModelParams& mu) const;
  // Absolute deviations from upright of both poles, each in [0, pi].
  std::pair<double, double> PoleDeviations(const EnvState& state) const;
  double Reward(const EnvState& state) const;
  bool Terminated(const EnvState& state) const;

 private:
  DoublePendulumParams params_;
  EnvSpec spec_;
};

}  // namespace uposi

#endif  // UPOSI_ENVS_DOUBLE_PENDULUM_H_
