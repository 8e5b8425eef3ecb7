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

#ifndef UPOSI_ENVS_CARTPOLE_SWINGUP_H_
#define UPOSI_ENVS_CARTPOLE_SWINGUP_H_

#include <nlohmann/json_fwd.hpp>

#include "uposi/envs/environment.h"
#include "uposi/envs/planar_chain.h"

namespace uposi {

// Cart-pole swing-up with a point mass at the pole tip. Sampled mu =
// [tip mass, pole length]; the policy-side mu appends the cart and pole
// velocities, which OSI must estimate because the observation carries
// positions only.
//
// q = [cart x, pole angle] with angle 0 upright (not wrapped).
// aux = [initial pole angle].
struct CartPoleParams {
  double cart_mass = 1.0;
  double pole_mass = 0.5;
  Bounds tip_mass_bounds = {0.1, 1.0};
  Bounds length_bounds = {0.2, 0.8};
  double cart_velocity_scale = 5.0;
  double pole_velocity_scale = 10.0;
  double force_limit = 40.0;
  double init_noise = 0.005;
  double k_sigma = 1.0;
  double k_cart = 0.2;
  double w = 1.0;
  double v = 1.0;
  double a = 0.1;
  double alive_bonus = 10.0;
  double cart_limit = 2.0;
  double rotation_limit = 4.0 * 3.14159265358979323846;
  int max_steps = 1000;

  static CartPoleParams FromJson(const nlohmann::json& j);
};

class CartPoleSwingUpEnv : public Environment {
 public:
  explicit CartPoleSwingUpEnv(CartPoleParams params = {});

  const EnvSpec& spec() const override { return spec_; }
  EnvState Reset(const ModelParams& mu, RandomSource& rng) const override;
  StepResult Step(const EnvState& state, const Vector& action,
                  const ModelParams& mu) const override;
  Vector Observe(const EnvState& state) const override;
  ModelParams PolicyMu(const EnvState& state,
                       const ModelParams& mu) const override;

  const CartPoleParams& params() const { return params_; }
  PlanarChain Chain(double tip_mass, double length) const;
  double Energy(const EnvState& state, const ModelParams& mu) const;
  double Reward(const EnvState& state) const;
  bool Terminated(const EnvState& state) const;

 private:
  CartPoleParams params_;
  EnvSpec spec_;
};

}  // namespace uposi

#endif  // UPOSI_ENVS_CARTPOLE_SWINGUP_H_
