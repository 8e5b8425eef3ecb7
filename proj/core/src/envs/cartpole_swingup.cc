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

#include "uposi/envs/cartpole_swingup.h"

#include <cmath>
#include <numbers>

#include <nlohmann/json.hpp>

namespace uposi {

CartPoleParams CartPoleParams::FromJson(const nlohmann::json& j) {
  CartPoleParams p;
  p.cart_mass = j.value("cart_mass", p.cart_mass);
  p.pole_mass = j.value("pole_mass", p.pole_mass);
  p.tip_mass_bounds.low = j.value("tip_mass_low", p.tip_mass_bounds.low);
  p.tip_mass_bounds.high = j.value("tip_mass_high", p.tip_mass_bounds.high);
  p.length_bounds.low = j.value("length_low", p.length_bounds.low);
  p.length_bounds.high = j.value("length_high", p.length_bounds.high);
  p.cart_velocity_scale =
      j.value("cart_velocity_scale", p.cart_velocity_scale);
  p.pole_velocity_scale =
      j.value("pole_velocity_scale", p.pole_velocity_scale);
  p.force_limit = j.value("force_limit", p.force_limit);
  p.init_noise = j.value("init_noise", p.init_noise);
  p.k_sigma = j.value("k_sigma", p.k_sigma);
  p.k_cart = j.value("k_cart", p.k_cart);
  p.w = j.value("w", p.w);
  p.v = j.value("v", p.v);
  p.a = j.value("a", p.a);
  p.alive_bonus = j.value("alive_bonus", p.alive_bonus);
  p.cart_limit = j.value("cart_limit", p.cart_limit);
  p.rotation_limit = j.value("rotation_limit", p.rotation_limit);
  p.max_steps = j.value("max_steps", p.max_steps);
  return p;
}

CartPoleSwingUpEnv::CartPoleSwingUpEnv(CartPoleParams params)
    : params_(params) {
  spec_.name = "cartpole";
  spec_.obs_dim = 2;
  spec_.act_dim = 1;
  spec_.mu_dim = 4;
  spec_.sampled_mu_dim = 2;
  spec_.mu_bounds = {
      params_.tip_mass_bounds,
      params_.length_bounds,
      {-params_.cart_velocity_scale, params_.cart_velocity_scale},
      {-params_.pole_velocity_scale, params_.pole_velocity_scale},
  };
  spec_.action_low = Vector::Constant(1, -params_.force_limit);
  spec_.action_high = Vector::Constant(1, params_.force_limit);
  spec_.max_steps = params_.max_steps;
  spec_.performance = PerformanceKind::kNormalizedReturn;
  spec_.performance_scale = 0.5 * params_.alive_bonus * params_.max_steps;
}

PlanarChain CartPoleSwingUpEnv::Chain(double tip_mass, double length) const {
  const double m = params_.pole_mass;
  std::vector<PlanarChain::Link> links = {{-1, Vec2::Zero(), 0.0}};
  std::vector<PlanarChain::Body> bodies = {
      {-1, Vec2::Zero(), params_.cart_mass, 0.0},
      {0, Vec2(0.0, 0.5 * length), m, m * length * length / 12.0},
      {0, Vec2(0.0, length), tip_mass, 0.0},
  };
  return PlanarChain({Vec2(1.0, 0.0)}, Vec2::Zero(), std::move(links),
                     std::move(bodies), kGravity);
}

EnvState CartPoleSwingUpEnv::Reset(const ModelParams& /*mu*/,
                                   RandomSource& rng) const {
  EnvState s;
  s.q = Vector::Zero(2);
  s.qd = Vector::Zero(2);
  const double side = rng.Bernoulli(0.5) ? 1.0 : -1.0;
  s.q[1] = side * std::numbers::pi + rng.Normal(0.0, params_.init_noise);
  s.aux = Vector::Constant(1, s.q[1]);
  return s;
}

StepResult CartPoleSwingUpEnv::Step(const EnvState& state,
                                    const Vector& action,
                                    const ModelParams& mu) const {
  CheckFinite(state, spec_.name);
  const Vector force = spec_.ClampPhysical(action);
  const PlanarChain chain = Chain(mu[0], mu[1]);
  Vector tau = Vector::Zero(2);
  tau[0] = force[0];
  StepResult out;
  out.next_state = state;
  EnvState& next = out.next_state;
  SemiImplicitEuler(next.q, next.qd, chain.Accelerations(state.q, state.qd, tau),
                    spec_.dt);
  next.step = state.step + 1;
  CheckFinite(next, spec_.name);
  out.reward = Reward(next);
  out.terminated = Terminated(next);
  return out;
}

Vector CartPoleSwingUpEnv::Observe(const EnvState& state) const {
  return state.q;
}

ModelParams CartPoleSwingUpEnv::PolicyMu(const EnvState& state,
                                         const ModelParams& mu) const {
  Vector values(4);
  values << mu[0], mu[1], state.qd[0], state.qd[1];
  return ModelParams(std::move(values), spec_.mu_bounds);
}

double CartPoleSwingUpEnv::Energy(const EnvState& state,
                                  const ModelParams& mu) const {
  const PlanarChain chain = Chain(mu[0], mu[1]);
  const auto k = chain.Kinematic(state.q, state.qd);
  return chain.KineticEnergy(k) + chain.PotentialEnergy(k);
}

double CartPoleSwingUpEnv::Reward(const EnvState& state) const {
  const double sigma = WrapAngle(state.q[1]);
  const double s2 = sigma * sigma;
  const double r_sigma = params_.w * s2 + params_.v * std::log(s2 + params_.a);
  return -params_.k_sigma * r_sigma - params_.k_cart * std::abs(state.q[0]) +
         params_.alive_bonus;
}

bool CartPoleSwingUpEnv::Terminated(const EnvState& state) const {
  return std::abs(state.q[1] - state.aux[0]) > params_.rotation_limit ||
         std::abs(state.q[0]) > params_.cart_limit;
}

}  // namespace uposi
