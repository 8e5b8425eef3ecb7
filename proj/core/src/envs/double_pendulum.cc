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

#include "uposi/envs/double_pendulum.h"

#include <cmath>

#include <nlohmann/json.hpp>

#include "uposi/error.h"

namespace uposi {

DoublePendulumParams DoublePendulumParams::FromJson(const nlohmann::json& j) {
  DoublePendulumParams p;
  p.cart_mass = j.value("cart_mass", p.cart_mass);
  p.pole_mass[0] = j.value("lower_pole_mass", p.pole_mass[0]);
  p.pole_mass[1] = j.value("upper_pole_mass", p.pole_mass[1]);
  p.pole_length[0] = j.value("lower_pole_length", p.pole_length[0]);
  p.pole_length[1] = j.value("upper_pole_length", p.pole_length[1]);
  p.offset_bounds.low = j.value("offset_low", p.offset_bounds.low);
  p.offset_bounds.high = j.value("offset_high", p.offset_bounds.high);
  p.force_limit = j.value("force_limit", p.force_limit);
  p.init_noise = j.value("init_noise", p.init_noise);
  p.k_angle = j.value("k_angle", p.k_angle);
  p.k_cart = j.value("k_cart", p.k_cart);
  p.alive_bonus = j.value("alive_bonus", p.alive_bonus);
  p.cart_limit = j.value("cart_limit", p.cart_limit);
  p.angle_limit = j.value("angle_limit", p.angle_limit);
  p.max_steps = j.value("max_steps", p.max_steps);
  return p;
}

DoublePendulumEnv::DoublePendulumEnv(DoublePendulumParams params)
    : params_(params) {
  spec_.name = "dpend";
  spec_.obs_dim = 6;
  spec_.act_dim = 1;
  spec_.mu_dim = 1;
  spec_.sampled_mu_dim = 1;
  spec_.mu_bounds = {params_.offset_bounds};
  spec_.action_low = Vector::Constant(1, -params_.force_limit);
  spec_.action_high = Vector::Constant(1, params_.force_limit);
  spec_.max_steps = params_.max_steps;
  spec_.performance = PerformanceKind::kNormalizedReturn;
  // Half the alive bonus per step over the full horizon: a rollout scores
  // above 1 only if it stays up for the whole horizon with a modest lean.
  spec_.performance_scale = 0.5 * params_.alive_bonus * params_.max_steps;
}

PlanarChain DoublePendulumEnv::Chain(double offset) const {
  const double l0 = params_.pole_length[0];
  const double l1 = params_.pole_length[1];
  const double m0 = params_.pole_mass[0];
  const double m1 = params_.pole_mass[1];
  std::vector<PlanarChain::Link> links = {
      {-1, Vec2::Zero(), 0.0},
      {0, Vec2(0.0, l0), 0.0},
  };
  std::vector<PlanarChain::Body> bodies = {
      {-1, Vec2::Zero(), params_.cart_mass, 0.0},
      {0, Vec2(offset, 0.5 * l0 + 0.2 * offset), m0, m0 * l0 * l0 / 12.0},
      {1, Vec2(0.0, 0.5 * l1), m1, m1 * l1 * l1 / 12.0},
  };
  return PlanarChain({Vec2(1.0, 0.0)}, Vec2::Zero(), std::move(links),
                     std::move(bodies), kGravity);
}

EnvState DoublePendulumEnv::Reset(const ModelParams& /*mu*/,
                                  RandomSource& rng) const {
  EnvState s;
  s.q.resize(3);
  s.qd.resize(3);
  const double n = params_.init_noise;
  for (int i = 0; i < 3; ++i) s.q[i] = rng.Uniform(-n, n);
  for (int i = 0; i < 3; ++i) s.qd[i] = rng.Uniform(-n, n);
  s.aux.resize(0);
  return s;
}

StepResult DoublePendulumEnv::Step(const EnvState& state, const Vector& action,
                                   const ModelParams& mu) const {
  CheckFinite(state, spec_.name);
  const Vector force = spec_.ClampPhysical(action);
  const PlanarChain chain = Chain(mu[0]);
  Vector tau = Vector::Zero(3);
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

Vector DoublePendulumEnv::Observe(const EnvState& state) const {
  Vector obs(6);
  obs << state.q, state.qd;
  return obs;
}

double DoublePendulumEnv::Energy(const EnvState& state,
                                 const ModelParams& mu) const {
  const PlanarChain chain = Chain(mu[0]);
  const auto k = chain.Kinematic(state.q, state.qd);
  return chain.KineticEnergy(k) + chain.PotentialEnergy(k);
}

std::pair<double, double> DoublePendulumEnv::PoleDeviations(
    const EnvState& state) const {
  const double lower = std::abs(WrapAngle(state.q[1]));
  const double upper = std::abs(WrapAngle(state.q[1] + state.q[2]));
  return {lower, upper};
}

double DoublePendulumEnv::Reward(const EnvState& state) const {
  const auto [s1, s2] = PoleDeviations(state);
  const double sum = s1 + s2;
  return -params_.k_angle * sum * sum - params_.k_cart * std::abs(state.q[0]) +
         params_.alive_bonus;
}

bool DoublePendulumEnv::Terminated(const EnvState& state) const {
  const auto [s1, s2] = PoleDeviations(state);
  return std::abs(state.q[0]) >= params_.cart_limit ||
         s1 + s2 >= params_.angle_limit;
}

}  // namespace uposi
