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

#include "uposi/envs/arm_throw.h"

#include <cmath>
#include <numbers>

#include <nlohmann/json.hpp>

#include "uposi/error.h"

namespace uposi {

ArmThrowParams ArmThrowParams::FromJson(const nlohmann::json& j) {
  ArmThrowParams p;
  p.base_height = j.value("base_height", p.base_height);
  p.link_length[0] = j.value("upper_link_length", p.link_length[0]);
  p.link_length[1] = j.value("lower_link_length", p.link_length[1]);
  p.link_mass[0] = j.value("upper_link_mass", p.link_mass[0]);
  p.link_mass[1] = j.value("lower_link_mass", p.link_mass[1]);
  p.block_mass_bounds.low = j.value("block_mass_low", p.block_mass_bounds.low);
  p.block_mass_bounds.high =
      j.value("block_mass_high", p.block_mass_bounds.high);
  p.torque_limit[0] = j.value("shoulder_torque_limit", p.torque_limit[0]);
  p.torque_limit[1] = j.value("elbow_torque_limit", p.torque_limit[1]);
  p.init_noise = j.value("init_noise", p.init_noise);
  p.k_height = j.value("k_height", p.k_height);
  p.k_effort = j.value("k_effort", p.k_effort);
  p.k_velocity = j.value("k_velocity", p.k_velocity);
  p.alive_bonus = j.value("alive_bonus", p.alive_bonus);
  p.target_height = j.value("target_height", p.target_height);
  p.floor_height = j.value("floor_height", p.floor_height);
  p.horizontal_limit = j.value("horizontal_limit", p.horizontal_limit);
  if (j.contains("release")) {
    const std::string mode = j.at("release").get<std::string>();
    if (mode == "velocity") {
      p.release = Release::kVelocityTrigger;
    } else if (mode == "timed") {
      p.release = Release::kTimed;
    } else {
      throw ConfigError("arm release mode must be 'velocity' or 'timed'");
    }
  }
  p.min_attach_steps = j.value("min_attach_steps", p.min_attach_steps);
  p.max_attach_steps = j.value("max_attach_steps", p.max_attach_steps);
  p.release_step = j.value("release_step", p.release_step);
  p.max_steps = j.value("max_steps", p.max_steps);
  return p;
}

ArmThrowEnv::ArmThrowEnv(ArmThrowParams params) : params_(params) {
  spec_.name = "arm";
  spec_.obs_dim = 6;
  spec_.act_dim = 2;
  spec_.mu_dim = 1;
  spec_.sampled_mu_dim = 1;
  spec_.mu_bounds = {params_.block_mass_bounds};
  spec_.action_low =
      -Eigen::Vector2d(params_.torque_limit[0], params_.torque_limit[1]);
  spec_.action_high =
      Eigen::Vector2d(params_.torque_limit[0], params_.torque_limit[1]);
  spec_.max_steps = params_.max_steps;
  spec_.performance = PerformanceKind::kMaxHeight;
}

PlanarChain ArmThrowEnv::Chain(double block_mass, bool attached) const {
  const double l0 = params_.link_length[0];
  const double l1 = params_.link_length[1];
  const double m0 = params_.link_mass[0];
  const double m1 = params_.link_mass[1];
  std::vector<PlanarChain::Link> links = {
      {-1, Vec2::Zero(), std::numbers::pi},
      {0, Vec2(0.0, l0), 0.0},
  };
  std::vector<PlanarChain::Body> bodies = {
      {0, Vec2(0.0, 0.5 * l0), m0, m0 * l0 * l0 / 12.0},
      {1, Vec2(0.0, 0.5 * l1), m1, m1 * l1 * l1 / 12.0},
  };
  if (attached) bodies.push_back({1, Vec2(0.0, l1), block_mass, 0.0});
  return PlanarChain({}, Vec2(0.0, params_.base_height), std::move(links),
                     std::move(bodies), kGravity);
}

namespace {

void TrackGripper(const PlanarChain& chain, double l1, EnvState& s) {
  const auto k = chain.Kinematic(s.q, s.qd);
  const Vec2 p = chain.PointPosition(k, 1, Vec2(0.0, l1));
  const Vec2 v = chain.PointVelocity(k, 1, Vec2(0.0, l1));
  s.aux[ArmThrowEnv::kBlockX] = p.x();
  s.aux[ArmThrowEnv::kBlockY] = p.y();
  s.aux[ArmThrowEnv::kBlockVx] = v.x();
  s.aux[ArmThrowEnv::kBlockVy] = v.y();
}

}  // namespace

EnvState ArmThrowEnv::Reset(const ModelParams& mu, RandomSource& rng) const {
  EnvState s;
  s.q.resize(2);
  s.qd.resize(2);
  const double n = params_.init_noise;
  for (int i = 0; i < 2; ++i) s.q[i] = rng.Uniform(-n, n);
  for (int i = 0; i < 2; ++i) s.qd[i] = rng.Uniform(-n, n);
  s.aux = Vector::Zero(kAuxSize);
  s.aux[kAttached] = 1.0;
  TrackGripper(Chain(mu[0], true), params_.link_length[1], s);
  s.aux[kPrevGripperVy] = s.aux[kBlockVy];
  return s;
}

EnvState ArmThrowEnv::Release(const EnvState& state) const {
  EnvState s = state;
  s.aux[kAttached] = 0.0;
  return s;
}

StepResult ArmThrowEnv::Step(const EnvState& state, const Vector& action,
                             const ModelParams& mu) const {
  CheckFinite(state, spec_.name);
  const Vector torque = spec_.ClampPhysical(action);
  const bool attached = state.aux[kAttached] > 0.5;
  const PlanarChain chain = Chain(mu[0], attached);
  StepResult out;
  out.next_state = state;
  EnvState& next = out.next_state;
  SemiImplicitEuler(next.q, next.qd,
                    chain.Accelerations(state.q, state.qd, torque), spec_.dt);
  next.step = state.step + 1;
  if (attached) {
    TrackGripper(chain, params_.link_length[1], next);
    const double vy = next.aux[kBlockVy];
    bool release = false;
    if (params_.release == ArmThrowParams::Release::kTimed) {
      release = next.step >= params_.release_step;
    } else {
      release = next.step >= params_.max_attach_steps ||
                (next.step >= params_.min_attach_steps && vy > 0.0 &&
                 vy < state.aux[kPrevGripperVy]);
    }
    next.aux[kPrevGripperVy] = vy;
    if (release) next.aux[kAttached] = 0.0;
  } else {
    // Constant-acceleration flight, exact for uniform gravity.
    const double dt = spec_.dt;
    next.aux[kBlockX] += dt * state.aux[kBlockVx];
    next.aux[kBlockY] += dt * state.aux[kBlockVy] - 0.5 * kGravity * dt * dt;
    next.aux[kBlockVy] -= kGravity * dt;
  }
  CheckFinite(next, spec_.name);
  out.reward = Reward(next, torque);
  out.terminated = Terminated(next);
  return out;
}

Vector ArmThrowEnv::Observe(const EnvState& state) const {
  Vector obs(6);
  obs << state.q, state.qd, state.aux[kBlockX], state.aux[kBlockY];
  return obs;
}

double ArmThrowEnv::TaskMetric(const EnvState& state) const {
  return state.aux[kBlockY];
}

double ArmThrowEnv::Reward(const EnvState& state, const Vector& torque) const {
  const double h = state.aux[kBlockY];
  const double r_h = h <= params_.target_height ? params_.target_height - h : 0.0;
  return -params_.k_height * r_h - params_.k_effort * torque.squaredNorm() -
         params_.k_velocity * state.qd.squaredNorm() + params_.alive_bonus;
}

bool ArmThrowEnv::Terminated(const EnvState& state) const {
  return state.aux[kBlockY] < params_.floor_height ||
         std::abs(state.aux[kBlockX]) > params_.horizontal_limit;
}

}  // namespace uposi
