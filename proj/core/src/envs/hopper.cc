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

#include "uposi/envs/hopper.h"

#include <algorithm>
#include <cmath>

#include <Eigen/Cholesky>
#include <Eigen/LU>
#include <nlohmann/json.hpp>

namespace uposi {
namespace {

constexpr int kDofs = 6;
constexpr int kFootLink = 3;

PlanarChain BuildChain(const HopperParams& p) {
  std::vector<PlanarChain::Link> links = {
      {-1, Vec2::Zero(), 0.0},
      {0, Vec2(0.0, -0.5 * p.torso_length), 0.0},
      {1, Vec2(0.0, -p.thigh_length), 0.0},
      {2, Vec2(0.0, -p.shank_length), 0.0},
  };
  auto rod = [](double m, double l) { return m * l * l / 12.0; };
  const double foot_length = p.toe - p.heel;
  std::vector<PlanarChain::Body> bodies = {
      {0, Vec2::Zero(), p.link_mass[0], rod(p.link_mass[0], p.torso_length)},
      {1, Vec2(0.0, -0.5 * p.thigh_length), p.link_mass[1],
       rod(p.link_mass[1], p.thigh_length)},
      {2, Vec2(0.0, -0.5 * p.shank_length), p.link_mass[2],
       rod(p.link_mass[2], p.shank_length)},
      {3, Vec2(0.5 * (p.heel + p.toe), -p.ankle_height), p.link_mass[3],
       rod(p.link_mass[3], foot_length)},
  };
  return PlanarChain({Vec2(1.0, 0.0), Vec2(0.0, 1.0)}, Vec2::Zero(),
                     std::move(links), std::move(bodies), kGravity);
}

}  // namespace

HopperParams HopperParams::FromJson(const nlohmann::json& j) {
  HopperParams p;
  p.link_mass[0] = j.value("torso_mass", p.link_mass[0]);
  p.link_mass[1] = j.value("thigh_mass", p.link_mass[1]);
  p.link_mass[2] = j.value("shank_mass", p.link_mass[2]);
  p.link_mass[3] = j.value("foot_mass", p.link_mass[3]);
  p.torso_length = j.value("torso_length", p.torso_length);
  p.thigh_length = j.value("thigh_length", p.thigh_length);
  p.shank_length = j.value("shank_length", p.shank_length);
  p.ankle_height = j.value("ankle_height", p.ankle_height);
  p.heel = j.value("heel", p.heel);
  p.toe = j.value("toe", p.toe);
  p.friction_bounds.low = j.value("friction_low", p.friction_bounds.low);
  p.friction_bounds.high = j.value("friction_high", p.friction_bounds.high);
  p.torque_limit[0] = j.value("hip_torque_limit", p.torque_limit[0]);
  p.torque_limit[1] = j.value("knee_torque_limit", p.torque_limit[1]);
  p.torque_limit[2] = j.value("ankle_torque_limit", p.torque_limit[2]);
  p.contact_stiffness = j.value("contact_stiffness", p.contact_stiffness);
  p.contact_damping = j.value("contact_damping", p.contact_damping);
  p.tangential_damping = j.value("tangential_damping", p.tangential_damping);
  p.init_noise = j.value("init_noise", p.init_noise);
  p.k_velocity = j.value("k_velocity", p.k_velocity);
  p.k_effort = j.value("k_effort", p.k_effort);
  p.alive_bonus = j.value("alive_bonus", p.alive_bonus);
  p.fall_height_fraction =
      j.value("fall_height_fraction", p.fall_height_fraction);
  p.fall_pitch = j.value("fall_pitch", p.fall_pitch);
  p.max_steps = j.value("max_steps", p.max_steps);
  return p;
}

HopperEnv::HopperEnv(HopperParams params)
    : params_(params), chain_(BuildChain(params_)) {
  spec_.name = "hopper";
  spec_.obs_dim = 11;
  spec_.act_dim = 3;
  spec_.mu_dim = 1;
  spec_.sampled_mu_dim = 1;
  spec_.mu_bounds = {params_.friction_bounds};
  spec_.action_high = Eigen::Vector3d(
      params_.torque_limit[0], params_.torque_limit[1], params_.torque_limit[2]);
  spec_.action_low = -spec_.action_high;
  spec_.max_steps = params_.max_steps;
  spec_.performance = PerformanceKind::kDistance;
}

double HopperEnv::StandingHeight() const {
  return 0.5 * params_.torso_length + params_.thigh_length +
         params_.shank_length + params_.ankle_height;
}

EnvState HopperEnv::Reset(const ModelParams& /*mu*/, RandomSource& rng) const {
  EnvState s;
  s.q = Vector::Zero(kDofs);
  s.qd = Vector::Zero(kDofs);
  s.q[1] = StandingHeight();
  const double n = params_.init_noise;
  for (int i = 2; i < kDofs; ++i) s.q[i] = rng.Uniform(-n, n);
  for (int i = 0; i < kDofs; ++i) s.qd[i] = rng.Uniform(-n, n);
  // Lift the body so the lowest contact point just touches the ground.
  const auto k = chain_.Kinematic(s.q, s.qd);
  const double lowest = std::min(
      chain_.PointPosition(k, kFootLink, Vec2(params_.heel, -params_.ankle_height)).y(),
      chain_.PointPosition(k, kFootLink, Vec2(params_.toe, -params_.ankle_height)).y());
  s.q[1] -= lowest;
  s.aux.resize(0);
  return s;
}

StepResult HopperEnv::Step(const EnvState& state, const Vector& action,
                           const ModelParams& mu) const {
  CheckFinite(state, spec_.name);
  const Vector torque = spec_.ClampPhysical(action);
  const double friction = mu[0];
  const double dt = spec_.dt;

  const auto k = chain_.Kinematic(state.q, state.qd);
  const Matrix mass = chain_.MassMatrix(k);
  const Eigen::LDLT<Matrix> solver(mass);
  Vector rhs = chain_.BiasForces(k);
  rhs.tail(3) += torque;
  const Vector qd_free = state.qd + dt * solver.solve(rhs);

  const Vec2 points[2] = {Vec2(params_.heel, -params_.ankle_height),
                          Vec2(params_.toe, -params_.ankle_height)};
  StepResult out;
  out.contacts.resize(2);
  std::vector<int> active;
  for (int c = 0; c < 2; ++c) {
    out.contacts[c].friction = friction;
    const double depth = -chain_.PointPosition(k, kFootLink, points[c]).y();
    out.contacts[c].penetration = std::max(depth, 0.0);
    if (depth > 0.0) active.push_back(c);
  }

  // Contact forces f = (f_t, f_n) per active point solve
  //   (I + dt C A) f = b - C J qd_free,   A = J M^-1 J^T,
  // i.e. damping and stiffness evaluated at the end-of-step velocity. Points
  // with a pulling normal force are dropped and the system re-solved.
  const double kn = params_.contact_stiffness;
  const double cn = params_.contact_damping + dt * kn;
  const double ct = params_.tangential_damping;
  Vector generalized_contact = Vector::Zero(kDofs);
  while (!active.empty()) {
    const int n = static_cast<int>(active.size());
    Matrix jac(2 * n, kDofs);
    Vector b(2 * n);
    Vector c_diag(2 * n);
    for (int i = 0; i < n; ++i) {
      const int c = active[i];
      jac.middleRows(2 * i, 2) = chain_.PointJacobian(k, kFootLink, points[c]);
      b[2 * i] = 0.0;
      b[2 * i + 1] = kn * out.contacts[c].penetration;
      c_diag[2 * i] = ct;
      c_diag[2 * i + 1] = cn;
    }
    const Matrix a = jac * solver.solve(jac.transpose());
    Matrix lhs = dt * c_diag.asDiagonal() * a;
    lhs.diagonal().array() += 1.0;
    const Vector f = lhs.partialPivLu().solve(
        b - c_diag.cwiseProduct(jac * qd_free));
    std::vector<int> still;
    for (int i = 0; i < n; ++i) {
      if (f[2 * i + 1] > 0.0) still.push_back(active[i]);
    }
    if (static_cast<int>(still.size()) < n) {
      active = std::move(still);
      continue;
    }
    Vector clamped(2 * n);
    for (int i = 0; i < n; ++i) {
      const double fn = f[2 * i + 1];
      const double limit = friction * fn;
      const double ft = std::clamp(f[2 * i], -limit, limit);
      clamped[2 * i] = ft;
      clamped[2 * i + 1] = fn;
      out.contacts[active[i]].normal = fn;
      out.contacts[active[i]].tangential = ft;
    }
    generalized_contact = jac.transpose() * clamped;
    break;
  }

  out.next_state = state;
  EnvState& next = out.next_state;
  SemiImplicitEuler(next.q, next.qd, solver.solve(rhs + generalized_contact),
                    dt);
  next.step = state.step + 1;
  CheckFinite(next, spec_.name);
  out.reward = Reward(next, torque);
  out.terminated = Terminated(next);
  return out;
}

Vector HopperEnv::Observe(const EnvState& state) const {
  Vector obs(11);
  obs << state.q.tail(kDofs - 1), state.qd;
  return obs;
}

double HopperEnv::TaskMetric(const EnvState& state) const {
  return state.q[0];
}

double HopperEnv::FootX(const EnvState& state) const {
  const auto k = chain_.Kinematic(state.q, state.qd);
  const double heel =
      chain_.PointPosition(k, kFootLink, Vec2(params_.heel, -params_.ankle_height)).x();
  const double toe =
      chain_.PointPosition(k, kFootLink, Vec2(params_.toe, -params_.ankle_height)).x();
  return 0.5 * (heel + toe);
}

double HopperEnv::Reward(const EnvState& next_state,
                         const Vector& torque) const {
  // Effort is charged on the normalized command so the coefficient does not
  // depend on the torque limits.
  const Vector u = torque.cwiseQuotient(spec_.action_high);
  return params_.k_velocity * next_state.qd[0] -
         params_.k_effort * u.squaredNorm() + params_.alive_bonus;
}

bool HopperEnv::Terminated(const EnvState& state) const {
  return state.q[1] < params_.fall_height_fraction * StandingHeight() ||
         std::abs(state.q[2]) > params_.fall_pitch;
}

}  // namespace uposi
