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

#ifndef UPOSI_ENVS_ENVIRONMENT_H_
#define UPOSI_ENVS_ENVIRONMENT_H_

#include <memory>
#include <span>
#include <string>
#include <vector>

#include "uposi/random.h"
#include "uposi/types.h"

namespace uposi {

inline constexpr double kTimeStep = 0.002;
inline constexpr double kGravity = 9.81;

// How a rollout is scored by the evaluation harness.
enum class PerformanceKind {
  kNormalizedReturn,  // accumulated reward / performance_scale
  kMaxHeight,         // max of TaskMetric over the rollout
  kDistance,          // max of TaskMetric - TaskMetric(initial state)
};

struct EnvSpec {
  std::string name;
  int obs_dim = 0;
  int act_dim = 0;
  // Size of the parameter vector fed to the policy and regressed by OSI.
  int mu_dim = 0;
  // Leading components of mu that are drawn from rho_mu per episode. Any
  // remaining components are derived from the state (PolicyMu).
  int sampled_mu_dim = 0;
  std::vector<Bounds> mu_bounds;
  // Physical action bounds (N or N m).
  Vector action_low;
  Vector action_high;
  double dt = kTimeStep;
  int max_steps = 1000;
  PerformanceKind performance = PerformanceKind::kNormalizedReturn;
  double performance_scale = 1.0;

  std::span<const Bounds> sampled_bounds() const {
    return {mu_bounds.data(), static_cast<size_t>(sampled_mu_dim)};
  }
  // Clamps a normalized action to [-1, 1].
  Vector ClampNormalized(const Vector& normalized) const;
  // Clamps to [-1, 1] and maps affinely onto [action_low, action_high].
  Vector ToPhysical(const Vector& normalized) const;
  Vector ClampPhysical(const Vector& action) const;
};

// Generalized coordinates q, velocities qd, and task-specific extras.
struct EnvState {
  Vector q;
  Vector qd;
  Vector aux;
  int step = 0;
};

// Ground-contact force at one contact point.
struct ContactForce {
  double normal = 0.0;
  double tangential = 0.0;
  double friction = 0.0;
  double penetration = 0.0;
};

struct StepResult {
  EnvState next_state;
  double reward = 0.0;
  bool terminated = false;
  std::vector<ContactForce> contacts;
};

// Stateless environment description: every call is a pure function of its
// arguments, so one instance may be shared by concurrent workers.
class Environment {
 public:
  virtual ~Environment() = default;

  virtual const EnvSpec& spec() const = 0;

  // Initial-state distribution rho_0. `mu` holds the sampled components.
  virtual EnvState Reset(const ModelParams& mu, RandomSource& rng) const = 0;

  // One control step with a physical action (clamped to the bounds).
  // Throws NumericError when the state is not finite.
  virtual StepResult Step(const EnvState& state, const Vector& action,
                          const ModelParams& mu) const = 0;

  virtual Vector Observe(const EnvState& state) const = 0;

  // Full policy-side parameter vector. Defaults to the sampled parameters;
  // environments that identify state quantities append them here.
  virtual ModelParams PolicyMu(const EnvState& state,
                               const ModelParams& mu) const;

  // Per-step quantity used by kMaxHeight / kDistance scoring.
  virtual double TaskMetric(const EnvState& /*state*/) const { return 0.0; }

  // Uniform draw over the sampled bounds (rho_mu).
  ModelParams SampleMu(RandomSource& rng) const;

  // Builds sampled parameters from raw values, checking the dimension.
  ModelParams MakeMu(const Vector& values) const;
};

// Angle wrapped to (-pi, pi].
double WrapAngle(double angle);

void CheckFinite(const EnvState& state, const std::string& env_name);

}  // namespace uposi

#endif  // UPOSI_ENVS_ENVIRONMENT_H_
