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

#include "uposi/envs/environment.h"

#include <cmath>
#include <numbers>

#include "uposi/error.h"

namespace uposi {

Vector EnvSpec::ClampNormalized(const Vector& normalized) const {
  if (normalized.size() != act_dim) {
    throw DimensionError(name + ": action has size " +
                         std::to_string(normalized.size()) + ", expected " +
                         std::to_string(act_dim));
  }
  return normalized.cwiseMax(-1.0).cwiseMin(1.0);
}

Vector EnvSpec::ToPhysical(const Vector& normalized) const {
  const Vector z = ClampNormalized(normalized);
  return action_low.array() +
         0.5 * (z.array() + 1.0) * (action_high - action_low).array();
}

Vector EnvSpec::ClampPhysical(const Vector& action) const {
  if (action.size() != act_dim) {
    throw DimensionError(name + ": action has size " +
                         std::to_string(action.size()) + ", expected " +
                         std::to_string(act_dim));
  }
  return action.cwiseMax(action_low).cwiseMin(action_high);
}

ModelParams Environment::PolicyMu(const EnvState& /*state*/,
                                  const ModelParams& mu) const {
  return mu;
}

ModelParams Environment::SampleMu(RandomSource& rng) const {
  const auto bounds = spec().sampled_bounds();
  Vector values(bounds.size());
  for (size_t i = 0; i < bounds.size(); ++i) {
    values[i] = rng.Uniform(bounds[i].low, bounds[i].high);
  }
  return ModelParams(std::move(values), {bounds.begin(), bounds.end()});
}

ModelParams Environment::MakeMu(const Vector& values) const {
  const auto bounds = spec().sampled_bounds();
  return ModelParams(values, {bounds.begin(), bounds.end()});
}

double WrapAngle(double angle) {
  constexpr double kTwoPi = 2.0 * std::numbers::pi;
  double a = std::fmod(angle + std::numbers::pi, kTwoPi);
  if (a <= 0.0) a += kTwoPi;
  return a - std::numbers::pi;
}

void CheckFinite(const EnvState& state, const std::string& env_name) {
  if (!state.q.allFinite() || !state.qd.allFinite() ||
      !state.aux.allFinite()) {
    throw NumericError(env_name + ": non-finite state");
  }
}

}  // namespace uposi
