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

#ifndef UPOSI_TYPES_H_
#define UPOSI_TYPES_H_

#include <span>
#include <vector>

#include <Eigen/Core>

namespace uposi {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

struct Bounds {
  double low = 0.0;
  double high = 0.0;
};

// Dynamics-model parameters with their per-dimension bounds. Values may lie
// outside the bounds (extrapolation experiments); InRange() reports it.
class ModelParams {
 public:
  ModelParams() = default;
  // Throws DimensionError when values and bounds disagree in size.
  ModelParams(Vector values, std::vector<Bounds> bounds);

  const Vector& values() const { return values_; }
  const std::vector<Bounds>& bounds() const { return bounds_; }
  int size() const { return static_cast<int>(values_.size()); }
  double operator[](int i) const { return values_[i]; }
  bool InRange() const;

 private:
  Vector values_;
  std::vector<Bounds> bounds_;
};

// Affine map low -> -1, high -> +1 per component. Out-of-bounds values map
// linearly outside [-1, 1]. Throws ConfigError on degenerate bounds.
Vector NormalizeMu(const ModelParams& mu);

// Inverse of NormalizeMu.
ModelParams DenormalizeMu(const Vector& normed, std::span<const Bounds> bounds);

// Midpoint of the bounds, i.e. the normalized zero vector.
ModelParams MidpointMu(std::span<const Bounds> bounds);

// One control step. `action` is the policy's raw normalized output (before
// clamping); `mu_normed` is the normalized ground-truth model parameter
// vector the policy input was built from.
struct Transition {
  Vector observation;
  Vector mu_normed;
  Vector action;
  double reward = 0.0;
  Vector next_observation;
  Vector next_mu_normed;
  bool terminated = false;
};

// One episode under a single ground-truth model parameter. An episode that
// ends without `terminated` on its last transition was truncated.
struct Rollout {
  ModelParams mu;
  std::vector<Transition> transitions;

  int size() const { return static_cast<int>(transitions.size()); }
  bool terminated() const {
    return !transitions.empty() && transitions.back().terminated;
  }
};

}  // namespace uposi

#endif  // UPOSI_TYPES_H_
