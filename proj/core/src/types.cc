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

#include "uposi/types.h"

#include <string>

#include "uposi/error.h"

namespace uposi {
namespace {

void CheckBounds(const Bounds& b) {
  if (!(b.low < b.high)) {
    throw ConfigError("degenerate model-parameter bounds [" +
                      std::to_string(b.low) + ", " + std::to_string(b.high) +
                      "]");
  }
}

}  // namespace

ModelParams::ModelParams(Vector values, std::vector<Bounds> bounds)
    : values_(std::move(values)), bounds_(std::move(bounds)) {
  if (values_.size() != static_cast<Eigen::Index>(bounds_.size())) {
    throw DimensionError("model parameters have " +
                         std::to_string(values_.size()) + " values but " +
                         std::to_string(bounds_.size()) + " bounds");
  }
}

bool ModelParams::InRange() const {
  for (int i = 0; i < size(); ++i) {
    if (values_[i] < bounds_[i].low || values_[i] > bounds_[i].high) {
      return false;
    }
  }
  return true;
}

Vector NormalizeMu(const ModelParams& mu) {
  Vector out(mu.size());
  for (int i = 0; i < mu.size(); ++i) {
    const Bounds& b = mu.bounds()[i];
    CheckBounds(b);
    out[i] = 2.0 * (mu[i] - b.low) / (b.high - b.low) - 1.0;
  }
  return out;
}

ModelParams DenormalizeMu(const Vector& normed,
                          std::span<const Bounds> bounds) {
  if (normed.size() != static_cast<Eigen::Index>(bounds.size())) {
    throw DimensionError("normalized parameter vector has size " +
                         std::to_string(normed.size()) + ", bounds have " +
                         std::to_string(bounds.size()));
  }
  Vector values(normed.size());
  for (Eigen::Index i = 0; i < normed.size(); ++i) {
    const Bounds& b = bounds[i];
    CheckBounds(b);
    values[i] = b.low + 0.5 * (normed[i] + 1.0) * (b.high - b.low);
  }
  return ModelParams(std::move(values), {bounds.begin(), bounds.end()});
}

ModelParams MidpointMu(std::span<const Bounds> bounds) {
  return DenormalizeMu(Vector::Zero(bounds.size()), bounds);
}

}  // namespace uposi
