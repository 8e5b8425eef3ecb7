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

#include "uposi/history.h"

#include <string>

#include "uposi/error.h"

namespace uposi {
namespace {

void CheckSize(const Vector& v, int expected, const char* what) {
  if (v.size() != expected) {
    throw DimensionError(std::string("history ") + what + " has size " +
                         std::to_string(v.size()) + ", expected " +
                         std::to_string(expected));
  }
}

}  // namespace

HistorySegment::HistorySegment(int obs_dim, int act_dim, int length)
    : obs_dim_(obs_dim), act_dim_(act_dim), length_(length) {
  if (obs_dim <= 0 || act_dim <= 0 || length <= 0) {
    throw DimensionError("history dimensions must be positive");
  }
  Clear(Vector::Zero(obs_dim));
}

void HistorySegment::Clear(const Vector& current_observation) {
  CheckSize(current_observation, obs_dim_, "observation");
  observations_.assign(length_, Vector::Zero(obs_dim_));
  actions_.assign(length_, Vector::Zero(act_dim_));
  current_ = current_observation;
}

void HistorySegment::Push(const Vector& obs, const Vector& act,
                          const Vector& next_obs) {
  CheckSize(obs, obs_dim_, "observation");
  CheckSize(act, act_dim_, "action");
  CheckSize(next_obs, obs_dim_, "next observation");
  observations_.pop_front();
  actions_.pop_front();
  observations_.push_back(obs);
  actions_.push_back(act);
  current_ = next_obs;
}

Vector HistorySegment::Flatten() const {
  Vector out(flat_dim());
  Eigen::Index k = 0;
  for (int i = 0; i < length_; ++i) {
    out.segment(k, obs_dim_) = observations_[i];
    k += obs_dim_;
    out.segment(k, act_dim_) = actions_[i];
    k += act_dim_;
  }
  out.segment(k, obs_dim_) = current_;
  return out;
}

}  // namespace uposi
