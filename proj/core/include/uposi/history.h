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

#ifndef UPOSI_HISTORY_H_
#define UPOSI_HISTORY_H_

#include <deque>

#include "uposi/types.h"

namespace uposi {

inline constexpr int kHistoryLength = 3;

// Fixed window of the last h (observation, action) pairs plus the current
// observation. Flattened layout, oldest first:
//   [obs_{t-h}, act_{t-h}, ..., obs_{t-1}, act_{t-1}, obs_t]
class HistorySegment {
 public:
  // Starts with h all-zero pairs and a zero current observation.
  HistorySegment(int obs_dim, int act_dim, int length = kHistoryLength);

  // Resets every slot to zero and sets the current observation.
  void Clear(const Vector& current_observation);

  // Evicts the oldest pair, appends (obs, act), and replaces the current
  // observation with next_obs. Throws DimensionError on size mismatch.
  void Push(const Vector& obs, const Vector& act, const Vector& next_obs);

  Vector Flatten() const;

  int length() const { return length_; }
  int obs_dim() const { return obs_dim_; }
  int act_dim() const { return act_dim_; }
  int flat_dim() const { return FlatDim(obs_dim_, act_dim_, length_); }
  const Vector& current_observation() const { return current_; }
  // Pair i, 0 = oldest.
  const Vector& observation(int i) const { return observations_[i]; }
  const Vector& action(int i) const { return actions_[i]; }

  static int FlatDim(int obs_dim, int act_dim, int length = kHistoryLength) {
    return (length + 1) * obs_dim + length * act_dim;
  }

 private:
  int obs_dim_;
  int act_dim_;
  int length_;
  std::deque<Vector> observations_;
  std::deque<Vector> actions_;
  Vector current_;
};

}  // namespace uposi

#endif  // UPOSI_HISTORY_H_
