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

#ifndef UPOSI_GAUSSIAN_POLICY_H_
#define UPOSI_GAUSSIAN_POLICY_H_

#include <vector>

#include "uposi/dense_network.h"

namespace uposi {

// sum_i [ -(x_i - m_i)^2 / (2 s_i^2) - log s_i - log(2 pi) / 2 ]
double LogProbDiagGaussian(const Vector& x, const Vector& mean,
                           const Vector& log_std);

// KL(N(m1, s1^2) || N(m2, s2^2)) for diagonal Gaussians given by stddevs.
double KlDiagGaussian(const Vector& mean1, const Vector& std1,
                      const Vector& mean2, const Vector& std2);

// Diagonal Gaussian policy over normalized actions. The mean network maps
// [observation, normalized mu] to the action mean; the log standard deviation
// is a free, state-independent parameter vector. A policy built with
// mu_dim == 0 ignores mu entirely (the unconditioned baseline).
//
// Flat parameters: the mean network's parameters followed by log_std.
class GaussianPolicy {
 public:
  GaussianPolicy() = default;
  GaussianPolicy(int obs_dim, int mu_dim, int act_dim,
                 const std::vector<int>& hidden = {64, 64});
  // Rebuilds a policy around an existing mean network.
  GaussianPolicy(int obs_dim, int mu_dim, DenseNetwork mean_net,
                 Vector log_std);

  // Mean-network init with a 0.01-scaled output layer; log_std = 0.
  void Initialize(RandomSource& rng);

  int obs_dim() const { return obs_dim_; }
  int mu_dim() const { return mu_dim_; }
  int act_dim() const { return mean_net_.output_dim(); }
  bool conditions_on_mu() const { return mu_dim_ > 0; }
  int num_params() const;

  // Network input for one step. `mu_normed` is not read when the policy
  // does not condition on mu.
  Vector Input(const Vector& obs, const Vector& mu_normed) const;

  Vector Mean(const Vector& obs, const Vector& mu_normed) const;
  Vector Sample(const Vector& obs, const Vector& mu_normed,
                RandomSource& rng) const;
  double LogProb(const Vector& obs, const Vector& mu_normed,
                 const Vector& action) const;

  const Vector& log_std() const { return log_std_; }
  Vector& log_std() { return log_std_; }
  Vector Std() const { return log_std_.array().exp(); }
  double Entropy() const;

  const DenseNetwork& mean_net() const { return mean_net_; }
  DenseNetwork& mean_net() { return mean_net_; }

  Vector GetParams() const;
  void SetParams(const Vector& params);

 private:
  int obs_dim_ = 0;
  int mu_dim_ = 0;
  DenseNetwork mean_net_;
  Vector log_std_;
};

}  // namespace uposi

#endif  // UPOSI_GAUSSIAN_POLICY_H_
