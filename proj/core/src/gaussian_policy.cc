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

#include "uposi/gaussian_policy.h"

#include <cmath>
#include <numbers>
#include <string>

#include "uposi/error.h"

namespace uposi {
namespace {

constexpr double kHalfLog2Pi = 0.91893853320467274178;  // log(2 pi) / 2

std::vector<int> MeanNetDims(int in, const std::vector<int>& hidden, int out) {
  std::vector<int> dims{in};
  dims.insert(dims.end(), hidden.begin(), hidden.end());
  dims.push_back(out);
  return dims;
}

}  // namespace

double LogProbDiagGaussian(const Vector& x, const Vector& mean,
                           const Vector& log_std) {
  double total = 0.0;
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    const double z = (x[i] - mean[i]) * std::exp(-log_std[i]);
    total += -0.5 * z * z - log_std[i] - kHalfLog2Pi;
  }
  return total;
}

double KlDiagGaussian(const Vector& mean1, const Vector& std1,
                      const Vector& mean2, const Vector& std2) {
  double total = 0.0;
  for (Eigen::Index i = 0; i < mean1.size(); ++i) {
    const double d = mean1[i] - mean2[i];
    const double v1 = std1[i] * std1[i];
    const double v2 = std2[i] * std2[i];
    total += std::log(std2[i] / std1[i]) + (v1 + d * d) / (2.0 * v2) - 0.5;
  }
  return total;
}

GaussianPolicy::GaussianPolicy(int obs_dim, int mu_dim, int act_dim,
                               const std::vector<int>& hidden)
    : obs_dim_(obs_dim),
      mu_dim_(mu_dim),
      mean_net_(MeanNetDims(obs_dim + mu_dim, hidden, act_dim)),
      log_std_(Vector::Zero(act_dim)) {
  if (obs_dim <= 0 || mu_dim < 0 || act_dim <= 0) {
    throw ConfigError("invalid policy dimensions");
  }
}

GaussianPolicy::GaussianPolicy(int obs_dim, int mu_dim, DenseNetwork mean_net,
                               Vector log_std)
    : obs_dim_(obs_dim),
      mu_dim_(mu_dim),
      mean_net_(std::move(mean_net)),
      log_std_(std::move(log_std)) {
  if (mean_net_.input_dim() != obs_dim + mu_dim ||
      mean_net_.output_dim() != log_std_.size()) {
    throw DimensionError("mean network does not match policy dimensions");
  }
}

void GaussianPolicy::Initialize(RandomSource& rng) {
  mean_net_.Initialize(rng, 0.01);
  log_std_.setZero();
}

int GaussianPolicy::num_params() const {
  return mean_net_.num_params() + static_cast<int>(log_std_.size());
}

Vector GaussianPolicy::Input(const Vector& obs, const Vector& mu_normed) const {
  if (obs.size() != obs_dim_) {
    throw DimensionError("policy observation has size " +
                         std::to_string(obs.size()) + ", expected " +
                         std::to_string(obs_dim_));
  }
  if (mu_dim_ == 0) return obs;
  if (mu_normed.size() != mu_dim_) {
    throw DimensionError("policy mu has size " +
                         std::to_string(mu_normed.size()) + ", expected " +
                         std::to_string(mu_dim_));
  }
  Vector in(obs_dim_ + mu_dim_);
  in << obs, mu_normed;
  return in;
}

Vector GaussianPolicy::Mean(const Vector& obs, const Vector& mu_normed) const {
  return mean_net_.Forward(Input(obs, mu_normed));
}

Vector GaussianPolicy::Sample(const Vector& obs, const Vector& mu_normed,
                              RandomSource& rng) const {
  Vector a = Mean(obs, mu_normed);
  for (Eigen::Index i = 0; i < a.size(); ++i) {
    a[i] += std::exp(log_std_[i]) * rng.Normal();
  }
  return a;
}

double GaussianPolicy::LogProb(const Vector& obs, const Vector& mu_normed,
                               const Vector& action) const {
  return LogProbDiagGaussian(action, Mean(obs, mu_normed), log_std_);
}

double GaussianPolicy::Entropy() const {
  return log_std_.sum() + static_cast<double>(log_std_.size()) *
                              (kHalfLog2Pi + 0.5);
}

Vector GaussianPolicy::GetParams() const {
  Vector out(num_params());
  out << mean_net_.GetParams(), log_std_;
  return out;
}

void GaussianPolicy::SetParams(const Vector& params) {
  if (params.size() != num_params()) {
    throw DimensionError("policy parameter vector has size " +
                         std::to_string(params.size()) + ", expected " +
                         std::to_string(num_params()));
  }
  const int n = mean_net_.num_params();
  mean_net_.SetParams(params.head(n));
  log_std_ = params.tail(log_std_.size());
}

}  // namespace uposi
