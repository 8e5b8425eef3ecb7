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

#ifndef UPOSI_OSI_H_
#define UPOSI_OSI_H_

#include <filesystem>
#include <functional>
#include <iosfwd>
#include <limits>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "uposi/dense_network.h"
#include "uposi/envs/environment.h"
#include "uposi/gaussian_policy.h"
#include "uposi/history.h"
#include "uposi/random.h"
#include "uposi/types.h"

namespace uposi {

struct OsiConfig {
  // Total rounds: round 0 uses matched data, later rounds mismatched data.
  int iterations = 5;
  int mu_samples = 30;
  double rollout_seconds = 5.0;
  int epochs = 20;
  int minibatch = 128;
  double learning_rate = 1e-3;
  std::vector<int> hidden = {256, 128, 64};
  double dropout = 0.1;
  // Matched rollouts generated once for the held-out loss.
  int holdout_mu_samples = 10;
  // Stop early when the held-out loss improves by less than this relative
  // amount. Zero disables early stopping.
  double early_stop_tolerance = 0.0;
  int num_workers = 1;

  void Validate() const;
  static OsiConfig FromJson(const nlohmann::json& j);
  nlohmann::json ToJson() const;
};

// Accumulated (flattened history, normalized label) pairs. Never cleared.
class OsiTrainingBuffer {
 public:
  void Add(Vector history, Vector label);
  void Append(const OsiTrainingBuffer& other);
  int size() const { return static_cast<int>(histories_.size()); }
  bool empty() const { return histories_.empty(); }
  const Vector& history(int i) const { return histories_[i]; }
  const Vector& label(int i) const { return labels_[i]; }
  // Column-stacked copies of the selected entries.
  Matrix HistoryMatrix(const std::vector<int>& indices) const;
  Matrix LabelMatrix(const std::vector<int>& indices) const;

 private:
  std::vector<Vector> histories_;
  std::vector<Vector> labels_;
};

// Access point for the ground-truth policy-side parameters. Reads are
// counted so tests can prove a controller never consulted the truth.
class GroundTruth {
 public:
  explicit GroundTruth(const Environment& env) : env_(&env) {}
  void Update(const EnvState& state, const ModelParams& mu);
  // Normalized policy-side parameters at the current state.
  Vector Read();
  int reads() const { return reads_; }

 private:
  const Environment* env_;
  EnvState state_;
  ModelParams mu_;
  int reads_ = 0;
};

// Source of the normalized mu fed to the universal policy at runtime.
class MuEstimator {
 public:
  virtual ~MuEstimator() = default;
  virtual Vector Estimate(const HistorySegment& history,
                          GroundTruth& truth) const = 0;
  // Used for the first h steps, before the history is filled.
  virtual Vector Prior(GroundTruth& truth) const = 0;
};

// Dense regressor from a flattened history to normalized mu. The output is
// not clamped so extrapolated predictions are representable.
class OsiNetwork : public MuEstimator {
 public:
  OsiNetwork() = default;
  OsiNetwork(const EnvSpec& spec, const std::vector<int>& hidden,
             double dropout);
  // Wraps an existing network; throws DimensionError when its shape does not
  // fit the environment.
  OsiNetwork(const EnvSpec& spec, DenseNetwork net);

  Vector Estimate(const HistorySegment& history,
                  GroundTruth& truth) const override;
  // Midpoint of the bounds.
  Vector Prior(GroundTruth& truth) const override;

  Vector PredictNormalized(const HistorySegment& history) const;
  const DenseNetwork& net() const { return net_; }
  DenseNetwork& net() { return net_; }
  int obs_dim() const { return obs_dim_; }
  int act_dim() const { return act_dim_; }
  int mu_dim() const { return net_.output_dim(); }

 private:
  int obs_dim_ = 0;
  int act_dim_ = 0;
  DenseNetwork net_;
};

// Returns the ground truth, for reduction tests and the UP-true bound.
class OracleEstimator : public MuEstimator {
 public:
  Vector Estimate(const HistorySegment& history,
                  GroundTruth& truth) const override;
  Vector Prior(GroundTruth& truth) const override;
};

// Simulates `steps` control steps under dynamics mu, restarting the episode
// on termination or at the environment horizon. The policy is fed the
// estimator's output (prior during the first h steps of every episode) and
// acts with its mean, clamped to [-1, 1]. Each step after the warmup stores
// (history, normalized policy-side mu at the new state).
OsiTrainingBuffer GenerateSegments(const GaussianPolicy& policy,
                                   const Environment& env,
                                   const MuEstimator& estimator,
                                   const ModelParams& mu, int steps,
                                   RandomSource& rng);

// Matched data: the policy sees the true parameters.
OsiTrainingBuffer GenerateMatchedData(const GaussianPolicy& policy,
                                      const Environment& env,
                                      const OsiConfig& config,
                                      int mu_samples, RandomSource& rng);

// Mismatched data: the policy sees the estimator's prediction while the
// dynamics use the sampled parameters. Labels stay the true parameters.
OsiTrainingBuffer GenerateMismatchedData(const GaussianPolicy& policy,
                                         const MuEstimator& estimator,
                                         const Environment& env,
                                         const OsiConfig& config,
                                         int mu_samples, RandomSource& rng);

struct OsiFitResult {
  std::vector<double> epoch_losses;
  double final_loss() const {
    return epoch_losses.empty() ? std::numeric_limits<double>::quiet_NaN()
                                : epoch_losses.back();
  }
};

// Minibatch Adam on the mean squared error, dropout active. Continues from
// the network's current weights. Throws Error on an empty buffer.
OsiFitResult FitOsi(const OsiTrainingBuffer& buffer, DenseNetwork& net,
                    const OsiConfig& config, RandomSource& rng);

// Eval-mode mean squared error over every entry and component.
double OsiLoss(const DenseNetwork& net, const OsiTrainingBuffer& buffer);

// Per-component mean squared error in normalized units.
Vector OsiComponentLoss(const DenseNetwork& net,
                        const OsiTrainingBuffer& buffer);

struct OsiIterationLog {
  int iteration = 0;
  int buffer_size = 0;
  double train_mse = 0.0;
  double heldout_mse = 0.0;
  double up_osi_reward = std::numeric_limits<double>::quiet_NaN();
};

struct TrainOsiOptions {
  std::ostream* log = nullptr;
  // Optional evaluation of the current UP-OSI pair after each round.
  std::function<double(int iteration, const OsiNetwork& osi)> evaluate;
  std::function<void(const OsiIterationLog&)> on_iteration;
  // When set, the network after each round is saved as osi_round_NN.bin.
  std::filesystem::path checkpoint_dir;
};

OsiNetwork TrainOsi(const GaussianPolicy& policy, const Environment& env,
                    const OsiConfig& config, RandomSource& rng,
                    const TrainOsiOptions& options = {});

struct OsiPrediction {
  ModelParams mu;     // denormalized over the policy-side bounds
  Vector normalized;  // raw network output
};

OsiPrediction OsiPredict(const OsiNetwork& osi, const HistorySegment& history,
                         const EnvSpec& spec);

}  // namespace uposi

#endif  // UPOSI_OSI_H_
