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

#ifndef UPOSI_TRPO_H_
#define UPOSI_TRPO_H_

#include <filesystem>
#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "uposi/dense_network.h"
#include "uposi/envs/environment.h"
#include "uposi/gaussian_policy.h"
#include "uposi/random.h"
#include "uposi/types.h"

namespace uposi {

struct TrpoConfig {
  int iterations = 200;
  // Minimum number of transitions per batch; episodes are always completed.
  int samples_per_iteration = 30000;
  double kl_step = 0.01;
  double gamma = 0.995;
  double gae_lambda = 0.97;
  int cg_iterations = 10;
  double cg_damping = 0.1;
  double cg_tolerance = 1e-10;
  double backtrack_coeff = 0.5;
  int backtrack_steps = 10;
  // Fraction of the batch used for Fisher-vector products.
  double fvp_subsample = 1.0;
  std::vector<int> policy_hidden = {64, 64};
  std::vector<int> baseline_hidden = {64, 64};
  int baseline_epochs = 5;
  int baseline_minibatch = 128;
  double baseline_learning_rate = 1e-3;
  // false trains the unconditioned baseline policy (no mu input).
  bool condition_on_mu = true;
  int num_workers = 1;
  // Save a checkpoint every N iterations (0 disables).
  int checkpoint_interval = 0;

  // Throws ConfigError when a field is out of range.
  void Validate() const;
  static TrpoConfig FromJson(const nlohmann::json& j);
  nlohmann::json ToJson() const;
};

// Value function V(obs, mu) used by GAE. A dense tanh network regressing
// discounted returns; targets are standardized internally and the output
// layer is rescaled whenever the standardization changes, so predictions
// are continuous across fits.
class ValueBaseline {
 public:
  ValueBaseline() = default;
  ValueBaseline(int input_dim, const std::vector<int>& hidden,
                RandomSource& rng);

  // One value per input column (eval mode).
  Vector Predict(const Matrix& inputs) const;
  // Minibatch least squares with Adam; returns the final-epoch mean loss in
  // standardized units.
  double Fit(const Matrix& inputs, const Vector& targets, int epochs,
             int minibatch, double learning_rate, RandomSource& rng);

 private:
  DenseNetwork net_;
  double target_mean_ = 0.0;
  double target_scale_ = 1.0;
};

using ValueFunction = std::function<Vector(const Matrix& inputs)>;

// Runs one episode: samples mu ~ rho_mu and x ~ rho_0, then acts with the
// stochastic policy until termination or the step limit.
Rollout RunEpisode(const GaussianPolicy& policy, const Environment& env,
                   RandomSource& rng);

// Collects complete episodes until at least samples_per_iteration
// transitions are stored. Workers get independent forked streams and their
// episodes are concatenated in worker order.
std::vector<Rollout> CollectBatch(const GaussianPolicy& policy,
                                  const Environment& env,
                                  const TrpoConfig& config, RandomSource& rng);

// Column-stacked [observation; mu_normed] for every transition.
Matrix BaselineInputs(const std::vector<Rollout>& rollouts);

struct GaeResult {
  Vector raw_advantages;
  // Zero-mean, unit-variance copy of raw_advantages.
  Vector advantages;
  // Discounted returns-to-go, bootstrapped with V at truncation.
  Vector returns;
};

// delta_t = r_t + gamma V(s_{t+1}) - V(s_t) with V(s_T) = 0 after
// termination; A_t = sum_k (gamma lambda)^k delta_{t+k}. Throws Error on an
// empty batch.
GaeResult ComputeGae(const std::vector<Rollout>& rollouts,
                     const ValueFunction& value, double gamma, double lambda);

// Flattened batch with the behaviour policy's statistics frozen in.
struct PolicyBatch {
  Matrix policy_inputs;
  Matrix actions;
  Vector advantages;
  Matrix old_means;
  Vector old_log_std;
  Vector old_log_probs;

  int size() const { return static_cast<int>(actions.cols()); }
};

PolicyBatch MakePolicyBatch(const GaussianPolicy& policy,
                            const std::vector<Rollout>& rollouts,
                            const Vector& advantages);

struct SurrogateKl {
  double surrogate = 0.0;
  double mean_kl = 0.0;
};

// surrogate = mean(exp(log pi_new - log pi_old) A);
// mean_kl = mean KL(pi_old || pi_new).
SurrogateKl SurrogateAndKl(const GaussianPolicy& policy_new,
                           const PolicyBatch& batch);

// Gradient of the surrogate w.r.t. the flat policy parameters.
Vector SurrogateGradient(const GaussianPolicy& policy,
                         const PolicyBatch& batch);

// (H + damping I) v, H the Hessian of the mean KL at the current policy,
// evaluated exactly through its Gauss-Newton form (forward-mode Jacobian
// product, metric diag(1/sigma^2) on the mean and 2 on log_std). `stride`
// uses every stride-th sample.
Vector FisherVectorProduct(const GaussianPolicy& policy,
                           const PolicyBatch& batch, const Vector& v,
                           double damping, int stride = 1);

// Solves A x = b for symmetric positive (semi)definite A given as a
// matrix-vector product. Stops when ||r|| / ||b|| <= tol.
Vector ConjugateGradient(const std::function<Vector(const Vector&)>& matvec,
                         const Vector& b, int iterations, double tol = 1e-10);

struct UpdateDiagnostics {
  bool accepted = false;
  double mean_kl = 0.0;
  double surrogate_before = 0.0;
  double surrogate_after = 0.0;
  double step_fraction = 0.0;
  double gradient_norm = 0.0;
  int backtracks = 0;
  std::string message;
};

// Natural-gradient step with backtracking line search. Accepts the first
// candidate that improves the surrogate with mean KL <= kl_step; otherwise
// leaves the policy unchanged.
UpdateDiagnostics TrpoUpdate(GaussianPolicy& policy, const PolicyBatch& batch,
                             const TrpoConfig& config);

struct IterationLog {
  int iteration = 0;
  long samples = 0;
  double mean_return = 0.0;
  double mean_kl = 0.0;
  double surrogate = 0.0;
  double entropy = 0.0;
};

struct TrainUpOptions {
  // Receives the CSV header and one row per iteration when set.
  std::ostream* log = nullptr;
  std::filesystem::path checkpoint_dir;
  std::function<void(const IterationLog&)> on_iteration;
};

// Full training loop: per iteration CollectBatch -> baseline fit -> GAE ->
// TrpoUpdate. Bit-reproducible for a fixed seed with one worker.
GaussianPolicy TrainUp(const Environment& env, const TrpoConfig& config,
                       RandomSource& rng, const TrainUpOptions& options = {});

// Policy with the task's dimensions and the configured architecture,
// randomly initialized.
GaussianPolicy MakePolicy(const Environment& env, const TrpoConfig& config,
                          RandomSource& rng);

}  // namespace uposi

#endif  // UPOSI_TRPO_H_
