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

#ifndef UPOSI_HARNESS_H_
#define UPOSI_HARNESS_H_

#include <functional>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "uposi/envs/environment.h"
#include "uposi/envs/hopper.h"
#include "uposi/gaussian_policy.h"
#include "uposi/osi.h"
#include "uposi/random.h"
#include "uposi/types.h"

namespace uposi {

enum class ControllerKind { kUpTrue, kUpOsi, kRegular, kUpFixed };

std::string ControllerName(ControllerKind kind);

// A policy together with the source of its mu input. Pointers are
// non-owning and must outlive the controller.
struct Controller {
  ControllerKind kind = ControllerKind::kUpTrue;
  const GaussianPolicy* policy = nullptr;
  const MuEstimator* estimator = nullptr;  // UP_OSI only
  Vector fixed_mu_normed;                  // UP_FIXED only

  static Controller UpTrue(const GaussianPolicy& policy);
  static Controller UpOsi(const GaussianPolicy& policy,
                          const MuEstimator& estimator);
  static Controller Regular(const GaussianPolicy& policy);
  // `fixed_mu` holds policy-side parameters in physical units.
  static Controller UpFixed(const GaussianPolicy& policy,
                            const ModelParams& fixed_mu);

  std::string name() const { return ControllerName(kind); }
  // Throws ConfigError when the controller is inconsistent with itself or
  // with the environment.
  void Validate(const EnvSpec& spec) const;
};

// Ground-truth parameters as a function of the state (position-dependent
// friction, for instance). Receives the state the next step starts from.
using MuSchedule = std::function<ModelParams(const EnvState& state)>;

struct RunOptions {
  int max_steps = 0;  // 0: the environment horizon
  MuSchedule schedule;
  bool record_trajectory = false;
};

struct TrajectoryRecord {
  std::vector<EnvState> states;     // states[0] is the reset state
  std::vector<Vector> actions;      // clamped normalized actions
  std::vector<Vector> policy_mu;    // normalized mu fed to the policy
  std::vector<ModelParams> true_mu; // ground truth used for each step
  std::vector<double> rewards;
};

struct RunResult {
  double total_reward = 0.0;
  int steps = 0;
  bool terminated = false;
  double max_metric = 0.0;
  double distance = 0.0;
  // Score according to the environment's PerformanceKind.
  double performance = 0.0;
  // Mean of the mu fed to the policy after the warmup, denormalized over the
  // policy-side bounds. Empty for REGULAR.
  Vector mean_mu_hat;
  int truth_reads = 0;
  TrajectoryRecord trajectory;
};

// The runtime loop: observe, pick mu for the policy, act with the policy
// mean, step the dynamics under the true parameters, push into the history.
RunResult RunController(const Controller& controller, const Environment& env,
                        const ModelParams& mu_true, RandomSource& rng,
                        const RunOptions& options = {});

struct SweepPoint {
  ModelParams mu;
  std::vector<double> performance;
  std::vector<Vector> mu_hat;  // per-rollout mean prediction
  double mean_perf = 0.0;
  double std_perf = 0.0;
  Vector mean_mu_hat;
  Vector std_mu_hat;
  int n_eval = 0;
};

struct SweepResult {
  std::string controller;
  std::vector<SweepPoint> points;
  double GridMean() const;
  // Fraction of grid points whose mean performance is at least `threshold`.
  double FractionAtLeast(double threshold) const;
};

// n_eval rollouts per grid point. Rollout j at point i uses rng.Fork(i).Fork(j)
// so different controllers evaluated with the same rng are paired.
SweepResult SweepMu(const Controller& controller, const Environment& env,
                     const std::vector<ModelParams>& grid, int n_eval,
                     RandomSource& rng, int num_workers = 1);

// Evenly spaced grid over the sampled bounds; multi-dimensional bounds get a
// tensor grid with `points` values per dimension.
std::vector<ModelParams> UniformGrid(const Environment& env, int points);

struct FrictionTrack {
  double base = 0.9;
  double region_start = 20.0;
  double region_end = 30.0;
  double varied = 0.9;
  // Friction under the foot at this state.
  double At(const HopperEnv& env, const EnvState& state) const;
};

struct FrictionTracePoint {
  double time = 0.0;
  double foot_x = 0.0;
  double actual = 0.0;
  double predicted = 0.0;
};

struct FrictionCurve {
  std::string controller;
  std::vector<double> varied;           // mu_vary grid
  std::vector<double> mean_distance;
  std::vector<double> std_distance;
  std::vector<std::vector<double>> distances;  // [grid][rollout]
};

struct FrictionResult {
  std::vector<FrictionCurve> curves;
  double trace_varied = 0.55;
  std::vector<FrictionTracePoint> trace;  // first UP_OSI controller
};

struct FrictionOptions {
  FrictionTrack track;
  std::vector<double> varied = {0.4, 0.5, 0.6};
  double trace_varied = 0.55;
  int steps = 2000;
  int n_eval = 5;
};

FrictionResult VaryingFrictionExperiment(
    const std::vector<Controller>& controllers, const HopperEnv& env,
    const FrictionOptions& options, RandomSource& rng);

// Cart-pole parameters along the coupled line beyond the training range:
// length in (0.8, 1.4] m with tip mass 1.0 + 1.5 (length - 0.8) kg.
std::vector<ModelParams> ExtrapolationGrid(const Environment& env, int points);

struct ExtrapolationResult {
  std::vector<SweepResult> sweeps;  // one per controller, paired seeds
};

ExtrapolationResult ExtrapolationExperiment(
    const std::vector<Controller>& controllers, const Environment& env,
    int points, int n_eval, RandomSource& rng, int num_workers = 1);

struct EvalConfig {
  int n_eval = 20;
  int grid_points = 25;
  int num_workers = 1;
  FrictionOptions friction;
  int extrapolation_points = 12;

  static EvalConfig FromJson(const nlohmann::json& j);
  nlohmann::json ToJson() const;
};

}  // namespace uposi

#endif  // UPOSI_HARNESS_H_
