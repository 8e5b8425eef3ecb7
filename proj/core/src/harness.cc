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

#include "uposi/harness.h"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "parallel.h"
#include "uposi/error.h"
#include "uposi/history.h"

namespace uposi {

std::string ControllerName(ControllerKind kind) {
  switch (kind) {
    case ControllerKind::kUpTrue:
      return "up_true";
    case ControllerKind::kUpOsi:
      return "up_osi";
    case ControllerKind::kRegular:
      return "regular";
    case ControllerKind::kUpFixed:
      return "up_fixed";
  }
  return "unknown";
}

Controller Controller::UpTrue(const GaussianPolicy& policy) {
  Controller c;
  c.kind = ControllerKind::kUpTrue;
  c.policy = &policy;
  return c;
}

Controller Controller::UpOsi(const GaussianPolicy& policy,
                             const MuEstimator& estimator) {
  Controller c;
  c.kind = ControllerKind::kUpOsi;
  c.policy = &policy;
  c.estimator = &estimator;
  return c;
}

Controller Controller::Regular(const GaussianPolicy& policy) {
  Controller c;
  c.kind = ControllerKind::kRegular;
  c.policy = &policy;
  return c;
}

Controller Controller::UpFixed(const GaussianPolicy& policy,
                               const ModelParams& fixed_mu) {
  Controller c;
  c.kind = ControllerKind::kUpFixed;
  c.policy = &policy;
  c.fixed_mu_normed = NormalizeMu(fixed_mu);
  return c;
}

void Controller::Validate(const EnvSpec& spec) const {
  const std::string who = name();
  if (policy == nullptr) throw ConfigError(who + ": no policy");
  if (policy->obs_dim() != spec.obs_dim || policy->act_dim() != spec.act_dim) {
    throw ConfigError(fmt::format(
        "{}: policy maps obs {} -> act {}, task '{}' has obs {} and act {}",
        who, policy->obs_dim(), policy->act_dim(), spec.name, spec.obs_dim,
        spec.act_dim));
  }
  if (kind == ControllerKind::kRegular) {
    if (policy->conditions_on_mu()) {
      throw ConfigError(who + ": policy must not take a mu input");
    }
  } else if (policy->mu_dim() != spec.mu_dim) {
    throw ConfigError(fmt::format("{}: policy mu input has size {}, task '{}' "
                                  "needs {}",
                                  who, policy->mu_dim(), spec.name,
                                  spec.mu_dim));
  }
  if (kind == ControllerKind::kUpOsi && estimator == nullptr) {
    throw ConfigError(who + ": requires an OSI estimator");
  }
  if (kind == ControllerKind::kUpFixed &&
      fixed_mu_normed.size() != spec.mu_dim) {
    throw ConfigError(who + ": fixed mu has the wrong size");
  }
}

RunResult RunController(const Controller& controller, const Environment& env,
                        const ModelParams& mu_true, RandomSource& rng,
                        const RunOptions& options) {
  const EnvSpec& spec = env.spec();
  controller.Validate(spec);
  const int max_steps =
      options.max_steps > 0 ? options.max_steps : spec.max_steps;
  const GaussianPolicy& policy = *controller.policy;

  RunResult result;
  EnvState state = env.Reset(mu_true, rng);
  Vector obs = env.Observe(state);
  HistorySegment history(spec.obs_dim, spec.act_dim);
  history.Clear(obs);
  GroundTruth truth(env);
  const double initial_metric = env.TaskMetric(state);
  result.max_metric = initial_metric;
  if (options.record_trajectory) result.trajectory.states.push_back(state);

  Vector mu_sum = Vector::Zero(spec.mu_dim);
  int mu_count = 0;
  for (int t = 0; t < max_steps; ++t) {
    const ModelParams mu = options.schedule ? options.schedule(state) : mu_true;
    truth.Update(state, mu);
    Vector mu_in;
    switch (controller.kind) {
      case ControllerKind::kUpTrue:
        mu_in = truth.Read();
        break;
      case ControllerKind::kUpOsi:
        mu_in = t < history.length()
                    ? controller.estimator->Prior(truth)
                    : controller.estimator->Estimate(history, truth);
        break;
      case ControllerKind::kRegular:
        break;
      case ControllerKind::kUpFixed:
        mu_in = controller.fixed_mu_normed;
        break;
    }
    const Vector action = spec.ClampNormalized(policy.Mean(obs, mu_in));
    StepResult step = env.Step(state, spec.ToPhysical(action), mu);
    state = std::move(step.next_state);
    const Vector next_obs = env.Observe(state);
    history.Push(obs, action, next_obs);
    obs = next_obs;

    if (mu_in.size() > 0 && t >= history.length()) {
      mu_sum += mu_in;
      ++mu_count;
    }
    result.total_reward += step.reward;
    result.steps = t + 1;
    result.max_metric = std::max(result.max_metric, env.TaskMetric(state));
    if (options.record_trajectory) {
      result.trajectory.states.push_back(state);
      result.trajectory.actions.push_back(action);
      result.trajectory.policy_mu.push_back(mu_in);
      result.trajectory.true_mu.push_back(mu);
      result.trajectory.rewards.push_back(step.reward);
    }
    if (step.terminated) {
      result.terminated = true;
      break;
    }
  }
  result.truth_reads = truth.reads();
  result.distance = result.max_metric - initial_metric;
  switch (spec.performance) {
    case PerformanceKind::kNormalizedReturn:
      result.performance = result.total_reward / spec.performance_scale;
      break;
    case PerformanceKind::kMaxHeight:
      result.performance = result.max_metric;
      break;
    case PerformanceKind::kDistance:
      result.performance = result.distance;
      break;
  }
  if (mu_count > 0) {
    result.mean_mu_hat =
        DenormalizeMu(mu_sum / mu_count, spec.mu_bounds).values();
  }
  return result;
}

// ---------------------------------------------------------------------------

namespace {

void MeanStd(const std::vector<double>& xs, double& mean, double& sd) {
  mean = 0.0;
  for (double x : xs) mean += x;
  mean /= static_cast<double>(xs.size());
  double ss = 0.0;
  for (double x : xs) ss += (x - mean) * (x - mean);
  sd = xs.size() > 1 ? std::sqrt(ss / static_cast<double>(xs.size() - 1))
                     : 0.0;
}

void Summarize(SweepPoint& p) {
  p.n_eval = static_cast<int>(p.performance.size());
  MeanStd(p.performance, p.mean_perf, p.std_perf);
  if (p.mu_hat.empty() || p.mu_hat[0].size() == 0) return;
  const Eigen::Index d = p.mu_hat[0].size();
  p.mean_mu_hat = Vector::Zero(d);
  p.std_mu_hat = Vector::Zero(d);
  for (Eigen::Index k = 0; k < d; ++k) {
    std::vector<double> xs;
    for (const auto& v : p.mu_hat) xs.push_back(v[k]);
    MeanStd(xs, p.mean_mu_hat[k], p.std_mu_hat[k]);
  }
}

}  // namespace

double SweepResult::GridMean() const {
  if (points.empty()) return std::nan("");
  double s = 0.0;
  for (const auto& p : points) s += p.mean_perf;
  return s / static_cast<double>(points.size());
}

double SweepResult::FractionAtLeast(double threshold) const {
  if (points.empty()) return 0.0;
  int n = 0;
  for (const auto& p : points) n += p.mean_perf >= threshold ? 1 : 0;
  return static_cast<double>(n) / static_cast<double>(points.size());
}

SweepResult SweepMu(const Controller& controller, const Environment& env,
                    const std::vector<ModelParams>& grid, int n_eval,
                    RandomSource& rng, int num_workers) {
  if (grid.empty()) throw ConfigError("sweep over an empty grid");
  if (n_eval < 1) throw ConfigError("n_eval must be at least 1");
  controller.Validate(env.spec());
  SweepResult result;
  result.controller = controller.name();
  result.points.resize(grid.size());
  internal::ParallelFor(
      static_cast<int>(grid.size()), num_workers, [&](int i) {
        SweepPoint& p = result.points[i];
        p.mu = grid[i];
        const RandomSource point_rng = rng.Fork(static_cast<std::uint64_t>(i));
        for (int j = 0; j < n_eval; ++j) {
          RandomSource r = point_rng.Fork(static_cast<std::uint64_t>(j));
          const RunResult run = RunController(controller, env, grid[i], r);
          p.performance.push_back(run.performance);
          p.mu_hat.push_back(run.mean_mu_hat);
        }
        Summarize(p);
      });
  return result;
}

std::vector<ModelParams> UniformGrid(const Environment& env, int points) {
  if (points < 1) throw ConfigError("grid needs at least one point");
  const auto bounds = env.spec().sampled_bounds();
  const int dims = static_cast<int>(bounds.size());
  auto value = [&](int d, int k) {
    if (points == 1) return 0.5 * (bounds[d].low + bounds[d].high);
    return bounds[d].low +
           (bounds[d].high - bounds[d].low) * k / (points - 1.0);
  };
  int total = 1;
  for (int d = 0; d < dims; ++d) total *= points;
  std::vector<ModelParams> grid;
  grid.reserve(total);
  for (int flat = 0; flat < total; ++flat) {
    Vector v(dims);
    int rest = flat;
    for (int d = dims - 1; d >= 0; --d) {
      v[d] = value(d, rest % points);
      rest /= points;
    }
    grid.push_back(env.MakeMu(v));
  }
  return grid;
}

// ---------------------------------------------------------------------------

double FrictionTrack::At(const HopperEnv& env, const EnvState& state) const {
  const double x = env.FootX(state);
  return x >= region_start && x <= region_end ? varied : base;
}

FrictionResult VaryingFrictionExperiment(
    const std::vector<Controller>& controllers, const HopperEnv& env,
    const FrictionOptions& options, RandomSource& rng) {
  if (options.varied.empty()) throw ConfigError("empty friction grid");
  if (options.n_eval < 1) throw ConfigError("n_eval must be at least 1");
  auto schedule_for = [&](double varied) {
    FrictionTrack track = options.track;
    track.varied = varied;
    return [track, &env](const EnvState& s) {
      return env.MakeMu(Vector::Constant(1, track.At(env, s)));
    };
  };
  RunOptions run;
  run.max_steps = options.steps;

  FrictionResult result;
  result.trace_varied = options.trace_varied;
  for (const Controller& c : controllers) {
    FrictionCurve curve;
    curve.controller = c.name();
    curve.varied = options.varied;
    for (size_t k = 0; k < options.varied.size(); ++k) {
      run.schedule = schedule_for(options.varied[k]);
      const RandomSource point_rng = rng.Fork(k);
      std::vector<double> d;
      for (int j = 0; j < options.n_eval; ++j) {
        RandomSource r = point_rng.Fork(static_cast<std::uint64_t>(j));
        const ModelParams start = env.MakeMu(Vector::Constant(1, options.track.base));
        d.push_back(RunController(c, env, start, r, run).distance);
      }
      double mean = 0.0, sd = 0.0;
      MeanStd(d, mean, sd);
      curve.mean_distance.push_back(mean);
      curve.std_distance.push_back(sd);
      curve.distances.push_back(std::move(d));
    }
    result.curves.push_back(std::move(curve));
  }

  const auto osi = std::find_if(
      controllers.begin(), controllers.end(),
      [](const Controller& c) { return c.kind == ControllerKind::kUpOsi; });
  if (osi != controllers.end()) {
    run.schedule = schedule_for(options.trace_varied);
    run.record_trajectory = true;
    RandomSource r = rng.Fork(0x7ace).Fork(0);
    const RunResult out = RunController(
        *osi, env, env.MakeMu(Vector::Constant(1, options.track.base)), r, run);
    const auto& tr = out.trajectory;
    const auto& bounds = env.spec().mu_bounds;
    for (size_t t = 0; t < tr.actions.size(); ++t) {
      FrictionTracePoint p;
      p.time = static_cast<double>(t) * env.spec().dt;
      p.foot_x = env.FootX(tr.states[t]);
      p.actual = tr.true_mu[t][0];
      p.predicted = DenormalizeMu(tr.policy_mu[t], bounds)[0];
      result.trace.push_back(p);
    }
  }
  return result;
}

std::vector<ModelParams> ExtrapolationGrid(const Environment& env,
                                           int points) {
  if (env.spec().sampled_mu_dim != 2) {
    throw ConfigError("extrapolation needs a (tip mass, length) task");
  }
  if (points < 1) throw ConfigError("grid needs at least one point");
  std::vector<ModelParams> grid;
  for (int k = 1; k <= points; ++k) {
    const double length = 0.8 + 0.6 * k / points;
    Vector v(2);
    v << 1.0 + 1.5 * (length - 0.8), length;
    grid.push_back(env.MakeMu(v));
  }
  return grid;
}

ExtrapolationResult ExtrapolationExperiment(
    const std::vector<Controller>& controllers, const Environment& env,
    int points, int n_eval, RandomSource& rng, int num_workers) {
  const std::vector<ModelParams> grid = ExtrapolationGrid(env, points);
  ExtrapolationResult result;
  for (const Controller& c : controllers) {
    result.sweeps.push_back(SweepMu(c, env, grid, n_eval, rng, num_workers));
  }
  return result;
}

// ---------------------------------------------------------------------------

EvalConfig EvalConfig::FromJson(const nlohmann::json& j) {
  EvalConfig c;
  c.n_eval = j.value("n_eval", c.n_eval);
  c.grid_points = j.value("grid_points", c.grid_points);
  c.num_workers = j.value("num_workers", c.num_workers);
  c.extrapolation_points =
      j.value("extrapolation_points", c.extrapolation_points);
  if (j.contains("friction")) {
    const auto& f = j.at("friction");
    FrictionOptions& o = c.friction;
    o.track.base = f.value("base", o.track.base);
    o.track.region_start = f.value("region_start", o.track.region_start);
    o.track.region_end = f.value("region_end", o.track.region_end);
    o.varied = f.value("varied", o.varied);
    o.trace_varied = f.value("trace_varied", o.trace_varied);
    o.steps = f.value("steps", o.steps);
    o.n_eval = f.value("n_eval", o.n_eval);
  }
  if (c.n_eval < 1 || c.grid_points < 1 || c.num_workers < 1 ||
      c.extrapolation_points < 1 || c.friction.steps < 1 ||
      c.friction.n_eval < 1) {
    throw ConfigError("eval: counts must be positive");
  }
  if (!(c.friction.track.region_start < c.friction.track.region_end)) {
    throw ConfigError("eval: friction region must have start < end");
  }
  return c;
}

nlohmann::json EvalConfig::ToJson() const {
  return {
      {"n_eval", n_eval},
      {"grid_points", grid_points},
      {"num_workers", num_workers},
      {"extrapolation_points", extrapolation_points},
      {"friction",
       {
           {"base", friction.track.base},
           {"region_start", friction.track.region_start},
           {"region_end", friction.track.region_end},
           {"varied", friction.varied},
           {"trace_varied", friction.trace_varied},
           {"steps", friction.steps},
           {"n_eval", friction.n_eval},
       }},
  };
}

}  // namespace uposi
