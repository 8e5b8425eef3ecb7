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

#include "uposi/trpo.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <ostream>
#include <stdexcept>
#include <thread>

#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "uposi/error.h"
#include "uposi/network_io.h"

namespace uposi {

void TrpoConfig::Validate() const {
  auto require = [](bool ok, const char* what) {
    if (!ok) throw ConfigError(std::string("trpo: ") + what);
  };
  require(iterations > 0, "iterations must be positive");
  require(samples_per_iteration > 0, "samples_per_iteration must be positive");
  require(kl_step > 0.0, "kl_step must be positive");
  require(gamma > 0.0 && gamma <= 1.0, "gamma must lie in (0, 1]");
  require(gae_lambda >= 0.0 && gae_lambda <= 1.0,
          "gae_lambda must lie in [0, 1]");
  require(cg_iterations > 0, "cg_iterations must be positive");
  require(cg_damping >= 0.0, "cg_damping must be non-negative");
  require(backtrack_coeff > 0.0 && backtrack_coeff < 1.0,
          "backtrack_coeff must lie in (0, 1)");
  require(backtrack_steps > 0, "backtrack_steps must be positive");
  require(fvp_subsample > 0.0 && fvp_subsample <= 1.0,
          "fvp_subsample must lie in (0, 1]");
  require(baseline_epochs >= 0, "baseline_epochs must be non-negative");
  require(baseline_minibatch > 0, "baseline_minibatch must be positive");
  require(num_workers > 0, "num_workers must be positive");
  require(checkpoint_interval >= 0, "checkpoint_interval must be >= 0");
}

TrpoConfig TrpoConfig::FromJson(const nlohmann::json& j) {
  TrpoConfig c;
  c.iterations = j.value("iterations", c.iterations);
  c.samples_per_iteration =
      j.value("samples_per_iteration", c.samples_per_iteration);
  c.kl_step = j.value("kl_step", c.kl_step);
  c.gamma = j.value("gamma", c.gamma);
  c.gae_lambda = j.value("gae_lambda", c.gae_lambda);
  c.cg_iterations = j.value("cg_iterations", c.cg_iterations);
  c.cg_damping = j.value("cg_damping", c.cg_damping);
  c.cg_tolerance = j.value("cg_tolerance", c.cg_tolerance);
  c.backtrack_coeff = j.value("backtrack_coeff", c.backtrack_coeff);
  c.backtrack_steps = j.value("backtrack_steps", c.backtrack_steps);
  c.fvp_subsample = j.value("fvp_subsample", c.fvp_subsample);
  c.policy_hidden = j.value("policy_hidden", c.policy_hidden);
  c.baseline_hidden = j.value("baseline_hidden", c.baseline_hidden);
  c.baseline_epochs = j.value("baseline_epochs", c.baseline_epochs);
  c.baseline_minibatch = j.value("baseline_minibatch", c.baseline_minibatch);
  c.baseline_learning_rate =
      j.value("baseline_learning_rate", c.baseline_learning_rate);
  c.condition_on_mu = j.value("condition_on_mu", c.condition_on_mu);
  c.num_workers = j.value("num_workers", c.num_workers);
  c.checkpoint_interval = j.value("checkpoint_interval", c.checkpoint_interval);
  c.Validate();
  return c;
}

nlohmann::json TrpoConfig::ToJson() const {
  return {
      {"iterations", iterations},
      {"samples_per_iteration", samples_per_iteration},
      {"kl_step", kl_step},
      {"gamma", gamma},
      {"gae_lambda", gae_lambda},
      {"cg_iterations", cg_iterations},
      {"cg_damping", cg_damping},
      {"cg_tolerance", cg_tolerance},
      {"backtrack_coeff", backtrack_coeff},
      {"backtrack_steps", backtrack_steps},
      {"fvp_subsample", fvp_subsample},
      {"policy_hidden", policy_hidden},
      {"baseline_hidden", baseline_hidden},
      {"baseline_epochs", baseline_epochs},
      {"baseline_minibatch", baseline_minibatch},
      {"baseline_learning_rate", baseline_learning_rate},
      {"condition_on_mu", condition_on_mu},
      {"num_workers", num_workers},
      {"checkpoint_interval", checkpoint_interval},
  };
}

// ---------------------------------------------------------------------------
// Value baseline

ValueBaseline::ValueBaseline(int input_dim, const std::vector<int>& hidden,
                             RandomSource& rng) {
  std::vector<int> dims{input_dim};
  dims.insert(dims.end(), hidden.begin(), hidden.end());
  dims.push_back(1);
  net_ = DenseNetwork(dims);
  net_.Initialize(rng, 0.01);
}

Vector ValueBaseline::Predict(const Matrix& inputs) const {
  const Matrix out = net_.ForwardBatch(inputs);
  return (target_mean_ + target_scale_ * out.row(0).array()).matrix()
      .transpose();
}

double ValueBaseline::Fit(const Matrix& inputs, const Vector& targets,
                          int epochs, int minibatch, double learning_rate,
                          RandomSource& rng) {
  const Eigen::Index n = inputs.cols();
  if (n == 0) throw Error("baseline fit on an empty batch");

  // Re-standardize and rescale the output layer so predictions are
  // unchanged by the new normalization.
  const double mean = targets.mean();
  const double var = (targets.array() - mean).square().mean();
  const double scale = std::max(std::sqrt(var), 1e-6);
  const int last = net_.num_layers() - 1;
  net_.weights(last) *= target_scale_ / scale;
  net_.biases(last) =
      ((target_scale_ * net_.biases(last).array() + target_mean_ - mean) /
       scale)
          .matrix();
  target_mean_ = mean;
  target_scale_ = scale;
  const Vector z = ((targets.array() - mean) / scale).matrix();

  Adam adam(net_.num_params(), learning_rate);
  Vector params = net_.GetParams();
  std::vector<Eigen::Index> order(n);
  std::iota(order.begin(), order.end(), 0);
  double epoch_loss = 0.0;
  for (int e = 0; e < epochs; ++e) {
    std::shuffle(order.begin(), order.end(), rng.engine());
    epoch_loss = 0.0;
    for (Eigen::Index start = 0; start < n; start += minibatch) {
      const Eigen::Index m = std::min<Eigen::Index>(minibatch, n - start);
      Matrix x(inputs.rows(), m);
      Vector y(m);
      for (Eigen::Index i = 0; i < m; ++i) {
        x.col(i) = inputs.col(order[start + i]);
        y[i] = z[order[start + i]];
      }
      ForwardTape tape;
      const Matrix pred = net_.ForwardBatch(x, Mode::kTrain, nullptr, &tape);
      const Vector err = pred.row(0).transpose() - y;
      epoch_loss += err.squaredNorm();
      const Matrix grad_out = (2.0 / static_cast<double>(m)) * err.transpose();
      adam.Step(params, net_.Backward(tape, grad_out).params);
      net_.SetParams(params);
    }
    epoch_loss /= static_cast<double>(n);
  }
  return epoch_loss;
}

// ---------------------------------------------------------------------------
// Rollouts

GaussianPolicy MakePolicy(const Environment& env, const TrpoConfig& config,
                          RandomSource& rng) {
  const EnvSpec& spec = env.spec();
  GaussianPolicy policy(spec.obs_dim, config.condition_on_mu ? spec.mu_dim : 0,
                        spec.act_dim, config.policy_hidden);
  policy.Initialize(rng);
  return policy;
}

Rollout RunEpisode(const GaussianPolicy& policy, const Environment& env,
                   RandomSource& rng) {
  const EnvSpec& spec = env.spec();
  Rollout rollout;
  rollout.mu = env.SampleMu(rng);
  EnvState state = env.Reset(rollout.mu, rng);
  Vector obs = env.Observe(state);
  Vector mu_normed = NormalizeMu(env.PolicyMu(state, rollout.mu));
  rollout.transitions.reserve(spec.max_steps);
  for (int t = 0; t < spec.max_steps; ++t) {
    Transition tr;
    tr.observation = obs;
    tr.mu_normed = mu_normed;
    tr.action = policy.Sample(obs, mu_normed, rng);
    StepResult res = env.Step(state, spec.ToPhysical(tr.action), rollout.mu);
    state = std::move(res.next_state);
    obs = env.Observe(state);
    mu_normed = NormalizeMu(env.PolicyMu(state, rollout.mu));
    tr.reward = res.reward;
    tr.next_observation = obs;
    tr.next_mu_normed = mu_normed;
    tr.terminated = res.terminated;
    rollout.transitions.push_back(std::move(tr));
    if (res.terminated) break;
  }
  return rollout;
}

std::vector<Rollout> CollectBatch(const GaussianPolicy& policy,
                                  const Environment& env,
                                  const TrpoConfig& config, RandomSource& rng) {
  const int workers = config.num_workers;
  std::vector<std::vector<Rollout>> parts(workers);
  auto work = [&](int w) {
    RandomSource stream = rng.Fork(static_cast<std::uint64_t>(w));
    const int quota = config.samples_per_iteration / workers +
                      (w < config.samples_per_iteration % workers ? 1 : 0);
    int count = 0;
    while (count < quota) {
      parts[w].push_back(RunEpisode(policy, env, stream));
      count += parts[w].back().size();
    }
  };
  if (workers == 1) {
    work(0);
  } else {
    std::vector<std::thread> threads;
    for (int w = 0; w < workers; ++w) threads.emplace_back(work, w);
    for (auto& t : threads) t.join();
  }
  std::vector<Rollout> out;
  for (auto& p : parts) {
    for (auto& r : p) out.push_back(std::move(r));
  }
  return out;
}

namespace {

int TotalSteps(const std::vector<Rollout>& rollouts) {
  int n = 0;
  for (const auto& r : rollouts) n += r.size();
  return n;
}

Vector Concat(const Vector& a, const Vector& b) {
  Vector out(a.size() + b.size());
  out << a, b;
  return out;
}

}  // namespace

Matrix BaselineInputs(const std::vector<Rollout>& rollouts) {
  const int n = TotalSteps(rollouts);
  if (n == 0) return Matrix();
  const auto& first = rollouts.front().transitions.front();
  Matrix x(first.observation.size() + first.mu_normed.size(), n);
  int k = 0;
  for (const auto& r : rollouts) {
    for (const auto& t : r.transitions) {
      x.col(k++) = Concat(t.observation, t.mu_normed);
    }
  }
  return x;
}

GaeResult ComputeGae(const std::vector<Rollout>& rollouts,
                     const ValueFunction& value, double gamma, double lambda) {
  const int n = TotalSteps(rollouts);
  if (n == 0) throw Error("GAE on an empty batch");
  const Vector v = value(BaselineInputs(rollouts));
  // Bootstrap values for truncated episodes.
  std::vector<int> truncated;
  for (int i = 0; i < static_cast<int>(rollouts.size()); ++i) {
    if (rollouts[i].size() > 0 && !rollouts[i].terminated()) {
      truncated.push_back(i);
    }
  }
  Vector bootstrap = Vector::Zero(static_cast<Eigen::Index>(rollouts.size()));
  if (!truncated.empty()) {
    const auto& t0 = rollouts[truncated[0]].transitions.back();
    Matrix x(t0.next_observation.size() + t0.next_mu_normed.size(),
             static_cast<Eigen::Index>(truncated.size()));
    for (size_t i = 0; i < truncated.size(); ++i) {
      const auto& t = rollouts[truncated[i]].transitions.back();
      x.col(static_cast<Eigen::Index>(i)) =
          Concat(t.next_observation, t.next_mu_normed);
    }
    const Vector vb = value(x);
    for (size_t i = 0; i < truncated.size(); ++i) {
      bootstrap[truncated[i]] = vb[static_cast<Eigen::Index>(i)];
    }
  }

  GaeResult out;
  out.raw_advantages.resize(n);
  out.returns.resize(n);
  int offset = 0;
  for (size_t e = 0; e < rollouts.size(); ++e) {
    const auto& tr = rollouts[e].transitions;
    const int len = static_cast<int>(tr.size());
    double next_value = bootstrap[static_cast<Eigen::Index>(e)];
    double adv = 0.0;
    double ret = next_value;
    for (int t = len - 1; t >= 0; --t) {
      const double delta = tr[t].reward + gamma * next_value - v[offset + t];
      adv = delta + gamma * lambda * adv;
      ret = tr[t].reward + gamma * ret;
      out.raw_advantages[offset + t] = adv;
      out.returns[offset + t] = ret;
      next_value = v[offset + t];
    }
    offset += len;
  }
  const double mean = out.raw_advantages.mean();
  const double var = (out.raw_advantages.array() - mean).square().mean();
  out.advantages =
      ((out.raw_advantages.array() - mean) / (std::sqrt(var) + 1e-8)).matrix();
  return out;
}

// ---------------------------------------------------------------------------
// Surrogate, KL, Fisher

PolicyBatch MakePolicyBatch(const GaussianPolicy& policy,
                            const std::vector<Rollout>& rollouts,
                            const Vector& advantages) {
  const int n = TotalSteps(rollouts);
  if (advantages.size() != n) {
    throw DimensionError("advantage count does not match the batch");
  }
  PolicyBatch batch;
  batch.policy_inputs.resize(policy.mean_net().input_dim(), n);
  batch.actions.resize(policy.act_dim(), n);
  int k = 0;
  for (const auto& r : rollouts) {
    for (const auto& t : r.transitions) {
      batch.policy_inputs.col(k) = policy.Input(t.observation, t.mu_normed);
      batch.actions.col(k) = t.action;
      ++k;
    }
  }
  batch.advantages = advantages;
  batch.old_means = policy.mean_net().ForwardBatch(batch.policy_inputs);
  batch.old_log_std = policy.log_std();
  batch.old_log_probs.resize(n);
  for (int i = 0; i < n; ++i) {
    batch.old_log_probs[i] = LogProbDiagGaussian(
        batch.actions.col(i), batch.old_means.col(i), batch.old_log_std);
  }
  return batch;
}

namespace {

Vector LogProbs(const Matrix& actions, const Matrix& means,
                const Vector& log_std) {
  const Vector inv_std = (-log_std.array()).exp();
  const Matrix z = (actions - means).array().colwise() * inv_std.array();
  constexpr double kHalfLog2Pi = 0.91893853320467274178;
  const double norm =
      log_std.sum() + kHalfLog2Pi * static_cast<double>(log_std.size());
  return (-0.5 * z.colwise().squaredNorm().array() - norm).matrix().transpose();
}

}  // namespace

SurrogateKl SurrogateAndKl(const GaussianPolicy& policy_new,
                           const PolicyBatch& batch) {
  const Matrix means = policy_new.mean_net().ForwardBatch(batch.policy_inputs);
  const Vector& ls_new = policy_new.log_std();
  const Vector logp = LogProbs(batch.actions, means, ls_new);
  const Vector ratio = (logp - batch.old_log_probs).array().exp().matrix();
  SurrogateKl out;
  const double n = static_cast<double>(batch.size());
  out.surrogate = ratio.dot(batch.advantages) / n;
  // KL(old || new), summed over action dims, averaged over samples.
  const Vector var_old = (2.0 * batch.old_log_std.array()).exp();
  const Vector inv_var_new = (-2.0 * ls_new.array()).exp();
  const double const_part =
      (ls_new - batch.old_log_std).sum() + 0.5 * var_old.dot(inv_var_new) -
      0.5 * static_cast<double>(ls_new.size());
  const Matrix diff = batch.old_means - means;
  const double quad =
      (diff.array().square().colwise() * inv_var_new.array()).sum();
  out.mean_kl = const_part + 0.5 * quad / n;
  return out;
}

Vector SurrogateGradient(const GaussianPolicy& policy,
                         const PolicyBatch& batch) {
  ForwardTape tape;
  const Matrix means = policy.mean_net().ForwardBatch(
      batch.policy_inputs, Mode::kEval, nullptr, &tape);
  const Vector& log_std = policy.log_std();
  const Vector logp = LogProbs(batch.actions, means, log_std);
  const Vector weight =
      ((logp - batch.old_log_probs).array().exp() * batch.advantages.array() /
       static_cast<double>(batch.size()))
          .matrix();
  const Vector inv_var = (-2.0 * log_std.array()).exp();
  const Matrix diff = batch.actions - means;
  // d log p / d mean = (a - m) / s^2;  d log p / d log s = (a - m)^2/s^2 - 1.
  const Matrix grad_mean =
      (diff.array().colwise() * inv_var.array()).rowwise() *
      weight.transpose().array();
  const Vector grad_log_std =
      ((diff.array().square().colwise() * inv_var.array()) - 1.0).matrix() *
      weight;
  Vector g(policy.num_params());
  g << policy.mean_net().Backward(tape, grad_mean).params, grad_log_std;
  return g;
}

Vector FisherVectorProduct(const GaussianPolicy& policy,
                           const PolicyBatch& batch, const Vector& v,
                           double damping, int stride) {
  if (v.size() != policy.num_params()) {
    throw DimensionError("Fisher-vector product with a vector of size " +
                         std::to_string(v.size()) + ", expected " +
                         std::to_string(policy.num_params()));
  }
  const DenseNetwork& net = policy.mean_net();
  const int n_net = net.num_params();
  Matrix inputs;
  if (stride <= 1) {
    inputs = batch.policy_inputs;
  } else {
    const Eigen::Index m = (batch.size() + stride - 1) / stride;
    inputs.resize(batch.policy_inputs.rows(), m);
    for (Eigen::Index i = 0; i < m; ++i) {
      inputs.col(i) = batch.policy_inputs.col(i * stride);
    }
  }
  ForwardTape tape;
  net.ForwardBatch(inputs, Mode::kEval, nullptr, &tape);
  const Matrix jv = net.Jvp(tape, v.head(n_net));
  const Vector inv_var = (-2.0 * policy.log_std().array()).exp();
  const Matrix weighted = (jv.array().colwise() * inv_var.array()) /
                          static_cast<double>(inputs.cols());
  Vector out(v.size());
  out << net.Backward(tape, weighted).params, 2.0 * v.tail(v.size() - n_net);
  return out + damping * v;
}

Vector ConjugateGradient(const std::function<Vector(const Vector&)>& matvec,
                         const Vector& b, int iterations, double tol) {
  Vector x = Vector::Zero(b.size());
  Vector r = b;
  Vector p = r;
  double rr = r.squaredNorm();
  const double b_norm = b.norm();
  if (b_norm == 0.0) return x;
  for (int i = 0; i < iterations; ++i) {
    const Vector ap = matvec(p);
    const double pap = p.dot(ap);
    if (pap <= 0.0) break;
    const double alpha = rr / pap;
    x += alpha * p;
    r -= alpha * ap;
    const double rr_new = r.squaredNorm();
    if (std::sqrt(rr_new) <= tol * b_norm) break;
    p = r + (rr_new / rr) * p;
    rr = rr_new;
  }
  return x;
}

UpdateDiagnostics TrpoUpdate(GaussianPolicy& policy, const PolicyBatch& batch,
                             const TrpoConfig& config) {
  UpdateDiagnostics diag;
  const Vector theta0 = policy.GetParams();
  const Vector g = SurrogateGradient(policy, batch);
  diag.gradient_norm = g.norm();
  diag.surrogate_before = SurrogateAndKl(policy, batch).surrogate;
  diag.surrogate_after = diag.surrogate_before;
  if (!g.allFinite()) {
    diag.message = "non-finite policy gradient; iteration skipped";
    return diag;
  }
  if (diag.gradient_norm == 0.0) {
    diag.message = "zero policy gradient";
    return diag;
  }
  const int stride = std::max(
      1, static_cast<int>(std::lround(1.0 / config.fvp_subsample)));
  auto fvp = [&](const Vector& v) {
    return FisherVectorProduct(policy, batch, v, config.cg_damping, stride);
  };
  const Vector step = ConjugateGradient(fvp, g, config.cg_iterations,
                                        config.cg_tolerance);
  const double shs = step.dot(fvp(step));
  if (!(shs > 0.0) || !std::isfinite(shs)) {
    diag.message = "degenerate natural-gradient step";
    return diag;
  }
  const Vector full = std::sqrt(2.0 * config.kl_step / shs) * step;
  double fraction = 1.0;
  for (int k = 0; k < config.backtrack_steps; ++k, fraction *= config.backtrack_coeff) {
    policy.SetParams(theta0 + fraction * full);
    const SurrogateKl trial = SurrogateAndKl(policy, batch);
    if (std::isfinite(trial.surrogate) && std::isfinite(trial.mean_kl) &&
        trial.surrogate > diag.surrogate_before &&
        trial.mean_kl <= config.kl_step) {
      diag.accepted = true;
      diag.mean_kl = trial.mean_kl;
      diag.surrogate_after = trial.surrogate;
      diag.step_fraction = fraction;
      diag.backtracks = k;
      break;
    }
  }
  if (!diag.accepted) {
    policy.SetParams(theta0);
    diag.message = "line search found no acceptable step";
    return diag;
  }
  if (diag.mean_kl > config.kl_step) {
    throw std::logic_error("accepted TRPO step violates the KL bound");
  }
  return diag;
}

// ---------------------------------------------------------------------------
// Training loop

GaussianPolicy TrainUp(const Environment& env, const TrpoConfig& config,
                       RandomSource& rng, const TrainUpOptions& options) {
  config.Validate();
  RandomSource init = rng.Fork(0x1417);
  GaussianPolicy policy = MakePolicy(env, config, init);
  const EnvSpec& spec = env.spec();
  ValueBaseline baseline(spec.obs_dim + spec.mu_dim, config.baseline_hidden,
                         init);
  if (options.log != nullptr) {
    *options.log << "iteration,samples,mean_return,mean_kl,surrogate,entropy\n";
  }
  long samples = 0;
  for (int it = 1; it <= config.iterations; ++it) {
    RandomSource it_rng = rng.Fork(static_cast<std::uint64_t>(it));
    RandomSource collect_rng = it_rng.Fork(1);
    RandomSource fit_rng = it_rng.Fork(2);
    const std::vector<Rollout> rollouts =
        CollectBatch(policy, env, config, collect_rng);
    const GaeResult gae = ComputeGae(
        rollouts, [&](const Matrix& x) { return baseline.Predict(x); },
        config.gamma, config.gae_lambda);
    baseline.Fit(BaselineInputs(rollouts), gae.returns, config.baseline_epochs,
                 config.baseline_minibatch, config.baseline_learning_rate,
                 fit_rng);
    const PolicyBatch batch = MakePolicyBatch(policy, rollouts, gae.advantages);
    const UpdateDiagnostics diag = TrpoUpdate(policy, batch, config);

    IterationLog row;
    row.iteration = it;
    samples += batch.size();
    row.samples = samples;
    double total = 0.0;
    for (const auto& r : rollouts) {
      for (const auto& t : r.transitions) total += t.reward;
    }
    row.mean_return = total / static_cast<double>(rollouts.size());
    row.mean_kl = diag.mean_kl;
    row.surrogate = diag.surrogate_after;
    row.entropy = policy.Entropy();
    if (options.log != nullptr) {
      *options.log << fmt::format("{},{},{:.17g},{:.17g},{:.17g},{:.17g}\n",
                                  row.iteration, row.samples, row.mean_return,
                                  row.mean_kl, row.surrogate, row.entropy);
      options.log->flush();
    }
    if (options.on_iteration) options.on_iteration(row);
    if (config.checkpoint_interval > 0 && !options.checkpoint_dir.empty() &&
        it % config.checkpoint_interval == 0) {
      SavePolicy(policy, options.checkpoint_dir /
                             fmt::format("policy_{:04d}.bin", it));
    }
  }
  return policy;
}

}  // namespace uposi
