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

#include "uposi/osi.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <ostream>

#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "parallel.h"
#include "uposi/error.h"
#include "uposi/network_io.h"

namespace uposi {

void OsiConfig::Validate() const {
  auto require = [](bool ok, const char* what) {
    if (!ok) throw ConfigError(std::string("osi: ") + what);
  };
  require(iterations > 0, "iterations must be positive");
  require(mu_samples > 0, "mu_samples must be positive");
  require(rollout_seconds > 0.0, "rollout_seconds must be positive");
  require(epochs > 0, "epochs must be positive");
  require(minibatch > 0, "minibatch must be positive");
  require(learning_rate > 0.0, "learning_rate must be positive");
  require(!hidden.empty(), "hidden must list at least one layer");
  for (int h : hidden) require(h > 0, "hidden layer sizes must be positive");
  require(dropout >= 0.0 && dropout < 1.0, "dropout must lie in [0, 1)");
  require(holdout_mu_samples >= 0, "holdout_mu_samples must be >= 0");
  require(early_stop_tolerance >= 0.0, "early_stop_tolerance must be >= 0");
  require(num_workers > 0, "num_workers must be positive");
}

OsiConfig OsiConfig::FromJson(const nlohmann::json& j) {
  OsiConfig c;
  c.iterations = j.value("iterations", c.iterations);
  c.mu_samples = j.value("mu_samples", c.mu_samples);
  c.rollout_seconds = j.value("rollout_seconds", c.rollout_seconds);
  c.epochs = j.value("epochs", c.epochs);
  c.minibatch = j.value("minibatch", c.minibatch);
  c.learning_rate = j.value("learning_rate", c.learning_rate);
  c.hidden = j.value("hidden", c.hidden);
  c.dropout = j.value("dropout", c.dropout);
  c.holdout_mu_samples = j.value("holdout_mu_samples", c.holdout_mu_samples);
  c.early_stop_tolerance =
      j.value("early_stop_tolerance", c.early_stop_tolerance);
  c.num_workers = j.value("num_workers", c.num_workers);
  c.Validate();
  return c;
}

nlohmann::json OsiConfig::ToJson() const {
  return {
      {"iterations", iterations},
      {"mu_samples", mu_samples},
      {"rollout_seconds", rollout_seconds},
      {"epochs", epochs},
      {"minibatch", minibatch},
      {"learning_rate", learning_rate},
      {"hidden", hidden},
      {"dropout", dropout},
      {"holdout_mu_samples", holdout_mu_samples},
      {"early_stop_tolerance", early_stop_tolerance},
      {"num_workers", num_workers},
  };
}

// ---------------------------------------------------------------------------

void OsiTrainingBuffer::Add(Vector history, Vector label) {
  if (!histories_.empty() && (history.size() != histories_[0].size() ||
                              label.size() != labels_[0].size())) {
    throw DimensionError("OSI buffer entry shape differs from earlier entries");
  }
  histories_.push_back(std::move(history));
  labels_.push_back(std::move(label));
}

void OsiTrainingBuffer::Append(const OsiTrainingBuffer& other) {
  for (int i = 0; i < other.size(); ++i) Add(other.history(i), other.label(i));
}

Matrix OsiTrainingBuffer::HistoryMatrix(const std::vector<int>& indices) const {
  Matrix out(histories_.empty() ? 0 : histories_[0].size(),
             static_cast<Eigen::Index>(indices.size()));
  for (size_t k = 0; k < indices.size(); ++k) {
    out.col(static_cast<Eigen::Index>(k)) = histories_[indices[k]];
  }
  return out;
}

Matrix OsiTrainingBuffer::LabelMatrix(const std::vector<int>& indices) const {
  Matrix out(labels_.empty() ? 0 : labels_[0].size(),
             static_cast<Eigen::Index>(indices.size()));
  for (size_t k = 0; k < indices.size(); ++k) {
    out.col(static_cast<Eigen::Index>(k)) = labels_[indices[k]];
  }
  return out;
}

void GroundTruth::Update(const EnvState& state, const ModelParams& mu) {
  state_ = state;
  mu_ = mu;
}

Vector GroundTruth::Read() {
  ++reads_;
  return NormalizeMu(env_->PolicyMu(state_, mu_));
}

// ---------------------------------------------------------------------------

OsiNetwork::OsiNetwork(const EnvSpec& spec, const std::vector<int>& hidden,
                       double dropout)
    : obs_dim_(spec.obs_dim), act_dim_(spec.act_dim) {
  std::vector<int> dims{HistorySegment::FlatDim(obs_dim_, act_dim_)};
  dims.insert(dims.end(), hidden.begin(), hidden.end());
  dims.push_back(spec.mu_dim);
  net_ = DenseNetwork(dims, dropout);
}

OsiNetwork::OsiNetwork(const EnvSpec& spec, DenseNetwork net)
    : obs_dim_(spec.obs_dim), act_dim_(spec.act_dim), net_(std::move(net)) {
  const int expected_in = HistorySegment::FlatDim(obs_dim_, act_dim_);
  if (net_.input_dim() != expected_in || net_.output_dim() != spec.mu_dim) {
    throw DimensionError(fmt::format(
        "OSI network maps {} -> {}, but task '{}' needs {} -> {}",
        net_.input_dim(), net_.output_dim(), spec.name, expected_in,
        spec.mu_dim));
  }
}

Vector OsiNetwork::PredictNormalized(const HistorySegment& history) const {
  if (history.obs_dim() != obs_dim_ || history.act_dim() != act_dim_) {
    throw DimensionError("history shape does not match the OSI network");
  }
  return net_.Forward(history.Flatten(), Mode::kEval);
}

Vector OsiNetwork::Estimate(const HistorySegment& history,
                            GroundTruth& /*truth*/) const {
  return PredictNormalized(history);
}

Vector OsiNetwork::Prior(GroundTruth& /*truth*/) const {
  return Vector::Zero(mu_dim());
}

Vector OracleEstimator::Estimate(const HistorySegment& /*history*/,
                                 GroundTruth& truth) const {
  return truth.Read();
}

Vector OracleEstimator::Prior(GroundTruth& truth) const { return truth.Read(); }

// ---------------------------------------------------------------------------

OsiTrainingBuffer GenerateSegments(const GaussianPolicy& policy,
                                   const Environment& env,
                                   const MuEstimator& estimator,
                                   const ModelParams& mu, int steps,
                                   RandomSource& rng) {
  const EnvSpec& spec = env.spec();
  OsiTrainingBuffer out;
  HistorySegment history(spec.obs_dim, spec.act_dim);
  GroundTruth truth(env);
  int done = 0;
  while (done < steps) {
    EnvState state = env.Reset(mu, rng);
    Vector obs = env.Observe(state);
    history.Clear(obs);
    truth.Update(state, mu);
    for (int t = 0; t < spec.max_steps && done < steps; ++t, ++done) {
      const Vector mu_in = t < history.length()
                               ? estimator.Prior(truth)
                               : estimator.Estimate(history, truth);
      const Vector action =
          spec.ClampNormalized(policy.Mean(obs, mu_in));
      StepResult res = env.Step(state, spec.ToPhysical(action), mu);
      state = std::move(res.next_state);
      const Vector next_obs = env.Observe(state);
      history.Push(obs, action, next_obs);
      obs = next_obs;
      truth.Update(state, mu);
      if (t + 1 >= history.length()) {
        out.Add(history.Flatten(), NormalizeMu(env.PolicyMu(state, mu)));
      }
      if (res.terminated) {
        ++done;
        break;
      }
    }
  }
  return out;
}

namespace {

int StepBudget(const Environment& env, const OsiConfig& config) {
  return std::max(
      1, static_cast<int>(std::lround(config.rollout_seconds / env.spec().dt)));
}

OsiTrainingBuffer GenerateData(const GaussianPolicy& policy,
                               const MuEstimator& estimator,
                               const Environment& env, const OsiConfig& config,
                               int mu_samples, RandomSource& rng) {
  const int steps = StepBudget(env, config);
  std::vector<OsiTrainingBuffer> parts(mu_samples);
  internal::ParallelFor(mu_samples, config.num_workers, [&](int i) {
    RandomSource stream = rng.Fork(static_cast<std::uint64_t>(i));
    const ModelParams mu = env.SampleMu(stream);
    parts[i] = GenerateSegments(policy, env, estimator, mu, steps, stream);
  });
  OsiTrainingBuffer out;
  for (const auto& p : parts) out.Append(p);
  return out;
}

}  // namespace

OsiTrainingBuffer GenerateMatchedData(const GaussianPolicy& policy,
                                      const Environment& env,
                                      const OsiConfig& config, int mu_samples,
                                      RandomSource& rng) {
  const OracleEstimator oracle;
  return GenerateData(policy, oracle, env, config, mu_samples, rng);
}

OsiTrainingBuffer GenerateMismatchedData(const GaussianPolicy& policy,
                                         const MuEstimator& estimator,
                                         const Environment& env,
                                         const OsiConfig& config,
                                         int mu_samples, RandomSource& rng) {
  return GenerateData(policy, estimator, env, config, mu_samples, rng);
}

// ---------------------------------------------------------------------------

OsiFitResult FitOsi(const OsiTrainingBuffer& buffer, DenseNetwork& net,
                    const OsiConfig& config, RandomSource& rng) {
  if (buffer.empty()) throw Error("cannot fit OSI on an empty buffer");
  if (buffer.history(0).size() != net.input_dim() ||
      buffer.label(0).size() != net.output_dim()) {
    throw DimensionError("OSI buffer shape does not match the network");
  }
  const int n = buffer.size();
  const double out_dim = static_cast<double>(net.output_dim());
  Adam adam(net.num_params(), config.learning_rate);
  Vector params = net.GetParams();
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  OsiFitResult result;
  for (int e = 0; e < config.epochs; ++e) {
    std::shuffle(order.begin(), order.end(), rng.engine());
    double total = 0.0;
    for (int start = 0; start < n; start += config.minibatch) {
      const int m = std::min(config.minibatch, n - start);
      const std::vector<int> idx(order.begin() + start,
                                 order.begin() + start + m);
      ForwardTape tape;
      const Matrix pred = net.ForwardBatch(buffer.HistoryMatrix(idx),
                                           Mode::kTrain, &rng, &tape);
      const Matrix err = pred - buffer.LabelMatrix(idx);
      total += err.squaredNorm();
      const Matrix grad = (2.0 / (m * out_dim)) * err;
      adam.Step(params, net.Backward(tape, grad).params);
      net.SetParams(params);
    }
    result.epoch_losses.push_back(total / (n * out_dim));
  }
  return result;
}

Vector OsiComponentLoss(const DenseNetwork& net,
                        const OsiTrainingBuffer& buffer) {
  if (buffer.empty()) throw Error("OSI loss on an empty buffer");
  constexpr int kChunk = 4096;
  Vector sum = Vector::Zero(net.output_dim());
  for (int start = 0; start < buffer.size(); start += kChunk) {
    std::vector<int> idx(std::min(kChunk, buffer.size() - start));
    std::iota(idx.begin(), idx.end(), start);
    const Matrix err =
        net.ForwardBatch(buffer.HistoryMatrix(idx)) - buffer.LabelMatrix(idx);
    sum += err.array().square().rowwise().sum().matrix();
  }
  return sum / static_cast<double>(buffer.size());
}

double OsiLoss(const DenseNetwork& net, const OsiTrainingBuffer& buffer) {
  return OsiComponentLoss(net, buffer).mean();
}

OsiNetwork TrainOsi(const GaussianPolicy& policy, const Environment& env,
                    const OsiConfig& config, RandomSource& rng,
                    const TrainOsiOptions& options) {
  config.Validate();
  const EnvSpec& spec = env.spec();
  if (policy.conditions_on_mu() && policy.mu_dim() != spec.mu_dim) {
    throw DimensionError("policy mu input does not match the environment");
  }
  OsiNetwork osi(spec, config.hidden, config.dropout);
  RandomSource init = rng.Fork(0);
  osi.net().Initialize(init);

  OsiTrainingBuffer heldout;
  if (config.holdout_mu_samples > 0) {
    RandomSource holdout_rng = rng.Fork(1);
    heldout = GenerateMatchedData(policy, env, config,
                                  config.holdout_mu_samples, holdout_rng);
  }
  if (options.log != nullptr) {
    *options.log
        << "iteration,buffer_size,train_mse,heldout_mse,up_osi_reward\n";
  }
  OsiTrainingBuffer buffer;
  double previous_heldout = std::numeric_limits<double>::infinity();
  for (int it = 0; it < config.iterations; ++it) {
    RandomSource round = rng.Fork(100 + static_cast<std::uint64_t>(it));
    RandomSource data_rng = round.Fork(0);
    RandomSource fit_rng = round.Fork(1);
    buffer.Append(it == 0 ? GenerateMatchedData(policy, env, config,
                                                config.mu_samples, data_rng)
                          : GenerateMismatchedData(policy, osi, env, config,
                                                   config.mu_samples,
                                                   data_rng));
    FitOsi(buffer, osi.net(), config, fit_rng);
    if (!options.checkpoint_dir.empty()) {
      SaveNetwork(osi.net(), options.checkpoint_dir /
                                 fmt::format("osi_round_{:02d}.bin", it));
    }

    OsiIterationLog row;
    row.iteration = it;
    row.buffer_size = buffer.size();
    row.train_mse = OsiLoss(osi.net(), buffer);
    row.heldout_mse = heldout.empty()
                          ? std::numeric_limits<double>::quiet_NaN()
                          : OsiLoss(osi.net(), heldout);
    if (options.evaluate) row.up_osi_reward = options.evaluate(it, osi);
    if (options.log != nullptr) {
      *options.log << fmt::format("{},{},{:.17g},{:.17g},{:.17g}\n",
                                  row.iteration, row.buffer_size,
                                  row.train_mse, row.heldout_mse,
                                  row.up_osi_reward);
      options.log->flush();
    }
    if (options.on_iteration) options.on_iteration(row);
    if (config.early_stop_tolerance > 0.0 && !heldout.empty()) {
      if (row.heldout_mse >
          previous_heldout * (1.0 - config.early_stop_tolerance)) {
        break;
      }
      previous_heldout = row.heldout_mse;
    }
  }
  return osi;
}

OsiPrediction OsiPredict(const OsiNetwork& osi, const HistorySegment& history,
                         const EnvSpec& spec) {
  OsiPrediction p;
  p.normalized = osi.PredictNormalized(history);
  p.mu = DenormalizeMu(p.normalized, spec.mu_bounds);
  return p;
}

}  // namespace uposi
