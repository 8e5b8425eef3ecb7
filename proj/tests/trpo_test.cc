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

#include <cmath>
#include <sstream>

#include <Eigen/Cholesky>
#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

#include "test_support.h"
#include "uposi/error.h"
#include "uposi/network_io.h"

namespace uposi {
namespace {

using testing::ConstantRewardEnv;
using testing::LqrEnv;
using testing::TempDir;

TrpoConfig SmallConfig() {
  TrpoConfig c;
  c.iterations = 3;
  c.samples_per_iteration = 500;
  c.policy_hidden = {8};
  c.baseline_hidden = {8};
  return c;
}

Transition MakeTransition(double reward, bool terminated = false) {
  Transition t;
  t.observation = Vector::Constant(1, reward);
  t.mu_normed = Vector::Zero(1);
  t.action = Vector::Zero(1);
  t.reward = reward;
  t.next_observation = Vector::Constant(1, reward + 100.0);
  t.next_mu_normed = Vector::Zero(1);
  t.terminated = terminated;
  return t;
}

Rollout MakeRollout(const std::vector<double>& rewards, bool terminated) {
  Rollout r;
  for (size_t i = 0; i < rewards.size(); ++i) {
    r.transitions.push_back(
        MakeTransition(rewards[i], terminated && i + 1 == rewards.size()));
  }
  return r;
}

// Value = first observation component, so bootstraps are distinguishable.
Vector ObsValue(const Matrix& x) { return x.row(0).transpose(); }

// ------------------------------------------------------------------ config

TEST(TrpoConfigTest, DefaultsAreValid) {
  TrpoConfig c;
  EXPECT_NO_THROW(c.Validate());
  EXPECT_EQ(c.kl_step, 0.01);
  EXPECT_EQ(c.gamma, 0.995);
  EXPECT_EQ(c.gae_lambda, 0.97);
  EXPECT_EQ(c.cg_iterations, 10);
  EXPECT_EQ(c.cg_damping, 0.1);
  EXPECT_EQ(c.backtrack_steps, 10);
  EXPECT_EQ(c.iterations, 200);
  EXPECT_EQ(c.samples_per_iteration, 30000);
}

TEST(TrpoConfigTest, RejectsOutOfRangeFields) {
  auto bad = [](auto mutate) {
    TrpoConfig c;
    mutate(c);
    return c;
  };
  EXPECT_THROW(bad([](TrpoConfig& c) { c.gamma = 0.0; }).Validate(),
               ConfigError);
  EXPECT_THROW(bad([](TrpoConfig& c) { c.gamma = 1.01; }).Validate(),
               ConfigError);
  EXPECT_THROW(bad([](TrpoConfig& c) { c.gae_lambda = -0.1; }).Validate(),
               ConfigError);
  EXPECT_THROW(bad([](TrpoConfig& c) { c.gae_lambda = 1.1; }).Validate(),
               ConfigError);
  EXPECT_THROW(bad([](TrpoConfig& c) { c.kl_step = 0.0; }).Validate(),
               ConfigError);
  EXPECT_THROW(
      bad([](TrpoConfig& c) { c.samples_per_iteration = 0; }).Validate(),
      ConfigError);
  EXPECT_NO_THROW(bad([](TrpoConfig& c) {
                    c.gamma = 1.0;
                    c.gae_lambda = 0.0;
                  }).Validate());
}

TEST(TrpoConfigTest, JsonRoundTrip) {
  TrpoConfig c;
  c.kl_step = 0.02;
  c.policy_hidden = {32, 16};
  c.condition_on_mu = false;
  const TrpoConfig back = TrpoConfig::FromJson(c.ToJson());
  EXPECT_EQ(back.ToJson(), c.ToJson());
  EXPECT_EQ(back.policy_hidden, (std::vector<int>{32, 16}));
  EXPECT_FALSE(back.condition_on_mu);
}

// ------------------------------------------------------------ collection

TEST(CollectBatchTest, SizeWithinLoopBound) {
  const LqrEnv env(40);
  TrpoConfig c = SmallConfig();
  c.samples_per_iteration = 1000;
  RandomSource init(1);
  const GaussianPolicy policy = MakePolicy(env, c, init);
  for (int seed = 0; seed < 5; ++seed) {
    RandomSource rng(seed);
    int n = 0;
    for (const auto& r : CollectBatch(policy, env, c, rng)) n += r.size();
    EXPECT_GE(n, c.samples_per_iteration);
    EXPECT_LT(n, c.samples_per_iteration + env.spec().max_steps);
  }
}

TEST(CollectBatchTest, MuConstantWithinEpisodes) {
  const LqrEnv env(40);
  const TrpoConfig c = SmallConfig();
  RandomSource init(1), rng(2);
  const GaussianPolicy policy = MakePolicy(env, c, init);
  const auto rollouts = CollectBatch(policy, env, c, rng);
  ASSERT_GT(rollouts.size(), 2u);
  for (const auto& r : rollouts) {
    const Vector expected = NormalizeMu(r.mu);
    for (const auto& t : r.transitions) {
      ASSERT_EQ(t.mu_normed, expected);
      ASSERT_EQ(t.next_mu_normed, expected);
    }
    for (int i = 0; i + 1 < r.size(); ++i) {
      ASSERT_FALSE(r.transitions[i].terminated);
    }
  }
  EXPECT_NE(rollouts[0].mu[0], rollouts[1].mu[0]);
}

TEST(CollectBatchTest, MuMarginalIsUniform) {
  const ConstantRewardEnv env;  // fixed 20-step episodes
  TrpoConfig c = SmallConfig();
  c.policy_hidden = {2};
  c.samples_per_iteration = 200000;
  RandomSource init(1), rng(3);
  const GaussianPolicy policy = MakePolicy(env, c, init);
  const auto rollouts = CollectBatch(policy, env, c, rng);
  ASSERT_EQ(rollouts.size(), 10000u);
  constexpr int kBins = 20;
  std::vector<int> counts(kBins, 0);
  for (const auto& r : rollouts) {
    counts[std::min(kBins - 1, static_cast<int>(r.mu[0] * kBins))]++;
  }
  const double expected = 10000.0 / kBins;
  double chi2 = 0.0;
  for (int c_i : counts) chi2 += (c_i - expected) * (c_i - expected) / expected;
  // Upper 1% point of the chi-squared distribution with 19 degrees of freedom.
  EXPECT_LT(chi2, 36.191);
}

TEST(CollectBatchTest, WorkersChangeStreamsButStayReproducible) {
  const LqrEnv env(40);
  TrpoConfig c = SmallConfig();
  c.num_workers = 3;
  RandomSource init(1);
  const GaussianPolicy policy = MakePolicy(env, c, init);
  RandomSource a(9), b(9);
  const auto ra = CollectBatch(policy, env, c, a);
  const auto rb = CollectBatch(policy, env, c, b);
  ASSERT_EQ(ra.size(), rb.size());
  for (size_t i = 0; i < ra.size(); ++i) {
    ASSERT_EQ(ra[i].size(), rb[i].size());
    ASSERT_EQ(ra[i].transitions.back().action, rb[i].transitions.back().action);
  }
}

// -------------------------------------------------------------------- GAE

TEST(GaeTest, LambdaZeroGivesTdResiduals) {
  const std::vector<Rollout> rollouts = {MakeRollout({1, 2, 3}, false)};
  const double gamma = 0.9;
  const GaeResult g = ComputeGae(rollouts, ObsValue, gamma, 0.0);
  // V(s_t) = r_t here; the truncated tail bootstraps with V = 3 + 100.
  EXPECT_NEAR(g.raw_advantages[0], 1 + gamma * 2 - 1, 1e-12);
  EXPECT_NEAR(g.raw_advantages[1], 2 + gamma * 3 - 2, 1e-12);
  EXPECT_NEAR(g.raw_advantages[2], 3 + gamma * 103 - 3, 1e-12);
}

TEST(GaeTest, UndiscountedZeroValueGivesRewardToGo) {
  const std::vector<Rollout> rollouts = {MakeRollout({1, -2, 4, 0.5}, true)};
  const GaeResult g = ComputeGae(
      rollouts, [](const Matrix& x) { return Vector::Zero(x.cols()); }, 1.0,
      1.0);
  const double expected[] = {3.5, 2.5, 4.5, 0.5};
  for (int t = 0; t < 4; ++t) {
    EXPECT_NEAR(g.raw_advantages[t], expected[t], 1e-12);
    EXPECT_NEAR(g.returns[t], expected[t], 1e-12);
  }
}

TEST(GaeTest, TerminationZeroesBootstrap) {
  const std::vector<Rollout> rollouts = {MakeRollout({1, 2}, true)};
  const GaeResult g = ComputeGae(rollouts, ObsValue, 0.9, 0.0);
  EXPECT_NEAR(g.raw_advantages[1], 2 - 2, 1e-12);
}

// Brute-force nested sum over a mixed batch.
TEST(GaeTest, MatchesNestedSumOracle) {
  RandomSource rng(17);
  std::vector<Rollout> rollouts;
  for (int e = 0; e < 3; ++e) {
    std::vector<double> rewards(5);
    for (double& r : rewards) r = rng.Normal();
    rollouts.push_back(MakeRollout(rewards, e != 1));
  }
  const double gamma = 0.97, lambda = 0.8;
  auto value = [](const Matrix& x) {
    return Vector((0.3 * x.row(0).array() + 0.1).matrix().transpose());
  };
  const GaeResult g = ComputeGae(rollouts, value, gamma, lambda);
  int k = 0;
  for (const auto& r : rollouts) {
    const int len = r.size();
    std::vector<double> v(len + 1);
    for (int t = 0; t < len; ++t) v[t] = 0.3 * r.transitions[t].reward + 0.1;
    v[len] = r.terminated()
                 ? 0.0
                 : 0.3 * r.transitions.back().next_observation[0] + 0.1;
    for (int t = 0; t < len; ++t) {
      double a = 0.0;
      for (int l = 0; t + l < len; ++l) {
        const double delta =
            r.transitions[t + l].reward + gamma * v[t + l + 1] - v[t + l];
        a += std::pow(gamma * lambda, l) * delta;
      }
      EXPECT_NEAR(g.raw_advantages[k + t], a, 1e-10);
    }
    k += len;
  }
}

TEST(GaeTest, AdvantagesNormalized) {
  RandomSource rng(5);
  std::vector<Rollout> rollouts;
  for (int e = 0; e < 4; ++e) {
    std::vector<double> rewards(7);
    for (double& r : rewards) r = rng.Uniform(-3, 5);
    rollouts.push_back(MakeRollout(rewards, e % 2 == 0));
  }
  const GaeResult g = ComputeGae(rollouts, ObsValue, 0.99, 0.95);
  EXPECT_NEAR(g.advantages.mean(), 0.0, 1e-12);
  const double var =
      (g.advantages.array() - g.advantages.mean()).square().mean();
  EXPECT_NEAR(var, 1.0, 1e-6);
}

TEST(GaeTest, EmptyBatchThrows) {
  EXPECT_THROW(ComputeGae({}, ObsValue, 0.99, 0.95), Error);
  EXPECT_THROW(ComputeGae({Rollout{}}, ObsValue, 0.99, 0.95), Error);
}

// ------------------------------------------------ surrogate, KL and Fisher

struct Fixture {
  GaussianPolicy policy;
  PolicyBatch batch;
};

Fixture MakeFixture(int seed = 1) {
  const LqrEnv env(30);
  TrpoConfig c = SmallConfig();
  c.samples_per_iteration = 300;
  RandomSource init(seed), rng(seed + 100);
  Fixture f{MakePolicy(env, c, init), {}};
  f.policy.log_std()[0] = -0.4;
  const auto rollouts = CollectBatch(f.policy, env, c, rng);
  const GaeResult g = ComputeGae(
      rollouts, [](const Matrix& x) { return Vector::Zero(x.cols()); },
      c.gamma, c.gae_lambda);
  f.batch = MakePolicyBatch(f.policy, rollouts, g.advantages);
  return f;
}

TEST(SurrogateTest, IdenticalPolicyGivesMeanAdvantageAndZeroKl) {
  const Fixture f = MakeFixture();
  const SurrogateKl s = SurrogateAndKl(f.policy, f.batch);
  EXPECT_NEAR(s.surrogate, f.batch.advantages.mean(), 1e-12);
  EXPECT_NEAR(s.surrogate, 0.0, 1e-12);
  EXPECT_EQ(s.mean_kl, 0.0);
}

TEST(SurrogateTest, LinearInAdvantages) {
  Fixture f = MakeFixture();
  GaussianPolicy moved = f.policy;
  moved.SetParams(f.policy.GetParams() * 1.01);
  const double s1 = SurrogateAndKl(moved, f.batch).surrogate;
  f.batch.advantages *= 2.0;
  EXPECT_NEAR(SurrogateAndKl(moved, f.batch).surrogate, 2.0 * s1, 1e-12);
}

TEST(SurrogateTest, KlMatchesPerSampleClosedForm) {
  const Fixture f = MakeFixture();
  GaussianPolicy moved = f.policy;
  moved.SetParams(f.policy.GetParams() * 1.05);
  moved.log_std()[0] = -0.3;
  double sum = 0.0;
  const Matrix means = moved.mean_net().ForwardBatch(f.batch.policy_inputs);
  for (int i = 0; i < f.batch.size(); ++i) {
    sum += KlDiagGaussian(f.batch.old_means.col(i),
                          f.batch.old_log_std.array().exp().matrix(),
                          means.col(i), moved.Std());
  }
  EXPECT_NEAR(SurrogateAndKl(moved, f.batch).mean_kl, sum / f.batch.size(),
              1e-12);
}

TEST(SurrogateTest, GradientMatchesFiniteDifferences) {
  const Fixture f = MakeFixture();
  GaussianPolicy probe = f.policy;
  // Evaluate away from the old policy so the ratio is not identically one.
  const Vector theta = f.policy.GetParams() * 1.02;
  probe.SetParams(theta);
  const Vector g = SurrogateGradient(probe, f.batch);
  const double h = 1e-6;
  Vector fd(theta.size());
  for (int i = 0; i < theta.size(); ++i) {
    Vector p = theta;
    p[i] += h;
    probe.SetParams(p);
    const double up = SurrogateAndKl(probe, f.batch).surrogate;
    p[i] -= 2 * h;
    probe.SetParams(p);
    fd[i] = (up - SurrogateAndKl(probe, f.batch).surrogate) / (2 * h);
  }
  EXPECT_LE((g - fd).norm() / fd.norm(), 1e-4);
}

TEST(FisherTest, ZeroVectorGivesZero) {
  const Fixture f = MakeFixture();
  const Vector z = Vector::Zero(f.policy.num_params());
  EXPECT_TRUE(FisherVectorProduct(f.policy, f.batch, z, 0.1).isZero(0.0));
}

TEST(FisherTest, PositiveSemidefinite) {
  const Fixture f = MakeFixture();
  RandomSource rng(3);
  for (int k = 0; k < 20; ++k) {
    Vector v(f.policy.num_params());
    for (int i = 0; i < v.size(); ++i) v[i] = rng.Normal();
    EXPECT_GE(v.dot(FisherVectorProduct(f.policy, f.batch, v, 0.0)), 0.0);
    EXPECT_GT(v.dot(FisherVectorProduct(f.policy, f.batch, v, 0.1)), 0.0);
  }
}

TEST(FisherTest, DampingAddsMultipleOfV) {
  const Fixture f = MakeFixture();
  const Vector v = Vector::LinSpaced(f.policy.num_params(), -1.0, 1.0);
  const Vector a = FisherVectorProduct(f.policy, f.batch, v, 0.0);
  const Vector b = FisherVectorProduct(f.policy, f.batch, v, 0.25);
  EXPECT_LE((b - a - 0.25 * v).norm(), 1e-12);
}

TEST(FisherTest, MatchesFiniteDifferenceKlHessian) {
  const Fixture f = MakeFixture();
  const int n = f.policy.num_params();
  ASSERT_LE(n, 50);
  const Vector theta = f.policy.GetParams();
  GaussianPolicy probe = f.policy;
  auto kl = [&](const Vector& p) {
    probe.SetParams(p);
    return SurrogateAndKl(probe, f.batch).mean_kl;
  };
  const Vector v = Vector::LinSpaced(n, 0.5, -0.7);
  // Second directional derivative gives v^T H v; compare the full product
  // through mixed differences along v and each basis vector.
  const double h = 1e-4;
  Vector fd(n);
  for (int i = 0; i < n; ++i) {
    Vector e = Vector::Zero(n);
    e[i] = 1.0;
    fd[i] = (kl(theta + h * v + h * e) - kl(theta + h * v - h * e) -
             kl(theta - h * v + h * e) + kl(theta - h * v - h * e)) /
            (4 * h * h);
  }
  const Vector hv = FisherVectorProduct(f.policy, f.batch, v, 0.0);
  EXPECT_LE((hv - fd).norm() / fd.norm(), 1e-3);
}

TEST(FisherTest, WrongSizeThrows) {
  const Fixture f = MakeFixture();
  EXPECT_THROW(FisherVectorProduct(f.policy, f.batch, Vector::Zero(3), 0.1),
               DimensionError);
}

// --------------------------------------------------------------------- CG

TEST(ConjugateGradientTest, IdentityInOneIteration) {
  const Vector b = Vector::LinSpaced(6, -2.0, 3.0);
  const Vector x =
      ConjugateGradient([](const Vector& v) { return v; }, b, 1);
  EXPECT_LE((x - b).norm(), 1e-15);
}

TEST(ConjugateGradientTest, DiagonalSystem) {
  Vector d(2), b(2);
  d << 2.0, 4.0;
  b << 2.0, 4.0;
  const Vector x = ConjugateGradient(
      [&](const Vector& v) { return Vector(d.cwiseProduct(v)); }, b, 10);
  EXPECT_NEAR(x[0], 1.0, 1e-14);
  EXPECT_NEAR(x[1], 1.0, 1e-14);
}

TEST(ConjugateGradientTest, RandomSpdMatchesDirectSolve) {
  RandomSource rng(21);
  for (int trial = 0; trial < 10; ++trial) {
    Matrix a(20, 20);
    for (int i = 0; i < 20; ++i) {
      for (int j = 0; j < 20; ++j) a(i, j) = rng.Normal();
    }
    const Matrix spd = a * a.transpose() + 20.0 * Matrix::Identity(20, 20);
    Vector b(20);
    for (int i = 0; i < 20; ++i) b[i] = rng.Normal();
    const Vector x = ConjugateGradient(
        [&](const Vector& v) { return Vector(spd * v); }, b, 20);
    const Vector direct = spd.ldlt().solve(b);
    EXPECT_LE((x - direct).norm(), 1e-6);
  }
}

TEST(ConjugateGradientTest, ZeroRightHandSide) {
  EXPECT_TRUE(ConjugateGradient([](const Vector& v) { return v; },
                                Vector::Zero(4), 5)
                  .isZero(0.0));
}

// ----------------------------------------------------------------- update

TEST(TrpoUpdateTest, AcceptedStepsRespectTrustRegion) {
  TrpoConfig c = SmallConfig();
  for (int seed = 1; seed <= 5; ++seed) {
    Fixture f = MakeFixture(seed);
    const Vector before = f.policy.GetParams();
    const UpdateDiagnostics d = TrpoUpdate(f.policy, f.batch, c);
    if (d.accepted) {
      EXPECT_LE(d.mean_kl, c.kl_step);
      EXPECT_GT(d.surrogate_after, d.surrogate_before);
      EXPECT_LE(SurrogateAndKl(f.policy, f.batch).mean_kl, c.kl_step);
      EXPECT_NE(f.policy.GetParams(), before);
    } else {
      EXPECT_EQ(f.policy.GetParams(), before);
    }
  }
}

TEST(TrpoUpdateTest, RejectedLineSearchLeavesPolicyUnchanged) {
  Fixture f = MakeFixture();
  TrpoConfig c = SmallConfig();
  c.backtrack_steps = 0;
  const Vector before = f.policy.GetParams();
  const UpdateDiagnostics d = TrpoUpdate(f.policy, f.batch, c);
  EXPECT_FALSE(d.accepted);
  EXPECT_EQ(f.policy.GetParams(), before);
}

TEST(TrpoUpdateTest, ZeroAdvantagesMakeNoStep) {
  Fixture f = MakeFixture();
  f.batch.advantages.setZero();
  const Vector before = f.policy.GetParams();
  const UpdateDiagnostics d = TrpoUpdate(f.policy, f.batch, SmallConfig());
  EXPECT_FALSE(d.accepted);
  EXPECT_EQ(f.policy.GetParams(), before);
}

// ----------------------------------------------------------------- TrainUp

TEST(TrainUpTest, LqrReturnIncreasesMonotonically) {
  const LqrEnv env(50);
  TrpoConfig c;
  c.iterations = 10;
  // A small trust region keeps the return below its plateau for all ten
  // iterations, so monotonicity is not masked by batch noise at the optimum.
  c.samples_per_iteration = 8000;
  c.policy_hidden = {16};
  c.baseline_hidden = {16};
  c.kl_step = 0.0075;
  int monotone = 0;
  for (int seed = 1; seed <= 10; ++seed) {
    std::vector<double> returns;
    TrainUpOptions o;
    o.on_iteration = [&](const IterationLog& row) {
      returns.push_back(row.mean_return);
    };
    RandomSource rng(seed);
    TrainUp(env, c, rng, o);
    bool ok = true;
    for (size_t i = 1; i < returns.size(); ++i) ok &= returns[i] > returns[i - 1];
    monotone += ok;
  }
  EXPECT_GE(monotone, 9);
}

TEST(TrainUpTest, BitReproducible) {
  const LqrEnv env(30);
  TrpoConfig c = SmallConfig();
  std::ostringstream la, lb;
  TrainUpOptions oa, ob;
  oa.log = &la;
  ob.log = &lb;
  RandomSource ra(7), rb(7);
  const GaussianPolicy a = TrainUp(env, c, ra, oa);
  const GaussianPolicy b = TrainUp(env, c, rb, ob);
  EXPECT_EQ(a.GetParams(), b.GetParams());
  EXPECT_EQ(la.str(), lb.str());
  RandomSource rc(8);
  EXPECT_NE(TrainUp(env, c, rc).GetParams(), a.GetParams());
}

TEST(TrainUpTest, LogHasHeaderAndOneRowPerIteration) {
  const LqrEnv env(30);
  std::ostringstream log;
  TrainUpOptions o;
  o.log = &log;
  RandomSource rng(1);
  TrainUp(env, SmallConfig(), rng, o);
  std::istringstream in(log.str());
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, "iteration,samples,mean_return,mean_kl,surrogate,entropy");
  int rows = 0;
  while (std::getline(in, line)) ++rows;
  EXPECT_EQ(rows, 3);
}

TEST(TrainUpTest, RegularModeDropsMuInput) {
  const LqrEnv env(30);
  TrpoConfig c = SmallConfig();
  c.condition_on_mu = false;
  RandomSource rng(1);
  const GaussianPolicy p = TrainUp(env, c, rng);
  EXPECT_EQ(p.mu_dim(), 0);
  EXPECT_EQ(p.mean_net().input_dim(), 1);
  c.condition_on_mu = true;
  RandomSource rng2(1);
  EXPECT_EQ(TrainUp(env, c, rng2).mean_net().input_dim(), 2);
}

TEST(TrainUpTest, WritesCheckpoints) {
  const auto dir = TempDir("trpo_ckpt");
  const LqrEnv env(30);
  TrpoConfig c = SmallConfig();
  c.iterations = 4;
  c.checkpoint_interval = 2;
  TrainUpOptions o;
  o.checkpoint_dir = dir;
  RandomSource rng(1);
  const GaussianPolicy final_policy = TrainUp(env, c, rng, o);
  EXPECT_TRUE(std::filesystem::exists(dir / "policy_0002.bin"));
  ASSERT_TRUE(std::filesystem::exists(dir / "policy_0004.bin"));
  EXPECT_FALSE(std::filesystem::exists(dir / "policy_0003.bin"));
  EXPECT_EQ(LoadPolicy(dir / "policy_0004.bin").GetParams(),
            final_policy.GetParams());
}

TEST(ValueBaselineTest, FitsLinearTarget) {
  RandomSource rng(3);
  ValueBaseline baseline(2, {16}, rng);
  Matrix x(2, 400);
  Vector y(400);
  for (int i = 0; i < 400; ++i) {
    x(0, i) = rng.Uniform(-1, 1);
    x(1, i) = rng.Uniform(-1, 1);
    y[i] = 50.0 + 20.0 * x(0, i) - 10.0 * x(1, i);
  }
  double loss = 0.0;
  for (int k = 0; k < 20; ++k) loss = baseline.Fit(x, y, 5, 64, 1e-2, rng);
  EXPECT_LT(loss, 0.01);
  const Vector pred = baseline.Predict(x);
  EXPECT_LT((pred - y).cwiseAbs().mean(), 2.0);
}

TEST(ValueBaselineTest, EmptyFitThrows) {
  RandomSource rng(3);
  ValueBaseline baseline(2, {4}, rng);
  EXPECT_THROW(baseline.Fit(Matrix(2, 0), Vector(0), 1, 8, 1e-3, rng), Error);
}

}  // namespace
}  // namespace uposi
