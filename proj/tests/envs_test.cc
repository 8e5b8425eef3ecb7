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

#include <cmath>
#include <numbers>

#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

#include "uposi/envs/arm_throw.h"
#include "uposi/envs/cartpole_swingup.h"
#include "uposi/envs/double_pendulum.h"
#include "uposi/envs/hopper.h"
#include "uposi/envs/registry.h"
#include "uposi/error.h"

namespace uposi {
namespace {

constexpr double kPi = std::numbers::pi;

Vector Vec(std::initializer_list<double> v) {
  Vector out(static_cast<int>(v.size()));
  int i = 0;
  for (double x : v) out[i++] = x;
  return out;
}

EnvState MakeState(Vector q, Vector qd, Vector aux = Vector()) {
  EnvState s;
  s.q = std::move(q);
  s.qd = std::move(qd);
  s.aux = std::move(aux);
  return s;
}

// ---------------------------------------------------------------- common

TEST(WrapAngleTest, MapsIntoHalfOpenInterval) {
  EXPECT_DOUBLE_EQ(WrapAngle(0.0), 0.0);
  EXPECT_NEAR(WrapAngle(2 * kPi + 0.3), 0.3, 1e-12);
  EXPECT_NEAR(WrapAngle(-2 * kPi - 0.3), -0.3, 1e-12);
  EXPECT_NEAR(WrapAngle(kPi), kPi, 1e-12);
  EXPECT_NEAR(WrapAngle(-kPi), kPi, 1e-12);
}

TEST(RegistryTest, KnownTasks) {
  for (const auto& name : TaskNames()) {
    EXPECT_EQ(MakeEnvironment(name)->spec().name, name);
  }
  EXPECT_THROW(MakeEnvironment("walker"), ConfigError);
}

TEST(RegistryTest, OverridesReachParameters) {
  const auto env = MakeEnvironment("dpend", nlohmann::json{{"force_limit", 20.0}});
  EXPECT_EQ(env->spec().action_high[0], 20.0);
}

TEST(EnvSpecTest, ToPhysicalClampsAndMaps) {
  const DoublePendulumEnv env;
  EXPECT_EQ(env.spec().ToPhysical(Vec({0.5}))[0], 25.0);
  EXPECT_EQ(env.spec().ToPhysical(Vec({3.0}))[0], 50.0);
  EXPECT_EQ(env.spec().ToPhysical(Vec({-3.0}))[0], -50.0);
  EXPECT_THROW(env.spec().ToPhysical(Vec({1.0, 2.0})), DimensionError);
}

TEST(EnvironmentTest, AllEnvsUseTheSimulationStep) {
  for (const auto& name : TaskNames()) {
    const auto env = MakeEnvironment(name);
    EXPECT_EQ(env->spec().dt, 0.002) << name;
    EXPECT_GT(env->spec().obs_dim, 0);
    EXPECT_GT(env->spec().act_dim, 0);
    EXPECT_GT(env->spec().mu_dim, 0);
  }
}

TEST(EnvironmentTest, StepIsDeterministic) {
  for (const auto& name : TaskNames()) {
    const auto env = MakeEnvironment(name);
    RandomSource rng(3);
    const ModelParams mu = env->SampleMu(rng);
    const EnvState s = env->Reset(mu, rng);
    const Vector a = Vector::Constant(env->spec().act_dim, 7.0);
    const StepResult x = env->Step(s, a, mu);
    const StepResult y = env->Step(s, a, mu);
    EXPECT_EQ(x.next_state.q, y.next_state.q) << name;
    EXPECT_EQ(x.next_state.qd, y.next_state.qd) << name;
    EXPECT_EQ(x.reward, y.reward) << name;
    EXPECT_TRUE(std::isfinite(x.reward)) << name;
  }
}

TEST(EnvironmentTest, ResetIsDeterministicInTheSeed) {
  for (const auto& name : TaskNames()) {
    const auto env = MakeEnvironment(name);
    RandomSource a(4), b(4);
    const ModelParams mu = env->SampleMu(a);
    env->SampleMu(b);
    const EnvState sa = env->Reset(mu, a);
    const EnvState sb = env->Reset(mu, b);
    EXPECT_EQ(sa.q, sb.q) << name;
    EXPECT_EQ(sa.qd, sb.qd) << name;
  }
}

TEST(EnvironmentTest, NonFiniteStateThrows) {
  const DoublePendulumEnv env;
  EnvState s = MakeState(Vec({0, std::nan(""), 0}), Vector::Zero(3));
  EXPECT_THROW(env.Step(s, Vec({0.0}), env.MakeMu(Vec({0.0}))), NumericError);
}

TEST(EnvironmentTest, SampleMuStaysInBounds) {
  for (const auto& name : TaskNames()) {
    const auto env = MakeEnvironment(name);
    RandomSource rng(5);
    for (int i = 0; i < 200; ++i) {
      const ModelParams mu = env->SampleMu(rng);
      ASSERT_EQ(mu.size(), env->spec().sampled_mu_dim);
      ASSERT_TRUE(mu.InRange()) << name;
    }
  }
}

// ------------------------------------------------------- double pendulum

TEST(DoublePendulumTest, UprightCenteredRewardIsTen) {
  const DoublePendulumEnv env;
  const EnvState s = MakeState(Vector::Zero(3), Vector::Zero(3));
  EXPECT_EQ(env.Reward(s), 10.0);
  EXPECT_FALSE(env.Terminated(s));
  const StepResult r = env.Step(s, Vec({0.0}), env.MakeMu(Vec({0.0})));
  EXPECT_FALSE(r.terminated);
  EXPECT_NEAR(r.reward, 10.0, 1e-9);
}

TEST(DoublePendulumTest, RewardFormula) {
  const DoublePendulumEnv env;
  // sigma1 = 0.1, sigma2 = |0.1 + 0.2| = 0.3, cart at 1 m.
  const EnvState s = MakeState(Vec({1.0, 0.1, 0.2}), Vector::Zero(3));
  EXPECT_NEAR(env.Reward(s), -10.0 * 0.16 - 1.0 + 10.0, 1e-12);
  const EnvState neg = MakeState(Vec({-1.0, -0.1, -0.2}), Vector::Zero(3));
  EXPECT_NEAR(env.Reward(neg), env.Reward(s), 1e-12);
}

TEST(DoublePendulumTest, AnglesNormalizedBeforeReward) {
  const DoublePendulumEnv env;
  const EnvState a = MakeState(Vec({0.0, 0.1, 0.0}), Vector::Zero(3));
  const EnvState b = MakeState(Vec({0.0, 0.1 + 2 * kPi, -2 * kPi}),
                               Vector::Zero(3));
  EXPECT_NEAR(env.Reward(a), env.Reward(b), 1e-9);
  const auto [s1, s2] = env.PoleDeviations(
      MakeState(Vec({0.0, 1.5 * kPi, 0.0}), Vector::Zero(3)));
  EXPECT_NEAR(s1, 0.5 * kPi, 1e-12);
  EXPECT_NEAR(s2, 0.5 * kPi, 1e-12);
}

TEST(DoublePendulumTest, AngleTerminationAtHalfPi) {
  const DoublePendulumEnv env;
  EXPECT_EQ(env.params().angle_limit, 0.5 * kPi);
  const double below = 0.5 * kPi - 1e-9;
  const double above = 0.5 * kPi + 1e-9;
  EXPECT_FALSE(env.Terminated(
      MakeState(Vec({0.0, 0.5 * below, 0.0}), Vector::Zero(3))));
  EXPECT_TRUE(env.Terminated(
      MakeState(Vec({0.0, 0.5 * above, 0.0}), Vector::Zero(3))));
  // Lower pole upright, upper pole bent by the limit.
  EXPECT_TRUE(env.Terminated(
      MakeState(Vec({0.0, 0.0, above}), Vector::Zero(3))));
}

TEST(DoublePendulumTest, CartTerminationAtFiveMeters) {
  const DoublePendulumEnv env;
  EXPECT_EQ(env.params().cart_limit, 5.0);
  EXPECT_TRUE(env.Terminated(MakeState(Vec({5.0, 0, 0}), Vector::Zero(3))));
  EXPECT_TRUE(env.Terminated(MakeState(Vec({-5.0, 0, 0}), Vector::Zero(3))));
  EXPECT_FALSE(
      env.Terminated(MakeState(Vec({4.999, 0, 0}), Vector::Zero(3))));
}

TEST(DoublePendulumTest, ConstantsAndShapes) {
  const DoublePendulumEnv env;
  EXPECT_EQ(env.params().k_angle, 10.0);
  EXPECT_EQ(env.params().k_cart, 1.0);
  EXPECT_EQ(env.params().pole_length[0], 0.5);
  EXPECT_EQ(env.params().pole_length[1], 0.5);
  EXPECT_EQ(env.spec().obs_dim, 6);
  EXPECT_EQ(env.spec().mu_bounds[0].low, -0.6);
  EXPECT_EQ(env.spec().mu_bounds[0].high, 0.6);
}

TEST(DoublePendulumTest, ForceIsClamped) {
  const DoublePendulumEnv env;
  const EnvState s = MakeState(Vector::Zero(3), Vector::Zero(3));
  const ModelParams mu = env.MakeMu(Vec({0.2}));
  const auto limit = env.Step(s, Vec({env.params().force_limit}), mu);
  const auto over = env.Step(s, Vec({1e4}), mu);
  EXPECT_EQ(limit.next_state.qd, over.next_state.qd);
}

TEST(DoublePendulumTest, ResetPerturbationWithinBounds) {
  const DoublePendulumEnv env;
  RandomSource rng(8);
  const ModelParams mu = env.MakeMu(Vec({0.0}));
  for (int i = 0; i < 100; ++i) {
    const EnvState s = env.Reset(mu, rng);
    ASSERT_LE(s.q.cwiseAbs().maxCoeff(), 0.01);
    ASSERT_LE(s.qd.cwiseAbs().maxCoeff(), 0.01);
  }
}

TEST(DoublePendulumTest, ZeroOffsetIsMirrorSymmetric) {
  const DoublePendulumEnv env;
  const ModelParams mu = env.MakeMu(Vec({0.0}));
  EnvState a = MakeState(Vec({0.1, 0.05, -0.02}), Vec({0.3, -0.2, 0.1}));
  EnvState b = MakeState(-a.q, -a.qd);
  for (int t = 0; t < 300; ++t) {
    const double u = 20.0 * std::sin(0.05 * t);
    a = env.Step(a, Vec({u}), mu).next_state;
    b = env.Step(b, Vec({-u}), mu).next_state;
  }
  EXPECT_LE((a.q + b.q).norm(), 1e-9);
  EXPECT_LE((a.qd + b.qd).norm(), 1e-9);
}

TEST(DoublePendulumTest, OffsetChangesDynamics) {
  const DoublePendulumEnv env;
  const EnvState s = MakeState(Vector::Zero(3), Vector::Zero(3));
  const auto a = env.Step(s, Vec({0.0}), env.MakeMu(Vec({-0.3})));
  const auto b = env.Step(s, Vec({0.0}), env.MakeMu(Vec({0.3})));
  // An offset COM produces a gravity torque in the direction of the offset.
  EXPECT_GT(a.next_state.qd[1], 0.0);
  EXPECT_LT(b.next_state.qd[1], 0.0);
}

// ---------------------------------------------------------------- cart-pole

TEST(CartPoleTest, UprightRewardIsTenMinusLogPointOne) {
  const CartPoleSwingUpEnv env;
  const EnvState s =
      MakeState(Vector::Zero(2), Vector::Zero(2), Vector::Constant(1, kPi));
  EXPECT_NEAR(env.Reward(s), 10.0 - std::log(0.1), 1e-12);
  EXPECT_NEAR(env.Reward(s), 12.302585092994046, 1e-12);
}

TEST(CartPoleTest, RewardFormula) {
  const CartPoleSwingUpEnv env;
  const double sigma = 0.4, x = -0.5;
  const EnvState s = MakeState(Vec({x, sigma + 2 * kPi}), Vector::Zero(2),
                               Vector::Constant(1, kPi));
  const double r_sigma = sigma * sigma + std::log(sigma * sigma + 0.1);
  EXPECT_NEAR(env.Reward(s), -r_sigma - 0.2 * 0.5 + 10.0, 1e-12);
}

TEST(CartPoleTest, ForceClampedAtForty) {
  const CartPoleSwingUpEnv env;
  EXPECT_EQ(env.spec().action_high[0], 40.0);
  EXPECT_EQ(env.spec().action_low[0], -40.0);
  const EnvState s =
      MakeState(Vec({0.0, kPi}), Vector::Zero(2), Vector::Constant(1, kPi));
  const ModelParams mu = env.MakeMu(Vec({0.5, 0.5}));
  EXPECT_EQ(env.Step(s, Vec({100.0}), mu).next_state.qd,
            env.Step(s, Vec({40.0}), mu).next_state.qd);
  EXPECT_EQ(env.Step(s, Vec({-100.0}), mu).next_state.qd,
            env.Step(s, Vec({-40.0}), mu).next_state.qd);
  EXPECT_NE(env.Step(s, Vec({30.0}), mu).next_state.qd,
            env.Step(s, Vec({40.0}), mu).next_state.qd);
}

TEST(CartPoleTest, CartTerminationBeyondTwoMeters) {
  const CartPoleSwingUpEnv env;
  const Vector aux = Vector::Constant(1, kPi);
  EXPECT_FALSE(env.Terminated(MakeState(Vec({2.0, kPi}), Vector::Zero(2), aux)));
  EXPECT_TRUE(
      env.Terminated(MakeState(Vec({2.001, kPi}), Vector::Zero(2), aux)));
  EXPECT_TRUE(
      env.Terminated(MakeState(Vec({-2.001, kPi}), Vector::Zero(2), aux)));
}

TEST(CartPoleTest, RotationTerminationBeyondFourPi) {
  const CartPoleSwingUpEnv env;
  const Vector aux = Vector::Constant(1, -kPi);
  EXPECT_EQ(env.params().rotation_limit, 4.0 * kPi);
  EXPECT_FALSE(env.Terminated(
      MakeState(Vec({0.0, -kPi + 4 * kPi - 1e-6}), Vector::Zero(2), aux)));
  EXPECT_TRUE(env.Terminated(
      MakeState(Vec({0.0, -kPi + 4 * kPi + 1e-6}), Vector::Zero(2), aux)));
  EXPECT_TRUE(env.Terminated(
      MakeState(Vec({0.0, -kPi - 4 * kPi - 1e-6}), Vector::Zero(2), aux)));
}

TEST(CartPoleTest, ResetAtPlusOrMinusPi) {
  const CartPoleSwingUpEnv env;
  RandomSource rng(2);
  const ModelParams mu = env.MakeMu(Vec({0.5, 0.5}));
  int positive = 0;
  for (int i = 0; i < 400; ++i) {
    const EnvState s = env.Reset(mu, rng);
    ASSERT_NEAR(std::abs(s.q[1]), kPi, 0.03);
    ASSERT_EQ(s.aux[0], s.q[1]);
    ASSERT_EQ(s.q[0], 0.0);
    positive += s.q[1] > 0;
  }
  EXPECT_GT(positive, 150);
  EXPECT_LT(positive, 250);
}

TEST(CartPoleTest, ObservationIsPositionsOnly) {
  const CartPoleSwingUpEnv env;
  EXPECT_EQ(env.spec().obs_dim, 2);
  const EnvState s = MakeState(Vec({0.3, 1.0}), Vec({5.0, -2.0}),
                               Vector::Constant(1, kPi));
  EXPECT_EQ(env.Observe(s), Vec({0.3, 1.0}));
}

TEST(CartPoleTest, PolicyMuAppendsVelocities) {
  const CartPoleSwingUpEnv env;
  EXPECT_EQ(env.spec().mu_dim, 4);
  const EnvState s = MakeState(Vec({0.3, 1.0}), Vec({5.0, -2.0}),
                               Vector::Constant(1, kPi));
  const ModelParams pm = env.PolicyMu(s, env.MakeMu(Vec({0.2, 0.7})));
  EXPECT_EQ(pm.values(), Vec({0.2, 0.7, 5.0, -2.0}));
  EXPECT_EQ(pm.bounds()[2].high, 5.0);
  EXPECT_EQ(pm.bounds()[3].high, 10.0);
}

TEST(CartPoleTest, SmallOscillationPeriodMatchesPendulum) {
  // Heavy cart and a negligible rod leave a point-mass pendulum of length L.
  CartPoleParams p;
  p.cart_mass = 1e7;
  p.pole_mass = 1e-7;
  const CartPoleSwingUpEnv env(p);
  const double length = 0.6;
  const ModelParams mu = env.MakeMu(Vec({1.0, length}));
  EnvState s =
      MakeState(Vec({0.0, kPi + 0.02}), Vector::Zero(2), Vector::Constant(1, kPi));
  std::vector<double> crossings;
  double prev = s.q[1] - kPi;
  for (int t = 1; t <= 5000; ++t) {
    s = env.Step(s, Vec({0.0}), mu).next_state;
    const double cur = s.q[1] - kPi;
    if (prev > 0.0 && cur <= 0.0) {
      crossings.push_back((t - 1 + prev / (prev - cur)) * env.spec().dt);
    }
    prev = cur;
  }
  ASSERT_GE(crossings.size(), 3u);
  const double period =
      (crossings.back() - crossings.front()) / (crossings.size() - 1);
  const double expected = 2 * kPi * std::sqrt(length / kGravity);
  EXPECT_NEAR(period / expected, 1.0, 0.01);
}

// --------------------------------------------------------------------- arm

EnvState ArmStateWithBlockAt(const ArmThrowEnv& env, double x, double y) {
  RandomSource rng(1);
  EnvState s = env.Reset(env.MakeMu(Vec({1.0})), rng);
  s.qd.setZero();
  s.aux[ArmThrowEnv::kBlockX] = x;
  s.aux[ArmThrowEnv::kBlockY] = y;
  return s;
}

TEST(ArmThrowTest, RewardAtTargetIsAliveBonus) {
  const ArmThrowEnv env;
  const EnvState s = ArmStateWithBlockAt(env, 0.0, 2.0);
  EXPECT_EQ(env.Reward(s, Vector::Zero(2)), 35.0);
  const EnvState above = ArmStateWithBlockAt(env, 0.0, 2.7);
  EXPECT_EQ(env.Reward(above, Vector::Zero(2)), 35.0);
}

TEST(ArmThrowTest, RewardAtOneMeter) {
  const ArmThrowEnv env;
  EXPECT_EQ(env.Reward(ArmStateWithBlockAt(env, 0.0, 1.0), Vector::Zero(2)),
            25.0);
}

TEST(ArmThrowTest, EffortAndVelocityPenalties) {
  const ArmThrowEnv env;
  EnvState s = ArmStateWithBlockAt(env, 0.0, 2.0);
  s.qd = Vec({1.0, 2.0});
  EXPECT_NEAR(env.Reward(s, Vec({10.0, 20.0})),
              35.0 - 1e-5 * 500.0 - 1e-3 * 5.0, 1e-12);
}

TEST(ArmThrowTest, TerminationThresholds) {
  const ArmThrowEnv env;
  EXPECT_FALSE(env.Terminated(ArmStateWithBlockAt(env, 0.0, -0.2)));
  EXPECT_TRUE(env.Terminated(ArmStateWithBlockAt(env, 0.0, -0.2001)));
  EXPECT_FALSE(env.Terminated(ArmStateWithBlockAt(env, 0.8, 1.0)));
  EXPECT_TRUE(env.Terminated(ArmStateWithBlockAt(env, 0.8001, 1.0)));
  EXPECT_TRUE(env.Terminated(ArmStateWithBlockAt(env, -0.8001, 1.0)));
}

TEST(ArmThrowTest, StartsPointingDownWithBlockAtGripper) {
  const ArmThrowEnv env;
  RandomSource rng(3);
  const EnvState s = env.Reset(env.MakeMu(Vec({1.0})), rng);
  EXPECT_EQ(s.aux[ArmThrowEnv::kAttached], 1.0);
  EXPECT_NEAR(s.aux[ArmThrowEnv::kBlockY], 0.8 - 0.8, 0.02);
  EXPECT_NEAR(s.aux[ArmThrowEnv::kBlockX], 0.0, 0.02);
}

TEST(ArmThrowTest, BlockMassChangesArmDynamics) {
  const ArmThrowEnv env;
  RandomSource rng(3);
  const EnvState s = env.Reset(env.MakeMu(Vec({1.0})), rng);
  const Vector tau = Vec({20.0, 10.0});
  const auto light = env.Step(s, tau, env.MakeMu(Vec({0.2})));
  const auto heavy = env.Step(s, tau, env.MakeMu(Vec({2.0})));
  EXPECT_GT(light.next_state.qd.norm(), heavy.next_state.qd.norm());
}

TEST(ArmThrowTest, TimedReleaseDetachesBlock) {
  ArmThrowParams p;
  p.release = ArmThrowParams::Release::kTimed;
  p.release_step = 10;
  const ArmThrowEnv env(p);
  RandomSource rng(3);
  const ModelParams mu = env.MakeMu(Vec({1.0}));
  EnvState s = env.Reset(mu, rng);
  for (int t = 0; t < 9; ++t) s = env.Step(s, Vec({5.0, 5.0}), mu).next_state;
  EXPECT_EQ(s.aux[ArmThrowEnv::kAttached], 1.0);
  s = env.Step(s, Vec({5.0, 5.0}), mu).next_state;
  EXPECT_EQ(s.aux[ArmThrowEnv::kAttached], 0.0);
}

TEST(ArmThrowTest, VelocityReleaseForcedByDeadline) {
  const ArmThrowEnv env;
  RandomSource rng(3);
  const ModelParams mu = env.MakeMu(Vec({1.0}));
  EnvState s = env.Reset(mu, rng);
  for (int t = 0; t < env.params().max_attach_steps; ++t) {
    s = env.Step(s, Vector::Zero(2), mu).next_state;
  }
  EXPECT_EQ(s.aux[ArmThrowEnv::kAttached], 0.0);
}

TEST(ArmThrowTest, ReleasedBlockIsBallistic) {
  const ArmThrowEnv env;
  RandomSource rng(3);
  const ModelParams mu = env.MakeMu(Vec({1.0}));
  EnvState s = env.Release(env.Reset(mu, rng));
  s.aux[ArmThrowEnv::kBlockX] = 0.0;
  s.aux[ArmThrowEnv::kBlockY] = 0.5;
  s.aux[ArmThrowEnv::kBlockVx] = 0.1;
  s.aux[ArmThrowEnv::kBlockVy] = 3.0;
  double apex = 0.5;
  for (int t = 0; t < 400; ++t) {
    s = env.Step(s, Vector::Zero(2), mu).next_state;
    apex = std::max(apex, env.TaskMetric(s));
  }
  EXPECT_NEAR(apex - 0.5, 9.0 / (2 * kGravity), 1e-3);
}

// ------------------------------------------------------------------ hopper

TEST(HopperTest, StandingStillRewardIsAliveBonus) {
  const HopperEnv env;
  RandomSource rng(1);
  EnvState s = env.Reset(env.MakeMu(Vec({0.9})), rng);
  s.qd.setZero();
  EXPECT_EQ(env.params().alive_bonus, 3.0);
  EXPECT_EQ(env.Reward(s, Vector::Zero(3)), 3.0);
}

TEST(HopperTest, RewardFormula) {
  const HopperEnv env;
  RandomSource rng(1);
  EnvState s = env.Reset(env.MakeMu(Vec({0.9})), rng);
  s.qd.setZero();
  s.qd[0] = 1.5;
  const Vector tau = Vec({30.0, -60.0, 15.0});  // normalized (0.5, -1, 0.5)
  EXPECT_NEAR(env.Reward(s, tau), 1.5 - 0.002 * 1.5 + 3.0, 1e-12);
}

TEST(HopperTest, ObservationOmitsForwardPosition) {
  const HopperEnv env;
  RandomSource rng(2);
  EnvState s = env.Reset(env.MakeMu(Vec({0.9})), rng);
  EnvState shifted = s;
  shifted.q[0] += 12.5;
  EXPECT_EQ(env.Observe(s), env.Observe(shifted));
  EXPECT_EQ(env.spec().obs_dim, 11);
}

TEST(HopperTest, FallTermination) {
  const HopperEnv env;
  RandomSource rng(2);
  const EnvState s = env.Reset(env.MakeMu(Vec({0.9})), rng);
  EXPECT_FALSE(env.Terminated(s));
  EnvState low = s;
  low.q[1] = 0.79 * env.StandingHeight();
  EXPECT_TRUE(env.Terminated(low));
  EnvState tilted = s;
  tilted.q[2] = 1.01;
  EXPECT_TRUE(env.Terminated(tilted));
}

TEST(HopperTest, FrictionBounds) {
  const HopperEnv env;
  EXPECT_EQ(env.spec().mu_bounds[0].low, 0.3);
  EXPECT_EQ(env.spec().mu_bounds[0].high, 1.0);
}

TEST(HopperTest, SettlesWithSmallPenetrationInsideFrictionCone) {
  const HopperEnv env;
  RandomSource rng(3);
  const ModelParams mu = env.MakeMu(Vec({0.9}));
  EnvState s = env.Reset(mu, rng);
  double last_penetration = 0.0;
  for (int t = 0; t < 2500; ++t) {
    const StepResult r = env.Step(s, Vector::Zero(3), mu);
    for (const ContactForce& c : r.contacts) {
      ASSERT_GE(c.normal, 0.0);
      ASSERT_LE(std::abs(c.tangential), 0.9 * c.normal + 1e-9);
    }
    last_penetration = std::max(r.contacts[0].penetration,
                                r.contacts[1].penetration);
    s = r.next_state;
  }
  EXPECT_LE(last_penetration, 2e-3);
}

TEST(HopperTest, LowFrictionSlidesMore) {
  const HopperEnv env;
  auto slide = [&](double friction) {
    RandomSource rng(4);
    const ModelParams mu = env.MakeMu(Vec({friction}));
    EnvState s = env.Reset(mu, rng);
    double x0 = env.FootX(s);
    for (int t = 0; t < 100; ++t) {
      s = env.Step(s, Vec({40.0, -40.0, 20.0}), mu).next_state;
    }
    return std::abs(env.FootX(s) - x0);
  };
  EXPECT_GE(slide(0.3), slide(1.0));
}

}  // namespace
}  // namespace uposi
