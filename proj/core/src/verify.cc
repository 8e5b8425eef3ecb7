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

#include "uposi/verify.h"

#include <algorithm>
#include <cmath>

#include <Eigen/Cholesky>
#include <Eigen/LU>
#include <fmt/format.h>

#include "uposi/dense_network.h"
#include "uposi/envs/arm_throw.h"
#include "uposi/envs/cartpole_swingup.h"
#include "uposi/envs/double_pendulum.h"
#include "uposi/envs/hopper.h"
#include "uposi/gaussian_policy.h"
#include "uposi/random.h"
#include "uposi/trpo.h"

namespace uposi {
namespace {

CheckResult Make(std::string name, double value, double tolerance,
                 std::string detail = {}) {
  CheckResult r;
  r.name = std::move(name);
  r.value = value;
  r.tolerance = tolerance;
  r.passed = std::isfinite(value) && value <= tolerance;
  r.detail = std::move(detail);
  return r;
}

double RelativeError(const Vector& a, const Vector& b) {
  const double scale = std::max({a.norm(), b.norm(), 1e-300});
  return (a - b).norm() / scale;
}

Vector RandomVector(int n, RandomSource& rng, double sd = 1.0) {
  Vector v(n);
  for (int i = 0; i < n; ++i) v[i] = rng.Normal(0.0, sd);
  return v;
}

// Central differences of a scalar function of a vector.
template <typename F>
Vector NumericGradient(F f, Vector x, double h) {
  Vector g(x.size());
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    const double xi = x[i];
    x[i] = xi + h;
    const double fp = f(x);
    x[i] = xi - h;
    const double fm = f(x);
    x[i] = xi;
    g[i] = (fp - fm) / (2.0 * h);
  }
  return g;
}

CheckResult NetworkGradientCheck(RandomSource& rng, double dropout) {
  DenseNetwork net({5, 8, 6, 3}, dropout);
  net.Initialize(rng);
  Vector p0 = net.GetParams();
  p0 += RandomVector(static_cast<int>(p0.size()), rng, 0.3);
  net.SetParams(p0);
  const Vector x = RandomVector(5, rng);
  const Vector w = RandomVector(3, rng);
  const Mode mode = dropout > 0.0 ? Mode::kTrain : Mode::kEval;
  const RandomSource mask_rng = rng.Fork(99);

  auto output = [&](const DenseNetwork& n, const Vector& in) {
    RandomSource r = mask_rng;
    return w.dot(n.Forward(in, mode, &r));
  };
  RandomSource r = mask_rng;
  ForwardTape tape;
  net.Forward(x, mode, &r, &tape);
  const NetworkGradients g = net.Backward(tape, w);

  DenseNetwork probe = net;
  const Vector fd_params = NumericGradient(
      [&](const Vector& p) {
        probe.SetParams(p);
        return output(probe, x);
      },
      p0, 1e-6);
  const Vector fd_input = NumericGradient(
      [&](const Vector& in) { return output(net, in); }, x, 1e-6);
  const double err = std::max(RelativeError(g.params, fd_params),
                              RelativeError(g.inputs.col(0), fd_input));
  return Make(dropout > 0.0 ? "network gradient (dropout masks fixed)"
                            : "network gradient",
              err, 1e-4, "relative error vs central differences");
}

PolicyBatch TinyBatch(const GaussianPolicy& policy, int n, RandomSource& rng) {
  std::vector<Rollout> rollouts(1);
  for (int i = 0; i < n; ++i) {
    Transition t;
    t.observation = RandomVector(policy.obs_dim(), rng);
    t.mu_normed = RandomVector(std::max(policy.mu_dim(), 1), rng)
                      .head(policy.mu_dim());
    t.action = RandomVector(policy.act_dim(), rng);
    rollouts[0].transitions.push_back(t);
  }
  return MakePolicyBatch(policy, rollouts, RandomVector(n, rng));
}

GaussianPolicy TinyPolicy(RandomSource& rng) {
  GaussianPolicy policy(2, 1, 1, {4});
  policy.Initialize(rng);
  Vector p = policy.GetParams();
  p += RandomVector(static_cast<int>(p.size()), rng, 0.5);
  policy.SetParams(p);
  return policy;
}

CheckResult SurrogateGradientCheck(RandomSource& rng) {
  GaussianPolicy policy = TinyPolicy(rng);
  const PolicyBatch batch = TinyBatch(policy, 16, rng);
  // Move away from the old policy so the importance ratios differ from 1.
  Vector p = policy.GetParams();
  p += RandomVector(static_cast<int>(p.size()), rng, 0.05);
  policy.SetParams(p);
  const Vector g = SurrogateGradient(policy, batch);
  GaussianPolicy probe = policy;
  const Vector fd = NumericGradient(
      [&](const Vector& q) {
        probe.SetParams(q);
        return SurrogateAndKl(probe, batch).surrogate;
      },
      p, 1e-6);
  return Make("surrogate gradient", RelativeError(g, fd), 1e-4,
              "relative error vs central differences");
}

CheckResult GaeCheck(RandomSource& rng) {
  const double gamma = 0.97;
  const double lambda = 0.9;
  // Observation k carries its own index so the value table can be looked up.
  std::vector<double> table;
  std::vector<Rollout> rollouts(3);
  const int lengths[3] = {5, 4, 1};
  const bool terminal[3] = {true, false, true};
  for (int e = 0; e < 3; ++e) {
    for (int t = 0; t <= lengths[e]; ++t) table.push_back(rng.Normal());
  }
  int id = 0;
  for (int e = 0; e < 3; ++e) {
    for (int t = 0; t < lengths[e]; ++t) {
      Transition tr;
      tr.observation = Vector::Constant(1, id);
      tr.next_observation = Vector::Constant(1, id + 1);
      tr.mu_normed = Vector::Zero(0);
      tr.next_mu_normed = Vector::Zero(0);
      tr.reward = rng.Uniform(-1.0, 2.0);
      tr.terminated = terminal[e] && t == lengths[e] - 1;
      rollouts[e].transitions.push_back(tr);
      ++id;
    }
    ++id;  // slot for the state after the last transition
  }
  auto value = [&](const Matrix& x) {
    Vector v(x.cols());
    for (Eigen::Index i = 0; i < x.cols(); ++i) {
      v[i] = table[static_cast<size_t>(std::lround(x(0, i)))];
    }
    return v;
  };
  const GaeResult gae = ComputeGae(rollouts, value, gamma, lambda);

  double err = 0.0;
  int k = 0;
  for (const auto& r : rollouts) {
    const int T = r.size();
    auto V = [&](int t) {
      if (t == T && r.terminated()) return 0.0;
      const auto& tr = t < T ? r.transitions[t] : r.transitions[T - 1];
      const double obs = t < T ? tr.observation[0] : tr.next_observation[0];
      return table[static_cast<size_t>(std::lround(obs))];
    };
    for (int t = 0; t < T; ++t) {
      double adv = 0.0;
      double ret = 0.0;
      for (int l = t; l < T; ++l) {
        const double delta = r.transitions[l].reward + gamma * V(l + 1) - V(l);
        adv += std::pow(gamma * lambda, l - t) * delta;
        ret += std::pow(gamma, l - t) * r.transitions[l].reward;
      }
      ret += std::pow(gamma, T - t) * V(T);
      err = std::max({err, std::abs(adv - gae.raw_advantages[k]),
                      std::abs(ret - gae.returns[k])});
      ++k;
    }
  }
  return Make("GAE vs nested-sum oracle", err, 1e-10, "max absolute error");
}

CheckResult KlCheck(RandomSource& rng) {
  double err = 0.0;
  for (int trial = 0; trial < 50; ++trial) {
    const int d = 1 + trial % 4;
    const Vector m1 = RandomVector(d, rng);
    const Vector m2 = RandomVector(d, rng);
    Vector s1(d), s2(d);
    for (int i = 0; i < d; ++i) {
      s1[i] = std::exp(rng.Uniform(-1.0, 1.0));
      s2[i] = std::exp(rng.Uniform(-1.0, 1.0));
    }
    // Full-covariance closed form.
    const Matrix c1 = s1.array().square().matrix().asDiagonal();
    const Matrix c2 = s2.array().square().matrix().asDiagonal();
    const Matrix c2_inv = c2.inverse();
    const Vector dm = m2 - m1;
    const double expected =
        0.5 * ((c2_inv * c1).trace() + dm.dot(c2_inv * dm) - d +
               std::log(c2.determinant() / c1.determinant()));
    err = std::max(err, std::abs(KlDiagGaussian(m1, s1, m2, s2) - expected));
    err = std::max(err, std::abs(KlDiagGaussian(m1, s1, m1, s1)));
  }
  const Vector zero = Vector::Zero(1);
  const Vector one = Vector::Ones(1);
  err = std::max(err, std::abs(KlDiagGaussian(zero, one, one, one) - 0.5));
  return Make("diagonal Gaussian KL closed form", err, 1e-12,
              "max absolute error; self-KL included");
}

CheckResult ConjugateGradientCheck(RandomSource& rng) {
  double err = 0.0;
  for (int trial = 0; trial < 5; ++trial) {
    Matrix b(20, 20);
    for (Eigen::Index i = 0; i < b.size(); ++i) b.data()[i] = rng.Normal();
    const Matrix a = b * b.transpose() / 20.0 + Matrix::Identity(20, 20);
    const Vector rhs = RandomVector(20, rng);
    const Vector direct = a.ldlt().solve(rhs);
    const Vector cg = ConjugateGradient(
        [&](const Vector& v) { return Vector(a * v); }, rhs, 20, 0.0);
    err = std::max(err, RelativeError(cg, direct));
  }
  return Make("conjugate gradient vs direct solve", err, 1e-6,
              "relative error, 20x20 SPD, 20 iterations");
}

CheckResult FisherCheck(RandomSource& rng) {
  GaussianPolicy policy = TinyPolicy(rng);
  const PolicyBatch batch = TinyBatch(policy, 12, rng);
  const Vector p0 = policy.GetParams();
  const int n = static_cast<int>(p0.size());
  GaussianPolicy probe = policy;
  auto kl = [&](const Vector& p) {
    probe.SetParams(p);
    return SurrogateAndKl(probe, batch).mean_kl;
  };
  const double h = 1e-3;
  Matrix hess(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = i; j < n; ++j) {
      Vector p = p0;
      p[i] += h;
      p[j] += h;
      const double fpp = kl(p);
      p[j] -= 2 * h;
      const double fpm = kl(p);
      p[i] -= 2 * h;
      const double fmm = kl(p);
      p[j] += 2 * h;
      const double fmp = kl(p);
      hess(i, j) = hess(j, i) = (fpp - fpm - fmp + fmm) / (4 * h * h);
    }
  }
  double err = 0.0;
  for (int trial = 0; trial < 3; ++trial) {
    const Vector v = RandomVector(n, rng);
    err = std::max(err, RelativeError(FisherVectorProduct(policy, batch, v, 0.0),
                                      hess * v));
  }
  return Make(fmt::format("Fisher-vector product vs KL Hessian ({} params)", n),
              err, 1e-3, "relative error vs finite-difference Hessian");
}

struct EnergyRun {
  double final_drift = 0.0;  // (E(T) - E(0)) / scale
  double max_swing = 0.0;    // max_t |E(t) - E(0)| / scale
  double final_energy = 0.0; // (E(T) - E_rest) / scale
};

// Passive chain from (q, qd) over `seconds`. Energies are relative to the
// energy above the rest configuration.
EnergyRun PassiveEnergy(const PlanarChain& chain, Vector q, Vector qd,
                        const Vector& rest, double dt, double seconds) {
  auto energy = [&](const Vector& qq, const Vector& vv) {
    const auto k = chain.Kinematic(qq, vv);
    return chain.KineticEnergy(k) + chain.PotentialEnergy(k);
  };
  const double e_rest = energy(rest, Vector::Zero(rest.size()));
  const double e0 = energy(q, qd);
  const double scale = std::abs(e0 - e_rest);
  const Vector tau = Vector::Zero(q.size());
  const int steps = static_cast<int>(std::lround(seconds / dt));
  EnergyRun run;
  for (int s = 0; s < steps; ++s) {
    SemiImplicitEuler(q, qd, chain.Accelerations(q, qd, tau), dt);
    run.max_swing = std::max(run.max_swing, std::abs(energy(q, qd) - e0) / scale);
  }
  run.final_drift = (energy(q, qd) - e0) / scale;
  run.final_energy = (energy(q, qd) - e_rest) / scale;
  return run;
}

// Net energy drift over 1 s at the control step, and the gap to a fine-step
// reference run from the same state.
CheckResult EnergyCheck(const std::string& name, const PlanarChain& chain,
                        const Vector& q, const Vector& qd, const Vector& rest) {
  const EnergyRun coarse = PassiveEnergy(chain, q, qd, rest, kTimeStep, 1.0);
  const EnergyRun fine = PassiveEnergy(chain, q, qd, rest, 1e-4, 1.0);
  const double gap = std::abs(coarse.final_energy - fine.final_energy);
  return Make(name, std::max(std::abs(coarse.final_drift), gap), 0.005,
              fmt::format("drift over 1 s {:.3g} at dt=0.002 ({:.3g} at "
                          "dt=1e-4); gap to reference {:.3g}; in-window "
                          "oscillation {:.3g}",
                          coarse.final_drift, fine.final_drift, gap,
                          coarse.max_swing));
}

CheckResult BallisticCheck() {
  const ArmThrowEnv env;
  const ModelParams mu = env.MakeMu(Vector::Constant(1, 1.0));
  RandomSource rng(1);
  EnvState s = env.Reset(mu, rng);
  s = env.Release(s);
  const double y0 = 1.0;
  const double vy = 3.0;
  s.aux[ArmThrowEnv::kBlockX] = 0.0;
  s.aux[ArmThrowEnv::kBlockY] = y0;
  s.aux[ArmThrowEnv::kBlockVx] = 0.0;
  s.aux[ArmThrowEnv::kBlockVy] = vy;
  double apex = y0;
  const Vector zero = Vector::Zero(2);
  for (int t = 0; t < 500; ++t) {
    s = env.Step(s, zero, mu).next_state;
    apex = std::max(apex, env.TaskMetric(s));
  }
  const double expected = vy * vy / (2.0 * kGravity);
  return Make("released block apex", std::abs((apex - y0) - expected), 1e-3,
              fmt::format("rise {:.6f} m vs v^2/2g = {:.6f} m", apex - y0,
                          expected));
}

CheckResult HopperContactCheck(RandomSource& rng) {
  const HopperEnv env;
  const ModelParams mu = env.MakeMu(Vector::Constant(1, 0.9));
  EnvState s = env.Reset(mu, rng);
  const Vector zero = Vector::Zero(3);
  double worst = 0.0;
  int active = 0;
  const int steps = static_cast<int>(std::lround(5.0 / kTimeStep));
  for (int t = 0; t < steps; ++t) {
    StepResult r = env.Step(s, zero, mu);
    for (const auto& c : r.contacts) {
      worst = std::max(worst, -c.normal);
      worst = std::max(worst,
                       std::abs(c.tangential) - c.friction * c.normal -
                           1e-9 * std::max(1.0, c.normal));
      active += c.normal > 0.0 ? 1 : 0;
    }
    s = std::move(r.next_state);
  }
  CheckResult res = Make("hopper contact in friction cone", worst, 0.0,
                         fmt::format("{} active contact samples over 5 s",
                                     active));
  res.passed = res.passed && active > 0;
  return res;
}

}  // namespace

std::vector<CheckResult> NumericChecks(std::uint64_t seed) {
  RandomSource root(seed);
  std::vector<CheckResult> out;
  RandomSource r0 = root.Fork(0), r1 = root.Fork(1), r2 = root.Fork(2),
               r3 = root.Fork(3), r4 = root.Fork(4), r5 = root.Fork(5),
               r6 = root.Fork(6);
  out.push_back(NetworkGradientCheck(r0, 0.0));
  out.push_back(NetworkGradientCheck(r1, 0.2));
  out.push_back(SurrogateGradientCheck(r2));
  out.push_back(GaeCheck(r3));
  out.push_back(KlCheck(r4));
  out.push_back(ConjugateGradientCheck(r5));
  out.push_back(FisherCheck(r6));
  return out;
}

std::vector<CheckResult> PhysicsChecks(std::uint64_t seed) {
  RandomSource root(seed);
  std::vector<CheckResult> out;
  {
    const DoublePendulumEnv env;
    Vector q(3), qd(3), rest(3);
    q << 0.0, 0.3, -0.2;
    qd << 0.0, 0.0, 0.0;
    rest << 0.0, 3.14159265358979323846, 0.0;
    out.push_back(EnergyCheck("double pendulum energy conservation",
                              env.Chain(0.3), q, qd, rest));
  }
  {
    const CartPoleSwingUpEnv env;
    Vector q(2), qd(2), rest(2);
    q << 0.0, 2.0;
    qd << 0.5, 0.0;
    rest << 0.0, 3.14159265358979323846;
    out.push_back(EnergyCheck("cart-pole energy conservation",
                              env.Chain(0.5, 0.5), q, qd, rest));
  }
  out.push_back(BallisticCheck());
  RandomSource hopper_rng = root.Fork(10);
  out.push_back(HopperContactCheck(hopper_rng));
  return out;
}

std::vector<CheckResult> RunVerification(std::uint64_t seed) {
  std::vector<CheckResult> out = NumericChecks(seed);
  for (auto& c : PhysicsChecks(seed)) out.push_back(std::move(c));
  return out;
}

}  // namespace uposi
