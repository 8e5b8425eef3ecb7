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


#include <string>

#include <benchmark/benchmark.h>

#include "uposi/dense_network.h"
#include "uposi/envs/registry.h"
#include "uposi/harness.h"
#include "uposi/history.h"
#include "uposi/osi.h"
#include "uposi/random.h"
#include "uposi/trpo.h"

namespace uposi {
namespace {

DenseNetwork PolicySizedNet() {
  DenseNetwork net({12, 64, 64, 1});
  RandomSource rng(1);
  net.Initialize(rng);
  return net;
}

void BM_ForwardBatch(benchmark::State& state) {
  const DenseNetwork net = PolicySizedNet();
  RandomSource rng(2);
  Matrix x(12, state.range(0));
  for (Eigen::Index i = 0; i < x.size(); ++i) x.data()[i] = rng.Normal();
  for (auto _ : state) benchmark::DoNotOptimize(net.ForwardBatch(x));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_ForwardBatch)->Arg(1)->Arg(256)->Arg(4096);

void BM_Backward(benchmark::State& state) {
  const DenseNetwork net = PolicySizedNet();
  RandomSource rng(3);
  Matrix x(12, state.range(0));
  for (Eigen::Index i = 0; i < x.size(); ++i) x.data()[i] = rng.Normal();
  ForwardTape tape;
  net.ForwardBatch(x, Mode::kEval, nullptr, &tape);
  const Matrix g = Matrix::Ones(1, state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(net.Backward(tape, g));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_Backward)->Arg(256)->Arg(4096);

void BM_FisherVectorProduct(benchmark::State& state) {
  const auto env = MakeEnvironment("dpend");
  TrpoConfig config;
  config.samples_per_iteration = static_cast<int>(state.range(0));
  RandomSource rng(4);
  const GaussianPolicy policy = MakePolicy(*env, config, rng);
  const auto rollouts = CollectBatch(policy, *env, config, rng);
  int n = 0;
  for (const auto& r : rollouts) n += r.size();
  const PolicyBatch batch =
      MakePolicyBatch(policy, rollouts, Vector::Ones(n));
  Vector v(policy.GetParams().size());
  for (Eigen::Index i = 0; i < v.size(); ++i) v[i] = rng.Normal();
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        FisherVectorProduct(policy, batch, v, config.cg_damping));
  }
  state.SetItemsProcessed(state.iterations() * batch.size());
}
BENCHMARK(BM_FisherVectorProduct)->Arg(5000)->Unit(benchmark::kMillisecond);

void BM_EnvStep(benchmark::State& state, const std::string& task) {
  const auto env = MakeEnvironment(task);
  RandomSource rng(5);
  const ModelParams mu = env->SampleMu(rng);
  const EnvState start = env->Reset(mu, rng);
  EnvState s = start;
  const Vector a = Vector::Zero(env->spec().act_dim);
  for (auto _ : state) {
    StepResult r = env->Step(s, a, mu);
    s = r.terminated ? start : std::move(r.next_state);
    benchmark::DoNotOptimize(s);
  }
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK_CAPTURE(BM_EnvStep, dpend, std::string("dpend"));
BENCHMARK_CAPTURE(BM_EnvStep, cartpole, std::string("cartpole"));
BENCHMARK_CAPTURE(BM_EnvStep, arm, std::string("arm"));
BENCHMARK_CAPTURE(BM_EnvStep, hopper, std::string("hopper"));

void BM_UpOsiRollout(benchmark::State& state) {
  const auto env = MakeEnvironment("dpend");
  TrpoConfig config;
  RandomSource rng(6);
  const GaussianPolicy policy = MakePolicy(*env, config, rng);
  OsiNetwork osi(env->spec(), OsiConfig().hidden, 0.0);
  osi.net().Initialize(rng);
  const ModelParams mu = env->SampleMu(rng);
  RunOptions options;
  options.max_steps = 1000;
  long steps = 0;
  for (auto _ : state) {
    RandomSource run_rng(7);
    const RunResult r =
        RunController(Controller::UpOsi(policy, osi), *env, mu, run_rng,
                      options);
    steps += r.steps;
  }
  state.SetItemsProcessed(steps);
}
BENCHMARK(BM_UpOsiRollout)->Unit(benchmark::kMillisecond);

}  // namespace
}  // namespace uposi

BENCHMARK_MAIN();
