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

#include "commands.h"

#include <fstream>
#include <memory>
#include <ostream>

#include <fmt/format.h>

#include "uposi/config.h"
#include "uposi/envs/hopper.h"
#include "uposi/envs/registry.h"
#include "uposi/error.h"
#include "uposi/harness.h"
#include "uposi/network_io.h"
#include "uposi/osi.h"
#include "uposi/trpo.h"

namespace uposi::tools {
namespace {

constexpr std::uint64_t kEvalStream = 0xe7a1;

std::ofstream OpenLog(const std::filesystem::path& path) {
  std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  return out;
}

std::string Input(const Manifest& m, const char* key, bool required) {
  const std::string value = m.inputs.value(key, std::string());
  if (required && value.empty()) {
    throw ConfigError(fmt::format("'{}' needs --{}", m.command, key));
  }
  return value;
}

OsiNetwork LoadOsi(const std::string& path, const EnvSpec& spec) {
  return OsiNetwork(spec, LoadNetwork(path));
}

void TrainUpCommand(const Manifest& m, const RunConfig& config,
                    const Environment& env, const std::filesystem::path& out,
                    std::ostream& log, std::vector<std::string>& outputs) {
  std::ofstream csv = OpenLog(out / "train_log.csv");
  RandomSource rng(m.seed);
  TrainUpOptions options;
  options.log = &csv;
  if (config.trpo.checkpoint_interval > 0) {
    options.checkpoint_dir = out / "checkpoints";
    std::filesystem::create_directories(options.checkpoint_dir);
  }
  options.on_iteration = [&](const IterationLog& row) {
    log << fmt::format("iter {:4d}  samples {:9d}  return {:10.2f}  kl {:.4f}\n",
                       row.iteration, row.samples, row.mean_return,
                       row.mean_kl);
  };
  const GaussianPolicy policy = TrainUp(env, config.trpo, rng, options);
  SavePolicy(policy, out / "policy.bin");
  outputs = {"train_log.csv", "policy.bin"};
}

void TrainOsiCommand(const Manifest& m, const RunConfig& config,
                     const Environment& env, const std::filesystem::path& out,
                     std::ostream& log, std::vector<std::string>& outputs) {
  const GaussianPolicy policy = LoadPolicy(Input(m, "up", true));
  const bool evaluate = m.inputs.value("evaluate_osi", true);
  const std::vector<ModelParams> grid =
      UniformGrid(env, config.eval.grid_points);
  std::ofstream csv = OpenLog(out / "osi_log.csv");
  TrainOsiOptions options;
  options.log = &csv;
  options.checkpoint_dir = out / "rounds";
  std::filesystem::create_directories(options.checkpoint_dir);
  if (evaluate) {
    options.evaluate = [&](int it, const OsiNetwork& osi) {
      RandomSource eval_rng = RandomSource(m.seed).Fork(kEvalStream);
      const SweepResult sweep =
          SweepMu(Controller::UpOsi(policy, osi), env, grid,
                  config.eval.n_eval, eval_rng, config.eval.num_workers);
      WriteTextFile(out / fmt::format("rounds/sweep_round_{:02d}.csv", it),
                    SweepCsv(sweep, env.spec()));
      return sweep.GridMean();
    };
  }
  options.on_iteration = [&](const OsiIterationLog& row) {
    log << fmt::format(
        "round {}  buffer {:8d}  train mse {:.5f}  held-out mse {:.5f}  "
        "up-osi {:.4f}\n",
        row.iteration, row.buffer_size, row.train_mse, row.heldout_mse,
        row.up_osi_reward);
  };
  RandomSource rng(m.seed);
  const OsiNetwork osi = TrainOsi(policy, env, config.osi, rng, options);
  SaveNetwork(osi.net(), out / "osi.bin");
  outputs = {"osi_log.csv", "osi.bin"};
  for (int it = 0; it < config.osi.iterations; ++it) {
    for (const char* kind : {"osi_round_{:02d}.bin", "sweep_round_{:02d}.csv"}) {
      const std::string name =
          "rounds/" + fmt::format(fmt::runtime(kind), it);
      if (std::filesystem::exists(out / name)) outputs.push_back(name);
    }
  }
}

void SweepCommand(const Manifest& m, const RunConfig& config,
                  const Environment& env, const std::filesystem::path& out,
                  std::ostream& log, std::vector<std::string>& outputs) {
  const GaussianPolicy up = LoadPolicy(Input(m, "up", true));
  std::optional<OsiNetwork> osi;
  std::optional<GaussianPolicy> regular;
  if (const auto p = Input(m, "osi", false); !p.empty()) {
    osi = LoadOsi(p, env.spec());
  }
  if (const auto p = Input(m, "regular", false); !p.empty()) {
    regular = LoadPolicy(p);
  }
  std::vector<Controller> controllers = {Controller::UpTrue(up)};
  if (osi) controllers.push_back(Controller::UpOsi(up, *osi));
  if (regular) controllers.push_back(Controller::Regular(*regular));

  const std::vector<ModelParams> grid =
      UniformGrid(env, config.eval.grid_points);
  std::vector<SweepResult> sweeps;
  for (const Controller& c : controllers) {
    RandomSource rng(m.seed);
    sweeps.push_back(SweepMu(c, env, grid, config.eval.n_eval, rng,
                             config.eval.num_workers));
    log << fmt::format("{:9s} grid mean {:.4f}  fraction >= 1: {:.2f}\n",
                       c.name(), sweeps.back().GridMean(),
                       sweeps.back().FractionAtLeast(1.0));
    const std::string name = "sweep_" + c.name() + ".csv";
    WriteTextFile(out / name, SweepCsv(sweeps.back(), env.spec()));
    outputs.push_back(name);
  }
  WriteTextFile(out / "performance_vs_mu.csv",
                PerformanceTableCsv(sweeps, env.spec()));
  outputs.push_back("performance_vs_mu.csv");
}

void FrictionCommand(const Manifest& m, const RunConfig& config,
                     const Environment& env, const std::filesystem::path& out,
                     std::ostream& log, std::vector<std::string>& outputs) {
  const auto* hopper = dynamic_cast<const HopperEnv*>(&env);
  if (hopper == nullptr) {
    throw ConfigError("friction-track needs the hopper task");
  }
  const GaussianPolicy up = LoadPolicy(Input(m, "up", true));
  const OsiNetwork osi = LoadOsi(Input(m, "osi", true), env.spec());
  const double fixed = m.inputs.value("fixed_mu", config.eval.friction.track.base);
  const std::vector<Controller> controllers = {
      Controller::UpOsi(up, osi),
      Controller::UpFixed(up, env.MakeMu(Vector::Constant(1, fixed))),
      Controller::UpTrue(up)};
  RandomSource rng(m.seed);
  const FrictionResult result =
      VaryingFrictionExperiment(controllers, *hopper, config.eval.friction, rng);
  for (const auto& c : result.curves) {
    for (size_t k = 0; k < c.varied.size(); ++k) {
      log << fmt::format("{:9s} mu_vary {:.2f}  distance {:.3f} +- {:.3f}\n",
                         c.controller, c.varied[k], c.mean_distance[k],
                         c.std_distance[k]);
    }
  }
  WriteTextFile(out / "friction_distance.csv", FrictionDistanceCsv(result));
  WriteTextFile(out / "friction_trace.csv", FrictionTraceCsv(result));
  outputs = {"friction_distance.csv", "friction_trace.csv"};
}

void ExtrapolateCommand(const Manifest& m, const RunConfig& config,
                        const Environment& env,
                        const std::filesystem::path& out, std::ostream& log,
                        std::vector<std::string>& outputs) {
  const GaussianPolicy up = LoadPolicy(Input(m, "up", true));
  const OsiNetwork osi = LoadOsi(Input(m, "osi", true), env.spec());
  const std::vector<Controller> controllers = {Controller::UpTrue(up),
                                               Controller::UpOsi(up, osi)};
  RandomSource rng(m.seed);
  const ExtrapolationResult result = ExtrapolationExperiment(
      controllers, env, config.eval.extrapolation_points, config.eval.n_eval,
      rng, config.eval.num_workers);
  for (const auto& s : result.sweeps) {
    log << fmt::format("{:9s} grid mean {:.4f}\n", s.controller,
                       s.GridMean());
    const std::string name = "extrapolation_" + s.controller + ".csv";
    WriteTextFile(out / name, SweepCsv(s, env.spec()));
    outputs.push_back(name);
  }
  WriteTextFile(out / "extrapolation_performance.csv",
                PerformanceTableCsv(result.sweeps, env.spec()));
  outputs.push_back("extrapolation_performance.csv");
}

}  // namespace

Manifest MakeManifest(const CommandArgs& args) {
  std::vector<std::string> overrides = args.overrides;
  if (args.regular_mode) overrides.push_back("trpo.condition_on_mu=false");
  if (args.grid_points) {
    overrides.push_back(fmt::format("eval.grid_points={}", *args.grid_points));
  }
  if (args.n_eval) {
    overrides.push_back(fmt::format("eval.n_eval={}", *args.n_eval));
  }
  const RunConfig config = ResolveConfig(args.config_file, overrides);
  Manifest m;
  m.command = args.command;
  m.task = args.task;
  m.seed = args.seed;
  m.config = config.ToJson();
  m.version = CodeVersion();
  if (!args.up.empty()) m.inputs["up"] = args.up;
  if (!args.osi.empty()) m.inputs["osi"] = args.osi;
  if (!args.regular.empty()) m.inputs["regular"] = args.regular;
  if (args.fixed_mu) m.inputs["fixed_mu"] = *args.fixed_mu;
  if (args.command == "train-osi") m.inputs["evaluate_osi"] = args.evaluate_osi;
  return m;
}

void Execute(const Manifest& manifest, const std::filesystem::path& out_dir,
             std::ostream& log) {
  const RunConfig config = RunConfig::FromJson(manifest.config);
  const std::unique_ptr<Environment> env =
      MakeEnvironment(manifest.task, config.env);
  std::filesystem::create_directories(out_dir);
  std::vector<std::string> outputs;
  const std::string& c = manifest.command;
  if (c == "train-up") {
    TrainUpCommand(manifest, config, *env, out_dir, log, outputs);
  } else if (c == "train-osi") {
    TrainOsiCommand(manifest, config, *env, out_dir, log, outputs);
  } else if (c == "eval sweep") {
    SweepCommand(manifest, config, *env, out_dir, log, outputs);
  } else if (c == "eval friction-track") {
    FrictionCommand(manifest, config, *env, out_dir, log, outputs);
  } else if (c == "eval extrapolate") {
    ExtrapolateCommand(manifest, config, *env, out_dir, log, outputs);
  } else {
    throw ConfigError("unknown command '" + c + "'");
  }
  Manifest done = manifest;
  done.outputs = outputs;
  WriteManifest(done, out_dir / "manifest.json");
}

}  // namespace uposi::tools
