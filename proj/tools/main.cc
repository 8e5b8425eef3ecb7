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

#include <iostream>
#include <string>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "commands.h"
#include "uposi/config.h"
#include "uposi/envs/registry.h"
#include "uposi/error.h"
#include "uposi/results.h"
#include "uposi/verify.h"

namespace {

using uposi::tools::CommandArgs;

void AddCommon(CLI::App* app, CommandArgs& args, bool needs_task = true) {
  if (needs_task) {
    app->add_option("task", args.task, "Task name")
        ->required()
        ->check(CLI::IsMember(uposi::TaskNames()));
  }
  app->add_option("--config", args.config_file, "JSON config file")
      ->check(CLI::ExistingFile);
  app->add_option("--set", args.overrides,
                  "Config override section.key=value (repeatable)");
  app->add_option("--seed", args.seed, "Random seed");
  app->add_option("--out", args.out_dir, "Output directory");
}

int RunCommand(CommandArgs& args) {
  if (args.out_dir.empty()) {
    std::string leaf = args.command;
    for (char& ch : leaf) {
      if (ch == ' ') ch = '-';
    }
    args.out_dir = uposi::DefaultOutDir() / args.task / leaf;
  }
  const uposi::Manifest manifest = uposi::tools::MakeManifest(args);
  uposi::tools::Execute(manifest, args.out_dir, std::cout);
  std::cout << "wrote " << (args.out_dir / "manifest.json").string() << "\n";
  return 0;
}

int Verify(std::uint64_t seed) {
  int failures = 0;
  for (const auto& c : uposi::RunVerification(seed)) {
    std::cout << fmt::format("[{}] {}: {:.3g} (tolerance {:.3g}) {}\n",
                             c.passed ? "PASS" : "FAIL", c.name, c.value,
                             c.tolerance, c.detail);
    failures += c.passed ? 0 : 1;
  }
  std::cout << (failures == 0 ? "all checks passed\n"
                              : fmt::format("{} check(s) failed\n", failures));
  return failures == 0 ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Universal policy with online system identification"};
  app.require_subcommand(1);
  app.set_version_flag("--version", uposi::CodeVersion());

  CommandArgs train_up;
  train_up.command = "train-up";
  auto* cmd_train_up = app.add_subcommand("train-up", "Train a universal policy");
  AddCommon(cmd_train_up, train_up);
  cmd_train_up->add_flag("--regular", train_up.regular_mode,
                         "Train without the mu input (baseline policy)");

  CommandArgs train_osi;
  train_osi.command = "train-osi";
  auto* cmd_train_osi =
      app.add_subcommand("train-osi", "Train the system-identification network");
  AddCommon(cmd_train_osi, train_osi);
  cmd_train_osi->add_option("--up", train_osi.up, "Universal policy checkpoint")
      ->required()
      ->check(CLI::ExistingFile);
  cmd_train_osi->add_option("--grid", train_osi.grid_points,
                            "Grid points for the per-round evaluation");
  cmd_train_osi->add_option("--n-eval", train_osi.n_eval,
                            "Rollouts per grid point");
  bool no_eval = false;
  cmd_train_osi->add_flag("--no-eval", no_eval, "Skip per-round evaluation");

  auto* cmd_eval = app.add_subcommand("eval", "Evaluation experiments");
  cmd_eval->require_subcommand(1);
  CommandArgs sweep, friction, extrapolate;
  sweep.command = "eval sweep";
  friction.command = "eval friction-track";
  extrapolate.command = "eval extrapolate";
  auto* cmd_sweep = cmd_eval->add_subcommand("sweep", "Performance over a mu grid");
  auto* cmd_friction =
      cmd_eval->add_subcommand("friction-track", "Hopper on a varying-friction track");
  auto* cmd_extrapolate = cmd_eval->add_subcommand(
      "extrapolate", "Cart-pole beyond the training range");
  for (auto [cmd, args] : {std::pair{cmd_sweep, &sweep},
                           std::pair{cmd_friction, &friction},
                           std::pair{cmd_extrapolate, &extrapolate}}) {
    AddCommon(cmd, *args);
    cmd->add_option("--up", args->up, "Universal policy checkpoint")
        ->required()
        ->check(CLI::ExistingFile);
    cmd->add_option("--osi", args->osi, "OSI network")->check(CLI::ExistingFile);
    cmd->add_option("--grid", args->grid_points, "Grid points");
    cmd->add_option("--n-eval", args->n_eval, "Rollouts per grid point");
  }
  cmd_sweep->add_option("--regular", sweep.regular, "Regular policy checkpoint")
      ->check(CLI::ExistingFile);
  cmd_friction->add_option("--fixed", friction.fixed_mu,
                           "Friction fed to the fixed-mu controller");

  std::uint64_t verify_seed = 7;
  auto* cmd_verify = app.add_subcommand("verify", "Run the oracle suite");
  cmd_verify->add_option("--seed", verify_seed, "Random seed");

  std::string manifest_path;
  std::filesystem::path rerun_out;
  auto* cmd_rerun =
      app.add_subcommand("rerun", "Repeat the command recorded in a manifest");
  cmd_rerun->add_option("manifest", manifest_path, "manifest.json")
      ->required()
      ->check(CLI::ExistingFile);
  cmd_rerun->add_option("--out", rerun_out,
                        "Output directory (default: the manifest's directory)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*cmd_train_up) return RunCommand(train_up);
    if (*cmd_train_osi) {
      train_osi.evaluate_osi = !no_eval;
      return RunCommand(train_osi);
    }
    if (*cmd_sweep) return RunCommand(sweep);
    if (*cmd_friction) return RunCommand(friction);
    if (*cmd_extrapolate) return RunCommand(extrapolate);
    if (*cmd_verify) return Verify(verify_seed);
    if (*cmd_rerun) {
      const uposi::Manifest m = uposi::LoadManifest(manifest_path);
      const std::filesystem::path out =
          rerun_out.empty() ? std::filesystem::path(manifest_path).parent_path()
                            : rerun_out;
      uposi::tools::Execute(m, out, std::cout);
      std::cout << "wrote " << (out / "manifest.json").string() << "\n";
      return 0;
    }
  } catch (const uposi::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
