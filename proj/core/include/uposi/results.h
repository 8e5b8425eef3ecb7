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

#ifndef UPOSI_RESULTS_H_
#define UPOSI_RESULTS_H_

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "uposi/envs/environment.h"
#include "uposi/harness.h"
#include "uposi/osi.h"

namespace uposi {

// Shortest text that round-trips the double exactly ("%.17g").
std::string FormatDouble(double x);

// Writes `content` to `path`, creating parent directories. Throws IoError
// naming the path on failure.
void WriteTextFile(const std::filesystem::path& path,
                   const std::string& content);

// Columns: mu_true, mean_perf, std_perf, mean_mu_hat, std_mu_hat, n_eval.
// Multi-dimensional parameters expand into mu_true_0, mu_true_1, ... and
// likewise for the prediction columns. A controller without predictions
// writes nan.
std::string SweepCsv(const SweepResult& sweep, const EnvSpec& spec);

// Wide table with one performance column per controller, rows by grid point.
std::string PerformanceTableCsv(const std::vector<SweepResult>& sweeps,
                                const EnvSpec& spec);

// Columns: controller, mu_vary, mean_distance, std_distance, n_eval.
std::string FrictionDistanceCsv(const FrictionResult& result);

// Columns: time, foot_x, actual, predicted.
std::string FrictionTraceCsv(const FrictionResult& result);

// Record of one command invocation, sufficient to repeat it.
struct Manifest {
  std::string command;  // e.g. "train-up", "eval sweep"
  std::string task;
  std::uint64_t seed = 0;
  nlohmann::json config;  // fully resolved
  nlohmann::json inputs = nlohmann::json::object();  // artifact paths
  std::string version;
  std::vector<std::string> outputs;

  // Hash over everything that determines the outputs.
  std::string Hash() const;
  nlohmann::json ToJson() const;
  static Manifest FromJson(const nlohmann::json& j);
};

std::string CodeVersion();

void WriteManifest(const Manifest& manifest, const std::filesystem::path& path);
Manifest LoadManifest(const std::filesystem::path& path);

}  // namespace uposi

#endif  // UPOSI_RESULTS_H_
