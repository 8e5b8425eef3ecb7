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

#include "uposi/results.h"

#include <fstream>

#include <fmt/format.h>

#include "uposi/config.h"
#include "uposi/error.h"

#ifndef UPOSI_VERSION
#define UPOSI_VERSION "unknown"
#endif

namespace uposi {

std::string FormatDouble(double x) { return fmt::format("{:.17g}", x); }

void WriteTextFile(const std::filesystem::path& path,
                   const std::string& content) {
  std::error_code ec;
  if (path.has_parent_path()) {
    std::filesystem::create_directories(path.parent_path(), ec);
    if (ec) {
      throw IoError("cannot create directory " +
                    path.parent_path().string() + ": " + ec.message());
    }
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out << content;
  out.close();
  if (!out) throw IoError("failed writing " + path.string());
}

namespace {

std::vector<std::string> ColumnNames(const std::string& base, int dim) {
  if (dim == 1) return {base};
  std::vector<std::string> names;
  for (int k = 0; k < dim; ++k) names.push_back(fmt::format("{}_{}", base, k));
  return names;
}

void AppendValues(std::string& row, const Vector& v, int dim) {
  for (int k = 0; k < dim; ++k) {
    row += ',';
    row += k < v.size() ? FormatDouble(v[k]) : "nan";
  }
}

std::string Join(const std::vector<std::string>& parts) {
  std::string out;
  for (size_t i = 0; i < parts.size(); ++i) {
    if (i > 0) out += ',';
    out += parts[i];
  }
  return out;
}

}  // namespace

std::string SweepCsv(const SweepResult& sweep, const EnvSpec& spec) {
  const int mu_dim = spec.sampled_mu_dim;
  const int hat_dim = spec.mu_dim;
  std::vector<std::string> header = ColumnNames("mu_true", mu_dim);
  header.push_back("mean_perf");
  header.push_back("std_perf");
  for (auto& n : ColumnNames("mean_mu_hat", hat_dim)) header.push_back(n);
  for (auto& n : ColumnNames("std_mu_hat", hat_dim)) header.push_back(n);
  header.push_back("n_eval");
  std::string out = Join(header) + "\n";
  for (const auto& p : sweep.points) {
    std::string row;
    for (int k = 0; k < mu_dim; ++k) {
      if (k > 0) row += ',';
      row += FormatDouble(p.mu[k]);
    }
    row += ',' + FormatDouble(p.mean_perf) + ',' + FormatDouble(p.std_perf);
    AppendValues(row, p.mean_mu_hat, hat_dim);
    AppendValues(row, p.std_mu_hat, hat_dim);
    row += fmt::format(",{}\n", p.n_eval);
    out += row;
  }
  return out;
}

std::string PerformanceTableCsv(const std::vector<SweepResult>& sweeps,
                                const EnvSpec& spec) {
  if (sweeps.empty()) return "";
  const int mu_dim = spec.sampled_mu_dim;
  std::vector<std::string> header = ColumnNames("mu_true", mu_dim);
  for (const auto& s : sweeps) {
    header.push_back(s.controller + "_mean");
    header.push_back(s.controller + "_std");
  }
  std::string out = Join(header) + "\n";
  const size_t rows = sweeps[0].points.size();
  for (const auto& s : sweeps) {
    if (s.points.size() != rows) {
      throw DimensionError("sweeps cover different grids");
    }
  }
  for (size_t i = 0; i < rows; ++i) {
    std::string row;
    for (int k = 0; k < mu_dim; ++k) {
      if (k > 0) row += ',';
      row += FormatDouble(sweeps[0].points[i].mu[k]);
    }
    for (const auto& s : sweeps) {
      row += ',' + FormatDouble(s.points[i].mean_perf) + ',' +
             FormatDouble(s.points[i].std_perf);
    }
    out += row + "\n";
  }
  return out;
}

std::string FrictionDistanceCsv(const FrictionResult& result) {
  std::string out = "controller,mu_vary,mean_distance,std_distance,n_eval\n";
  for (const auto& c : result.curves) {
    for (size_t k = 0; k < c.varied.size(); ++k) {
      out += fmt::format("{},{},{},{},{}\n", c.controller,
                         FormatDouble(c.varied[k]),
                         FormatDouble(c.mean_distance[k]),
                         FormatDouble(c.std_distance[k]),
                         c.distances[k].size());
    }
  }
  return out;
}

std::string FrictionTraceCsv(const FrictionResult& result) {
  std::string out = "time,foot_x,actual,predicted\n";
  for (const auto& p : result.trace) {
    out += fmt::format("{},{},{},{}\n", FormatDouble(p.time),
                       FormatDouble(p.foot_x), FormatDouble(p.actual),
                       FormatDouble(p.predicted));
  }
  return out;
}

// ---------------------------------------------------------------------------

std::string CodeVersion() { return UPOSI_VERSION; }

std::string Manifest::Hash() const {
  const nlohmann::json key = {{"command", command}, {"task", task},
                              {"seed", seed},       {"config", config},
                              {"inputs", inputs},   {"version", version}};
  return JsonHash(key);
}

nlohmann::json Manifest::ToJson() const {
  return {{"command", command}, {"task", task},       {"seed", seed},
          {"config", config},   {"inputs", inputs},   {"version", version},
          {"outputs", outputs}, {"config_hash", JsonHash(config)},
          {"manifest_hash", Hash()}};
}

Manifest Manifest::FromJson(const nlohmann::json& j) {
  try {
    Manifest m;
    m.command = j.at("command").get<std::string>();
    m.task = j.at("task").get<std::string>();
    m.seed = j.at("seed").get<std::uint64_t>();
    m.config = j.at("config");
    m.inputs = j.value("inputs", nlohmann::json::object());
    m.version = j.value("version", std::string());
    m.outputs = j.value("outputs", std::vector<std::string>{});
    return m;
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("malformed manifest: ") + e.what());
  }
}

void WriteManifest(const Manifest& manifest,
                   const std::filesystem::path& path) {
  WriteTextFile(path, manifest.ToJson().dump(2) + "\n");
}

Manifest LoadManifest(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open manifest " + path.string());
  nlohmann::json j =
      nlohmann::json::parse(in, nullptr, /*allow_exceptions=*/false);
  if (j.is_discarded()) {
    throw FormatError("manifest " + path.string() + " is not valid JSON");
  }
  return Manifest::FromJson(j);
}

}  // namespace uposi
