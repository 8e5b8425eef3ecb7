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

#ifndef UPOSI_TESTS_TEST_SUPPORT_H_
#define UPOSI_TESTS_TEST_SUPPORT_H_

#include <filesystem>
#include <string>

#include "uposi/envs/environment.h"
#include "uposi/osi.h"

namespace uposi::testing {

// One-dimensional linear system x' = x + dt (a u + b mu) with quadratic cost,
// a reward of 1 - x^2 - 0.01 u^2 per step, and termination at |x| > 2.
// Cheap enough for learning smoke tests.
class LqrEnv : public Environment {
 public:
  explicit LqrEnv(int max_steps = 50);
  const EnvSpec& spec() const override { return spec_; }
  EnvState Reset(const ModelParams& mu, RandomSource& rng) const override;
  StepResult Step(const EnvState& state, const Vector& action,
                  const ModelParams& mu) const override;
  Vector Observe(const EnvState& state) const override { return state.q; }

 private:
  EnvSpec spec_;
};

// Every step yields reward 1; the episode never terminates.
class ConstantRewardEnv : public Environment {
 public:
  ConstantRewardEnv();
  const EnvSpec& spec() const override { return spec_; }
  EnvState Reset(const ModelParams& mu, RandomSource& rng) const override;
  StepResult Step(const EnvState& state, const Vector& action,
                  const ModelParams& mu) const override;
  Vector Observe(const EnvState& state) const override { return state.q; }

 private:
  EnvSpec spec_;
};

// Always returns the same normalized parameter vector.
class ConstantEstimator : public MuEstimator {
 public:
  explicit ConstantEstimator(Vector value) : value_(std::move(value)) {}
  Vector Estimate(const HistorySegment&, GroundTruth&) const override {
    return value_;
  }
  Vector Prior(GroundTruth&) const override { return value_; }

 private:
  Vector value_;
};

// Fresh empty directory under the system temp dir.
std::filesystem::path TempDir(const std::string& name);

std::string ReadFile(const std::filesystem::path& path);

}  // namespace uposi::testing

#endif  // UPOSI_TESTS_TEST_SUPPORT_H_
