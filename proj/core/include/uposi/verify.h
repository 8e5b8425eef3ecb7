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

#ifndef UPOSI_VERIFY_H_
#define UPOSI_VERIFY_H_

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace uposi {

struct CheckResult {
  std::string name;
  bool passed = false;
  // Measured error or statistic, compared against `tolerance`.
  double value = 0.0;
  double tolerance = 0.0;
  std::string detail;
};

// Numeric oracles: network gradients against central differences, GAE
// against the nested-sum definition, diagonal-Gaussian KL against the closed
// form, conjugate gradient against a direct solve, and the Fisher-vector
// product against a finite-difference KL Hessian.
std::vector<CheckResult> NumericChecks(std::uint64_t seed = 7);

// Physics oracles: energy conservation of the passive double pendulum and
// cart-pole, ballistic apex of the released block, and hopper contact forces
// inside the friction cone during a settle test.
std::vector<CheckResult> PhysicsChecks(std::uint64_t seed = 7);

// Both suites, in order.
std::vector<CheckResult> RunVerification(std::uint64_t seed = 7);

}  // namespace uposi

#endif  // UPOSI_VERIFY_H_
