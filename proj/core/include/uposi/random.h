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

#ifndef UPOSI_RANDOM_H_
#define UPOSI_RANDOM_H_

#include <cstdint>
#include <random>

namespace uposi {

// Seeded random stream. Identical seed and identical call sequence give
// identical outputs. Independent streams are derived with Fork() so that
// each rollout or worker owns its own generator and never shares state.
class RandomSource {
 public:
  explicit RandomSource(std::uint64_t seed = 0);

  // Child stream keyed by (this stream's seed, key). Does not advance this
  // stream, so forking is order-independent.
  RandomSource Fork(std::uint64_t key) const;

  std::uint64_t seed() const { return seed_; }

  double Uniform(double low, double high);
  double Normal();
  double Normal(double mean, double stddev);
  bool Bernoulli(double p);
  // Uniform integer in [0, n).
  std::uint64_t Index(std::uint64_t n);

  std::mt19937_64& engine() { return engine_; }

 private:
  std::uint64_t seed_;
  std::mt19937_64 engine_;
  std::normal_distribution<double> normal_;
};

// SplitMix64 finalizer; used for seed derivation.
std::uint64_t MixSeed(std::uint64_t x);

}  // namespace uposi

#endif  // UPOSI_RANDOM_H_
