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

#include "uposi/random.h"

namespace uposi {

std::uint64_t MixSeed(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

RandomSource::RandomSource(std::uint64_t seed)
    : seed_(seed), engine_(MixSeed(seed)) {}

RandomSource RandomSource::Fork(std::uint64_t key) const {
  return RandomSource(MixSeed(seed_ ^ MixSeed(key + 0x632be59bd9b4e019ULL)));
}

double RandomSource::Uniform(double low, double high) {
  return std::uniform_real_distribution<double>(low, high)(engine_);
}

double RandomSource::Normal() { return normal_(engine_); }

double RandomSource::Normal(double mean, double stddev) {
  return mean + stddev * normal_(engine_);
}

bool RandomSource::Bernoulli(double p) {
  return std::uniform_real_distribution<double>(0.0, 1.0)(engine_) < p;
}

std::uint64_t RandomSource::Index(std::uint64_t n) {
  return std::uniform_int_distribution<std::uint64_t>(0, n - 1)(engine_);
}

}  // namespace uposi
