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

#ifndef UPOSI_NETWORK_IO_H_
#define UPOSI_NETWORK_IO_H_

#include <filesystem>
#include <optional>
#include <vector>

#include "uposi/dense_network.h"
#include "uposi/error.h"
#include "uposi/gaussian_policy.h"

namespace uposi {

// Raised when a network file's declared shape disagrees with its payload or
// with the shape the caller expects.
class ShapeMismatchError : public FormatError {
 public:
  using FormatError::FormatError;
};

inline constexpr std::uint32_t kNetworkFormatVersion = 1;

// Binary container, all integers and doubles little-endian:
//
//   char[8]  magic "UPOSINET"
//   u32      format version (kNetworkFormatVersion)
//   u32      kind: 1 = dense network, 2 = Gaussian policy
//   u32      activation tag: 1 = tanh hidden / identity output
//   f64      dropout rate
//   u32      number of layer dims L, then u32[L] layer dims
//   u64      number of parameters P, then f64[P] flat parameters
//   kind 2 only: u32 obs_dim, u32 mu_dim, f64[act_dim] log_std
void SaveNetwork(const DenseNetwork& net, const std::filesystem::path& path);
DenseNetwork LoadNetwork(
    const std::filesystem::path& path,
    const std::optional<std::vector<int>>& expected_dims = std::nullopt);

void SavePolicy(const GaussianPolicy& policy,
                const std::filesystem::path& path);
GaussianPolicy LoadPolicy(const std::filesystem::path& path);

}  // namespace uposi

#endif  // UPOSI_NETWORK_IO_H_
