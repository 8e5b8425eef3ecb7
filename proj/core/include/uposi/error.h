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

#ifndef UPOSI_ERROR_H_
#define UPOSI_ERROR_H_

#include <stdexcept>
#include <string>

namespace uposi {

// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Invalid or inconsistent configuration values.
class ConfigError : public Error {
 public:
  using Error::Error;
};

// Vector or matrix dimensions that do not agree with a declared shape.
class DimensionError : public Error {
 public:
  using Error::Error;
};

// Non-finite values where finite ones are required.
class NumericError : public Error {
 public:
  using Error::Error;
};

// Malformed, truncated or incompatible files.
class FormatError : public Error {
 public:
  using Error::Error;
};

// File system failures; the message carries the offending path.
class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace uposi

#endif  // UPOSI_ERROR_H_
