// Copyright 2026 The Quasidisk Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef QUASIDISK_CORE_HPP_
#define QUASIDISK_CORE_HPP_

#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

namespace quasidisk {

using PointId = std::uint32_t;

inline constexpr double kInf = std::numeric_limits<double>::infinity();
inline constexpr PointId kNoPoint = std::numeric_limits<PointId>::max();

struct Vec2 {
  double u = 0.0;
  double v = 0.0;
};

// Raised for malformed input: asymmetric matrices, bad rows, bad parameters.
class InvalidInput : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Raised when two points are not joined at the requested scale.
class Disconnected : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Raised when the sample is too coarse for the requested construction.
class ResolutionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Raised when a stage refuses to run (scale guard, missing chart).
class Refusal : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A falsified hypothesis or a bound that failed with measured constants.
// These are reported, not thrown.
struct Diagnostic {
  std::string check;
  std::string detail;
  double measured = 0.0;
  double bound = 0.0;
};

using Diagnostics = std::vector<Diagnostic>;

}  // namespace quasidisk

#endif  // QUASIDISK_CORE_HPP_
