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

#ifndef QUASIDISK_CHAINS_HPP_
#define QUASIDISK_CHAINS_HPP_

#include <optional>
#include <utility>
#include <vector>

#include "quasidisk/core.hpp"
#include "quasidisk/space.hpp"

namespace quasidisk {

struct DiscreteChain {
  double eps = 0.0;
  std::vector<PointId> points;

  std::size_t cardinality() const { return points.size(); }
};

// Constants of the hypotheses the deviation bound consumes.
struct ChainConstants {
  double assouad_constant = 1.0;  // D
  double turning = 1.0;           // lambda
};

struct ScoredChain {
  DiscreteChain chain;
  std::vector<PointId> reference;
  double score = 0.0;
  double exponent = 0.0;          // 2Q
  double max_deviation = 0.0;     // H
  std::optional<double> deviation_bound;
  std::optional<std::pair<double, double>> q_window;
  Diagnostics diagnostics;
};

double distance_to_set(const FiniteMetricSpace& space, PointId p,
                       const std::vector<PointId>& set);

// Minimum cardinality eps-chain by breadth-first search on the closed
// eps-neighbourhood graph. Throws Disconnected.
DiscreteChain minimal_chain(const FiniteMetricSpace& space, PointId x, PointId y,
                            double eps);

// Sum over chain points of 1 + (dist(w, reference) / eps)^(2Q), left to right.
double score(const FiniteMetricSpace& space, const std::vector<PointId>& chain,
             const std::vector<PointId>& reference, double eps, double q);

// Exact minimiser of the score over eps-chains from x to y.
ScoredChain score_minimizing_chain(
    const FiniteMetricSpace& space, PointId x, PointId y,
    const std::vector<PointId>& reference, double eps, double q,
    std::optional<ChainConstants> constants = std::nullopt,
    const std::vector<char>* allowed = nullptr);

// (4D)^(1/2Q) (4 lambda r eps)^(1/2)
double deviation_bound(double assouad_constant, double turning, double q,
                       double r, double eps);

}  // namespace quasidisk

#endif  // QUASIDISK_CHAINS_HPP_
