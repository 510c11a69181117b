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

#ifndef QUASIDISK_WINDING_HPP_
#define QUASIDISK_WINDING_HPP_

#include <optional>
#include <vector>

#include "quasidisk/core.hpp"
#include "quasidisk/space.hpp"

namespace quasidisk {

struct WindingResult {
  int index = 0;
  double angle_sum = 0.0;  // radians
  double residual = 0.0;   // |angle_sum / 2 pi - index|
};

inline constexpr double kWindingResidual = 0.01;

// Sum of signed turning angles seen from z. Throws ResolutionError when an
// edge subtends an angle of pi or more, or the residual exceeds 0.01, and
// InvalidInput when z is a vertex.
WindingResult winding_angle_sum(const std::vector<Vec2>& polygon, Vec2 z);

// Signed crossings of the upward ray from z; exact orientation tests, no
// angle precondition. Returns nullopt when z lies on an edge.
std::optional<int> winding_crossings(const std::vector<Vec2>& polygon, Vec2 z);

// Index of a point loop about z in the chart; angle sum cross-checked against
// the crossing count. Requires a chart.
int winding_number(const FiniteMetricSpace& space,
                   const std::vector<PointId>& loop, Vec2 z);

std::vector<Vec2> chart_polygon(const FiniteMetricSpace& space,
                                const std::vector<PointId>& loop);

struct ClosenessReport {
  bool hypotheses_hold = true;
  std::size_t violating_index = 0;  // first i whose check failed
  double max_pair_distance = 0.0;
  double max_segment_diameter = 0.0;
  double guard = 0.0;               // 2 Lambda delta (Lambda + 1)
  std::vector<PointId> checked;     // query points outside the guard tube
  std::vector<PointId> excluded;    // query points inside it
  std::vector<PointId> mismatched;  // checked points with unequal index
};

// alpha_params[i] and beta_params[i] are vertex positions on each loop,
// cyclically increasing. On success every query point farther than the guard
// from beta must see the same index from both loops.
ClosenessReport certify_loop_closeness(const FiniteMetricSpace& space,
                                       const std::vector<PointId>& alpha,
                                       const std::vector<PointId>& beta,
                                       const std::vector<std::size_t>& alpha_params,
                                       const std::vector<std::size_t>& beta_params,
                                       double delta, double lambda,
                                       const std::vector<PointId>& queries);

}  // namespace quasidisk

#endif  // QUASIDISK_WINDING_HPP_
