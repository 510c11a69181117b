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

#ifndef QUASIDISK_ARCS_HPP_
#define QUASIDISK_ARCS_HPP_

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "quasidisk/chains.hpp"
#include "quasidisk/core.hpp"
#include "quasidisk/space.hpp"

namespace quasidisk {

struct DiscreteArc {
  std::vector<PointId> points;
  double length = 0.0;
};

DiscreteArc make_arc(const FiniteMetricSpace& space, std::vector<PointId> points);
bool is_injective(const std::vector<PointId>& points);

struct ExtractedArc {
  DiscreteArc arc;
  // Segment each output point was taken from; non-decreasing.
  std::vector<std::size_t> segment_of;
  std::vector<std::size_t> used_segments;  // i_0 < i_1 < ... < i_m
};

// Pulls an arc out of a concatenation of injective segments whose endpoints
// match. At each step jump to the last segment that meets the remaining part
// of the current one, entering it at its last meeting point.
ExtractedArc extract_arc(const FiniteMetricSpace& space,
                         const std::vector<std::vector<PointId>>& segments);

struct QuasiarcCertificate {
  double eps = 0.0;
  double m = 1.0;
  PointId worst_u = kNoPoint;
  PointId worst_v = kNoPoint;
  double worst_ratio = 0.0;  // diam(alpha[u,v]) / eps at the worst pair
};

// Exact scan of all pairs within eps. O(n^2) time, O(n) memory.
QuasiarcCertificate certify_quasiarc(const FiniteMetricSpace& space,
                                     const std::vector<PointId>& arc, double eps);

// diam(arc[i..j]) by direct scan.
double subarc_diameter(const FiniteMetricSpace& space,
                       const std::vector<PointId>& arc, std::size_t i,
                       std::size_t j);

struct QuasiarcConstants {
  double turning = 1.0;           // lambda
  double assouad_constant = 1.0;  // D
};

// 2 lambda + (4D)^(1/2Q) (4 lambda)^(1/2)
double containment_factor(double turning, double assouad_constant, double q);

struct QuasiarcResult {
  DiscreteArc arc;
  QuasiarcCertificate certificate;
  ScoredChain chain;
  double containment_factor = 0.0;  // N
  double reach = 0.0;               // max d(x, p) over the arc
  Diagnostics diagnostics;
};

QuasiarcResult build_quasiarc(const PathMetricSpace& pms, PointId x, PointId y,
                              double eps, double q,
                              const QuasiarcConstants& constants,
                              const std::vector<char>* allowed = nullptr);

struct ScaleWindow {
  double lo = 0.0;
  double hi = kInf;
};

// Default window [2 spacing, diam / 4].
ScaleWindow default_window(const FiniteMetricSpace& space);

struct TurningOptions {
  std::size_t centers = 48;
  std::uint64_t seed = 7;
  bool refine = true;
};

struct TurningReport {
  double lambda = 1.0;  // lower bound on the bounded-turning constant
  double upper = 1.0;   // diameter of the realising path over d(x, y)
  PointId worst_x = kNoPoint;
  PointId worst_y = kNoPoint;
  std::size_t pairs = 0;
  std::size_t disconnected = 0;
  ScaleWindow window;
};

// Minimax search from each sampled centre x: the smallest rho such that y is
// reachable from x inside the closed ball B(x, rho). Any continuum through x
// and y has diameter at least rho, so rho / d(x, y) bounds lambda from below.
TurningReport bounded_turning_constant(const PathMetricSpace& pms,
                                       const std::vector<PointId>& subset,
                                       ScaleWindow window,
                                       const TurningOptions& options = {});

}  // namespace quasidisk

#endif  // QUASIDISK_ARCS_HPP_
