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

#ifndef QUASIDISK_INVARIANTS_HPP_
#define QUASIDISK_INVARIANTS_HPP_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "quasidisk/arcs.hpp"
#include "quasidisk/core.hpp"
#include "quasidisk/space.hpp"

namespace quasidisk {

// Sampling knobs. Every report echoes the budget it ran with.
struct Budget {
  std::size_t centers = 24;
  int radii_per_octave = 2;
  std::uint64_t seed = 17;
};

// Centres drawn from `subset` by a seeded shuffle of canonical order.
std::vector<PointId> sample_centers(const FiniteMetricSpace& space,
                                    const std::vector<PointId>& subset,
                                    std::size_t count, std::uint64_t seed);

// Geometric radii from lo to hi inclusive, `per_octave` steps per doubling.
std::vector<double> geometric_radii(double lo, double hi, int per_octave);

struct AssouadSample {
  PointId center;
  double radius;
  double ratio;  // covering scale / radius
  std::size_t count;
};

struct AssouadReport {
  ScaleWindow window;
  double q = 0.0;
  double d = 1.0;
  bool refused = false;
  std::string reason;
  std::vector<AssouadSample> samples;
  Budget budget;
};

// Least-squares fit of log N(B(x,r), t r) against log(1/t). Both r and t r
// stay inside the window. D is the smallest constant with N <= D t^-Q on
// every sample.
AssouadReport assouad_estimate(const FiniteMetricSpace& space,
                               const std::vector<PointId>& subset,
                               ScaleWindow window, const Budget& budget = {});

struct AhlforsSample {
  PointId center;
  double radius;
  double ratio;  // mu2(closed ball) / r^2
};

struct RegularityReport {
  ScaleWindow window;
  double q = 0.0;  // Assouad fit, when run together
  double d = 1.0;
  double c_ahlfors = 1.0;
  PointId worst_center = kNoPoint;
  double worst_radius = 0.0;
  double exponent = 2.0;         // slope of log mu2 against log r
  double tail_exponent = 2.0;    // same, over the upper half of the radii
  bool degenerate = false;       // zero-measure ball or exponent drift
  std::optional<double> failure_scale;
  std::string note;
  double proxy_scale = 0.0;
  std::vector<AhlforsSample> table;
  Budget budget;
};

// proxy_scale is used only when the space carries no area weights.
RegularityReport ahlfors_estimate(const FiniteMetricSpace& space,
                                  const std::vector<PointId>& subset,
                                  ScaleWindow window, const Budget& budget = {},
                                  std::optional<double> proxy_scale = std::nullopt);

struct LLCReport {
  ScaleWindow window;
  double lambda1 = 1.0;
  double lambda2 = 1.0;
  PointId witness1_center = kNoPoint;
  PointId witness1_point = kNoPoint;
  double witness1_radius = 0.0;
  PointId witness2_center = kNoPoint;
  PointId witness2_point = kNoPoint;
  double witness2_radius = 0.0;
  std::size_t balls1 = 0;
  std::size_t balls2 = 0;
  Budget budget;
};

// Union-find sweeps outward (first condition) and inward (second condition)
// from each sampled centre over the h-graph. The second condition is tested
// only on balls whose closed h-thickening stays inside U.
LLCReport llc_estimate(const PathMetricSpace& pms, const std::vector<PointId>& u,
                       ScaleWindow window, const Budget& budget = {});

// Smallest lambda for one ball of the first condition; replays a witness.
double llc1_ratio(const PathMetricSpace& pms, PointId center, double r);
// Same for the second condition, over U.
double llc2_ratio(const PathMetricSpace& pms, const std::vector<PointId>& u,
                  PointId center, double r);

struct ThreePointCertificate {
  double lambda = 1.0;
  PointId worst_x = kNoPoint;
  PointId worst_y = kNoPoint;
  double worst_ratio = 0.0;
};

inline constexpr std::size_t kMaxThreePointLoop = 4096;

// Exact over all vertex pairs; arcs are compared by the diameter of their
// vertex sets.
ThreePointCertificate three_point_constant(const FiniteMetricSpace& space,
                                           const std::vector<PointId>& loop);

struct PorositySample {
  PointId y;
  double radius;
  PointId witness;
  double c;
};

struct PorosityReport {
  ScaleWindow window;
  double c_por = 1.0;
  bool porous = true;
  std::string note;
  std::vector<PorositySample> witnesses;
  Budget budget;
};

std::vector<double> porosity_grid();

PorosityReport porosity_constant(const FiniteMetricSpace& space,
                                 const std::vector<PointId>& y,
                                 ScaleWindow window, const Budget& budget = {});

// Reruns the containment B(x, r/C) inside B(y, r) minus Y.
bool porosity_witness_holds(const FiniteMetricSpace& space,
                            const std::vector<char>& in_y, PointId y, double r,
                            PointId x, double c);

}  // namespace quasidisk

#endif  // QUASIDISK_INVARIANTS_HPP_
