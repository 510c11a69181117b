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

#ifndef QUASIDISK_COAREA_HPP_
#define QUASIDISK_COAREA_HPP_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "quasidisk/arcs.hpp"
#include "quasidisk/core.hpp"
#include "quasidisk/invariants.hpp"
#include "quasidisk/space.hpp"

namespace quasidisk {

// Bands of the distance to a base set E. Band j (1-based) is centred at
// t_j = (j - 1/2) w and holds the points of X \ E with dist in [t_j - w/2,
// t_j + w/2). The outside set of level j is {dist >= t_j + w/2}.
struct LevelSetDecomposition {
  std::vector<PointId> base;
  double band = 0.0;
  double t_max = 0.0;
  std::vector<double> dist;    // dist(p, E); kInf beyond t_max + band
  std::vector<double> levels;  // band centres
  std::vector<std::vector<PointId>> bands;
  std::vector<double> band_length;  // mu1 proxy at eps = band
  // Per level: h-graph component label of each outside point, kNoPoint for
  // points inside E_t; and the component count.
  std::vector<std::vector<std::uint32_t>> outside_label;
  std::vector<std::size_t> outside_count;

  std::size_t level_count() const { return levels.size(); }
  // Points with dist < t_j + w/2, E included.
  std::vector<PointId> sublevel(std::size_t j) const;
};

// band defaults to 2 spacing. Throws InvalidInput when E is empty or the band
// is narrower than the sample spacing.
LevelSetDecomposition level_sets(const PathMetricSpace& pms,
                                 const std::vector<PointId>& base, double t_max,
                                 double band = 0.0);

struct CoareaCheck {
  double lhs = 0.0;  // sum of mu1(L_t) w
  double rhs = 0.0;  // mu2(E_T u L_T)
  double ratio = 0.0;
};

// Throws Refusal when the right side vanishes.
CoareaCheck coarea_check(const FiniteMetricSpace& space,
                         const LevelSetDecomposition& decomposition);

struct OmegaCalibration {
  double omega = 0.0;  // max ratio
  double band = 0.0;
  double t_max = 0.0;
  std::vector<double> ratios;
  std::vector<std::pair<PointId, PointId>> continua;  // geodesic endpoints
};

// Base continua are h-graph geodesics between seeded random point pairs.
// t_max defaults to diam / 8.
OmegaCalibration calibrate_omega(const PathMetricSpace& pms, std::size_t count = 5,
                                 std::uint64_t seed = 3, double band = 0.0,
                                 double t_max = 0.0);

struct GoodLevel {
  double threshold = 0.0;  // 8 C omega N^2 s r
  double t_range = 0.0;    // r / s
  bool floored = false;    // r / s below the first band centre
  std::vector<std::size_t> considered;
  std::vector<std::size_t> qualifying;  // by increasing mu1, then level
  double fraction = 0.0;
  std::optional<std::size_t> best;
  double t0 = 0.0;
  Diagnostics diagnostics;
};

// Requires s > 8N. Besides the threshold scan, checks the 2-regularity lower
// bound mu2(E_T) >= T^2 / C on the decomposition.
GoodLevel good_level_search(const FiniteMetricSpace& space,
                            const LevelSetDecomposition& decomposition, double r,
                            double s, double c, double n, double omega);

struct QuasiconvexConstants {
  double c = 1.0;       // Ahlfors
  double lambda = 1.0;  // LLC surrogate for linear local contractibility
  double m = 1.0;       // quasiarc
  double n = 1.0;       // quasiarc containment
  double omega = 1.0;   // co-area
  double q = 2.0;       // Assouad exponent for the chain score
  double assouad_constant = 1.0;
  double turning = 1.0;
};

struct ConstantsEstimate {
  QuasiconvexConstants constants;
  AssouadReport assouad;
  RegularityReport regularity;
  LLCReport llc;
  TurningReport turning;
  OmegaCalibration omega;
  std::size_t quasiarcs = 0;  // arcs certified for M
  std::string caveat;
};

ConstantsEstimate estimate_constants(const PathMetricSpace& pms, ScaleWindow window,
                                     const Budget& budget = {});

struct QuasiconvexOptions {
  double band = 0.0;  // 0 means 2 spacing
};

struct BandCheck {
  std::size_t depth = 0;
  PointId from = kNoPoint;
  PointId to = kNoPoint;
  double t0 = 0.0;
  double mu1 = 0.0;
  double threshold = 0.0;
  bool connected = false;
  bool contained = false;     // every path point inside the band
  bool same_component = false;  // x and y share an outside component
};

struct QuasiconvexPath {
  DiscreteArc arc;
  double ratio = 0.0;  // length / d(x, y)
  double eps = 0.0;    // top-level quasiarc scale
  double s0 = 0.0;
  std::size_t depth = 0;
  std::size_t depth_bound = 0;
  std::size_t band_pieces = 0;
  std::size_t floor_pieces = 0;  // gaps closed by an h-graph geodesic
  double floor_radius = 0.0;     // gaps below this skip the band step
  std::vector<double> level_gap;     // max gap per depth
  std::vector<double> level_length;  // length spent per depth
  std::vector<BandCheck> bands;
  Diagnostics diagnostics;
};

QuasiconvexPath quasiconvex_path(const PathMetricSpace& pms, PointId x, PointId y,
                                 const QuasiconvexConstants& constants,
                                 const QuasiconvexOptions& options = {});

struct ModulusOptions {
  double band = 0.0;
  std::size_t min_bands = 3;
  std::size_t sweeps = 500;
};

struct ModulusBound {
  double analytic = 0.0;   // 1 / (16 C omega^2 N^2 s0^2)
  double numerical = 0.0;  // dual lower bound
  double primal = 0.0;     // value of the scaled admissible density
  std::vector<std::vector<PointId>> family;
  std::vector<double> family_levels;
  bool low_confidence = false;
  double coarea_lhs = 0.0;  // weighted co-area check at the dual density
  double coarea_rhs = 0.0;
  bool coarea_holds = false;
  double s0 = 0.0;
  Diagnostics diagnostics;
};

ModulusBound modulus_lower_bound(const PathMetricSpace& pms, PointId x, PointId y,
                                 const QuasiconvexConstants& constants,
                                 const ModulusOptions& options = {});

// Discrete 2-modulus of a path family: the best Lagrangian dual value found by
// coordinate ascent, and the primal value of the induced admissible density.
struct DiscreteModulus {
  double lower = 0.0;
  double upper = 0.0;
  std::vector<double> density;  // per point
};

DiscreteModulus discrete_modulus(const FiniteMetricSpace& space,
                                 const std::vector<std::vector<PointId>>& family,
                                 const std::vector<double>& mass,
                                 std::size_t sweeps = 500);

}  // namespace quasidisk

#endif  // QUASIDISK_COAREA_HPP_
