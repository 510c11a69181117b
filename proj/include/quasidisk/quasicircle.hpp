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

#ifndef QUASIDISK_QUASICIRCLE_HPP_
#define QUASIDISK_QUASICIRCLE_HPP_

#include <optional>
#include <vector>

#include "quasidisk/arcs.hpp"
#include "quasidisk/core.hpp"
#include "quasidisk/invariants.hpp"
#include "quasidisk/space.hpp"

namespace quasidisk {

// Injective cyclic point list. Edge i joins points[i] to points[i + 1 mod n];
// loops built here are h-graph cycles, so each edge length is both d and d'.
struct DiscreteLoop {
  std::vector<PointId> points;
  std::vector<double> offset;       // arc length from points[0] to points[i]
  std::vector<double> theta;        // 2 pi offset / length
  std::vector<double> edge_length;
  double length = 0.0;

  std::size_t size() const { return points.size(); }
  // Length of the subarc running forward from vertex i to vertex j.
  double forward_length(std::size_t i, std::size_t j) const;
};

// Throws InvalidInput on an empty or non-injective list.
DiscreteLoop make_loop(const FiniteMetricSpace& space, std::vector<PointId> points);
DiscreteLoop reversed(const FiniteMetricSpace& space, const DiscreteLoop& loop);

// Splits a closed walk at repeated vertices into simple cycles. The edge
// multiset is preserved, so the chart windings add up to the walk's.
struct CycleSplit {
  std::vector<std::vector<PointId>> cycles;
  std::vector<int> windings;
};

CycleSplit split_cycles(const FiniteMetricSpace& space,
                        const std::vector<PointId>& walk, Vec2 z);

// The first split cycle with winding +-1, else the first nonzero one.
// Throws ResolutionError when every cycle has winding 0.
std::vector<PointId> winding_cycle(const FiniteMetricSpace& space,
                                   const std::vector<PointId>& walk, Vec2 z);

// Metric length per unit of chart length, as a median of d(z, p) / |p - z|
// in the chart.
double chart_scale(const FiniteMetricSpace& space, PointId z);

// Metric radius of the largest chart disk about z whose every circle snaps to
// samples within one spacing.
double chart_reach(const FiniteMetricSpace& space, PointId z);

struct LoopConstants {
  double lambda = 1.0;  // linear local contractibility (LLC surrogate)
  double l = 1.0;       // quasiconvexity d' <= L d
  double d = 1.0;       // Assouad constant
  double q = 2.0;       // Assouad exponent
  double c = 1.0;       // Ahlfors constant, used by the domain checks
};

LoopConstants estimate_loop_constants(const PathMetricSpace& pms, ScaleWindow window,
                                      const Budget& budget = {});

// rho(x) = (R / d'(z, x))^2 + 1. When z has no h-graph neighbours the metric d
// stands in for d'.
struct LoopCostModel {
  PointId z = kNoPoint;
  double r = 0.0;
  std::vector<double> dist;
  bool metric_fallback = false;

  double rho(PointId p) const;
  double edge_cost(PointId a, PointId b, double length) const;
};

LoopCostModel cost_model(const PathMetricSpace& pms, PointId z, double r);

// Trapezoid sum of edge costs. Throws InvalidInput when the loop passes
// through z.
double loop_cost(const DiscreteLoop& loop, const LoopCostModel& model);

struct InitialPolygon {
  DiscreteLoop loop;
  double eps = 0.0;           // vertex scale, floored at h
  double chart_radius = 0.0;  // chart units
  std::size_t circle_points = 0;
  std::size_t net_size = 0;
  std::size_t steps = 0;        // z_k chosen before deduplication
  std::size_t walk_length = 0;  // vertices of the joined walk
  int winding = 0;
  double c0 = 0.0;              // length / R
  double dist_min = 0.0;        // d'(z, .) over the loop
  double dist_max = 0.0;
};

// Chart circle of radius 2R snapped to samples, an eps-net on it in d', the
// inductive choice of net points, d'-geodesics between them, then a simple
// cycle with nonzero winding. Throws Refusal without a chart or when the
// circle leaves the charted region, ResolutionError when the winding
// vanishes or the loop leaves [R/2, 3R].
InitialPolygon initial_polygon(const PathMetricSpace& pms, PointId z, double r,
                               const LoopConstants& constants);

struct MinimizeOptions {
  double region_radius = kInf;  // search ball about z in the cost model's distance
  int sheets = 4;               // covering levels kept per vertex
};

struct MinimizedLoop {
  DiscreteLoop loop;
  double sigma = 0.0;
  double warm_sigma = 0.0;
  int winding = 0;
  std::size_t region_size = 0;
  std::size_t sources = 0;
  double region_radius = 0.0;
  double dist_min = 0.0;  // d_n
  double dist_max = 0.0;  // D_n
  bool warm_kept = false;
  Diagnostics diagnostics;
};

// Exact minimiser of sigma over h-graph cycles of winding +-1 about z inside
// the region: the chart is cut along the rightward horizontal ray from z and
// each vertex next to the cut is joined from one sheet to the next. c0 feeds
// the a priori bound checks, which are diagnostics.
MinimizedLoop minimize_loop(const PathMetricSpace& pms, PointId z, double r,
                            const DiscreteLoop& warm, const LoopConstants& constants,
                            double c0, const MinimizeOptions& options = {});

struct ChordArcCertificate {
  double lambda = 1.0;
  PointId worst_a = kNoPoint;
  PointId worst_b = kNoPoint;
  double dist = 0.0;  // d(z, loop) over vertices
  double diam = 0.0;
  std::optional<int> winding;
};

// Exact scan over all vertex pairs with prefix-sum arc lengths. Throws
// InvalidInput below three vertices.
ChordArcCertificate certify_chord_arc(const FiniteMetricSpace& space,
                                      const DiscreteLoop& loop,
                                      std::optional<PointId> z = std::nullopt);

struct QuasicircleOptions {
  bool guard_off = false;
  double b0_multiplier = 16.0;
  std::optional<LoopConstants> constants;
  std::optional<double> r0;  // defaults to chart_reach
  ScaleWindow window;        // for constant estimation; empty means default
  Budget budget;
  int sheets = 4;
};

struct QuasicircleResult {
  InitialPolygon initial;
  MinimizedLoop minimized;
  ChordArcCertificate certificate;
  LoopConstants constants;
  double r = 0.0;
  double r0 = 0.0;
  double c0 = 0.0;
  double c1 = 0.0;          // 320 C0 (Lambda L + 2)
  bool guard_ok = false;    // R <= R0 / C1
  double region_radius = 0.0;
  double c2 = 0.0;          // measured
  double c2_ceiling = 0.0;
  double lambda_ceiling = 0.0;  // (6400 C0^2 Lambda L (Lambda L + 1))^2
  double dist_prime = 0.0;      // d'(z, loop)
  Diagnostics diagnostics;
};

// initial_polygon, minimize_loop, certify_chord_arc. Throws Refusal when R
// exceeds the scale guard and the guard is on.
QuasicircleResult chord_arc_pipeline(const PathMetricSpace& pms, PointId z, double r,
                                     const QuasicircleOptions& options = {});

struct Domain {
  std::vector<PointId> interior;  // winding != 0, off the loop
  std::vector<PointId> on_edge;   // samples lying on a loop edge in the chart
  std::vector<PointId> closure;   // interior, loop and on_edge, sorted
  double inner_radius = 0.0;      // R / (2 Lambda C2)
  double outer_radius = 0.0;      // C2 (4 Lambda + 2) R
  bool inner_ok = false;
  bool outer_ok = false;
  double reach = 0.0;             // chart_reach at z
  Diagnostics diagnostics;
};

// Throws Refusal without a chart or when the loop reaches the chart edge, and
// InvalidInput when the loop does not wind around z.
Domain extract_domain(const FiniteMetricSpace& space, const DiscreteLoop& loop,
                      PointId z, double r, double lambda, double c2);

struct DomainReport {
  bool vacuous = false;
  std::size_t points = 0;
  double lambda_prime = 1.0;   // measured LLC of the closure
  double lambda_prime_bound = 0.0;  // 4 Lambda (4 lambda + 1)
  bool llc_ok = true;
  double ahlfors = 1.0;
  double ahlfors_bound = 0.0;  // 64 C (C_por lambda')^2
  bool ahlfors_ok = true;
  double porosity = 1.0;
  double porosity_bound = 4.0;
  bool porosity_ok = true;
  Diagnostics diagnostics;
};

// lambda is the chord-arc constant of the loop; Lambda and C come from the
// ambient estimate.
DomainReport verify_domain(const PathMetricSpace& pms, const Domain& domain,
                           const DiscreteLoop& loop, const LoopConstants& ambient,
                           double lambda, const Budget& budget = {});

}  // namespace quasidisk

#endif  // QUASIDISK_QUASICIRCLE_HPP_
