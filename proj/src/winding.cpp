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

#include "quasidisk/winding.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "quasidisk/arcs.hpp"

namespace quasidisk {

namespace {

// > 0 when c is left of the line a -> b.
double orient(Vec2 a, Vec2 b, Vec2 c) {
  return (b.u - a.u) * (c.v - a.v) - (c.u - a.u) * (b.v - a.v);
}

}  // namespace

WindingResult winding_angle_sum(const std::vector<Vec2>& polygon, Vec2 z) {
  WindingResult out;
  const std::size_t n = polygon.size();
  if (n == 0) return out;
  for (std::size_t i = 0; i < n; ++i) {
    Vec2 a = polygon[i];
    Vec2 b = polygon[(i + 1) % n];
    double ax = a.u - z.u, ay = a.v - z.v;
    double bx = b.u - z.u, by = b.v - z.v;
    if ((ax == 0 && ay == 0) || (bx == 0 && by == 0)) {
      throw InvalidInput("winding centre lies on the loop");
    }
    double cross = ax * by - ay * bx;
    double dot = ax * bx + ay * by;
    double angle = std::atan2(cross, dot);
    if (std::abs(angle) >= std::numbers::pi * (1 - 1e-12) ||
        (cross == 0 && dot < 0)) {
      throw ResolutionError("loop edge subtends an angle of pi at the centre");
    }
    out.angle_sum += angle;
  }
  double turns = out.angle_sum / (2.0 * std::numbers::pi);
  out.index = int(std::lround(turns));
  out.residual = std::abs(turns - out.index);
  if (out.residual >= kWindingResidual) {
    throw ResolutionError("winding residual too large");
  }
  return out;
}

std::optional<int> winding_crossings(const std::vector<Vec2>& polygon, Vec2 z) {
  int wn = 0;
  const std::size_t n = polygon.size();
  for (std::size_t i = 0; i < n; ++i) {
    Vec2 a = polygon[i];
    Vec2 b = polygon[(i + 1) % n];
    double o = orient(a, b, z);
    if (o == 0 && std::min(a.u, b.u) <= z.u && z.u <= std::max(a.u, b.u) &&
        std::min(a.v, b.v) <= z.v && z.v <= std::max(a.v, b.v)) {
      return std::nullopt;
    }
    // Half-open rule on the horizontal line through z.
    if (a.v <= z.v) {
      if (b.v > z.v && o > 0) ++wn;
    } else {
      if (b.v <= z.v && o < 0) --wn;
    }
  }
  return wn;
}

std::vector<Vec2> chart_polygon(const FiniteMetricSpace& space,
                                const std::vector<PointId>& loop) {
  if (!space.has_chart()) throw Refusal("winding number needs a planar chart");
  std::vector<Vec2> poly;
  poly.reserve(loop.size());
  for (PointId p : loop) poly.push_back(space.chart_at(p));
  return poly;
}

int winding_number(const FiniteMetricSpace& space,
                   const std::vector<PointId>& loop, Vec2 z) {
  auto poly = chart_polygon(space, loop);
  WindingResult w = winding_angle_sum(poly, z);
  auto c = winding_crossings(poly, z);
  if (c && *c != w.index) {
    throw ResolutionError("angle sum and crossing count disagree");
  }
  return w.index;
}

ClosenessReport certify_loop_closeness(const FiniteMetricSpace& space,
                                       const std::vector<PointId>& alpha,
                                       const std::vector<PointId>& beta,
                                       const std::vector<std::size_t>& ap,
                                       const std::vector<std::size_t>& bp,
                                       double delta, double lambda,
                                       const std::vector<PointId>& queries) {
  if (ap.size() != bp.size() || ap.empty()) {
    throw InvalidInput("parameter sets must match and be nonempty");
  }
  ClosenessReport rep;
  rep.guard = 2.0 * lambda * delta * (lambda + 1.0);
  const std::size_t m = ap.size();
  auto cyclic_segment = [](const std::vector<PointId>& loop, std::size_t i,
                           std::size_t j) {
    std::vector<PointId> seg;
    const std::size_t n = loop.size();
    for (std::size_t k = i;; k = (k + 1) % n) {
      seg.push_back(loop[k]);
      if (k == j) break;
    }
    return seg;
  };
  for (std::size_t i = 0; i < m; ++i) {
    if (ap[i] >= alpha.size() || bp[i] >= beta.size()) {
      throw InvalidInput("parameter outside the loop");
    }
    double pd = space.dist(alpha[ap[i]], beta[bp[i]]);
    auto sa = cyclic_segment(alpha, ap[i], ap[(i + 1) % m]);
    auto sb = cyclic_segment(beta, bp[i], bp[(i + 1) % m]);
    if (m == 1) {
      sa = alpha;
      sb = beta;
    }
    double da = subarc_diameter(space, sa, 0, sa.size() - 1);
    double db = subarc_diameter(space, sb, 0, sb.size() - 1);
    rep.max_pair_distance = std::max(rep.max_pair_distance, pd);
    rep.max_segment_diameter = std::max({rep.max_segment_diameter, da, db});
    if (rep.hypotheses_hold && (pd > delta || da > delta || db > delta)) {
      rep.hypotheses_hold = false;
      rep.violating_index = i;
    }
  }
  if (!rep.hypotheses_hold) return rep;
  for (PointId z : queries) {
    double gap = kInf;
    for (PointId b : beta) gap = std::min(gap, space.dist(z, b));
    if (!(gap > rep.guard)) {
      rep.excluded.push_back(z);
      continue;
    }
    rep.checked.push_back(z);
    Vec2 c = space.chart_at(z);
    auto wa = winding_crossings(chart_polygon(space, alpha), c);
    auto wb = winding_crossings(chart_polygon(space, beta), c);
    if (!wa || !wb || *wa != *wb) rep.mismatched.push_back(z);
  }
  return rep;
}

}  // namespace quasidisk
