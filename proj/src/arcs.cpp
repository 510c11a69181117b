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

#include "quasidisk/arcs.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <random>
#include <stdexcept>
#include <tuple>
#include <unordered_map>
#include <unordered_set>

namespace quasidisk {

bool is_injective(const std::vector<PointId>& points) {
  std::unordered_set<PointId> seen;
  seen.reserve(points.size() * 2);
  for (PointId p : points) {
    if (!seen.insert(p).second) return false;
  }
  return true;
}

DiscreteArc make_arc(const FiniteMetricSpace& space, std::vector<PointId> points) {
  DiscreteArc arc;
  for (std::size_t i = 1; i < points.size(); ++i) {
    arc.length += space.dist(points[i - 1], points[i]);
  }
  arc.points = std::move(points);
  return arc;
}

ExtractedArc extract_arc(const FiniteMetricSpace& space,
                         const std::vector<std::vector<PointId>>& segments) {
  if (segments.empty()) throw InvalidInput("no segments");
  for (std::size_t i = 0; i < segments.size(); ++i) {
    if (segments[i].empty()) throw InvalidInput("empty segment");
    if (!is_injective(segments[i])) throw InvalidInput("segment is not injective");
    if (i + 1 < segments.size() && segments[i].back() != segments[i + 1].front()) {
      throw InvalidInput("mismatched endpoints between segments " +
                         std::to_string(i) + " and " + std::to_string(i + 1));
    }
  }
  const std::size_t n = segments.size();
  std::vector<std::unordered_map<PointId, std::size_t>> where(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t k = 0; k < segments[i].size(); ++k) {
      where[i].emplace(segments[i][k], k);
    }
  }
  ExtractedArc out;
  std::vector<PointId> pts;
  std::size_t cur = 0;
  std::size_t start = 0;
  for (;;) {
    const auto& seg = segments[cur];
    out.used_segments.push_back(cur);
    if (cur == n - 1) {
      for (std::size_t k = start; k < seg.size(); ++k) {
        pts.push_back(seg[k]);
        out.segment_of.push_back(cur);
      }
      break;
    }
    // Remaining part of the current segment.
    std::unordered_map<PointId, std::size_t> rest;
    for (std::size_t k = start; k < seg.size(); ++k) rest.emplace(seg[k], k);
    std::size_t next = cur + 1;
    for (std::size_t i = n - 1; i > cur; --i) {
      bool meets = std::any_of(segments[i].begin(), segments[i].end(),
                               [&](PointId p) { return rest.count(p) > 0; });
      if (meets) {
        next = i;
        break;
      }
    }
    const auto& target = segments[next];
    std::size_t enter = 0;
    for (std::size_t t = target.size(); t-- > 0;) {
      if (rest.count(target[t])) {
        enter = t;
        break;
      }
    }
    std::size_t leave = rest.at(target[enter]);
    for (std::size_t k = start; k < leave; ++k) {
      pts.push_back(seg[k]);
      out.segment_of.push_back(cur);
    }
    cur = next;
    start = enter;
  }
  if (!is_injective(pts)) throw std::logic_error("extracted arc is not injective");
  out.arc = make_arc(space, std::move(pts));
  return out;
}

double subarc_diameter(const FiniteMetricSpace& space,
                       const std::vector<PointId>& arc, std::size_t i,
                       std::size_t j) {
  if (i > j) std::swap(i, j);
  double best = 0.0;
  for (std::size_t a = i; a <= j; ++a) {
    for (std::size_t b = a + 1; b <= j; ++b) {
      best = std::max(best, space.dist(arc[a], arc[b]));
    }
  }
  return best;
}

QuasiarcCertificate certify_quasiarc(const FiniteMetricSpace& space,
                                     const std::vector<PointId>& arc, double eps) {
  if (arc.empty()) throw InvalidInput("empty arc");
  if (!(eps > 0)) throw InvalidInput("quasiarc scale must be positive");
  QuasiarcCertificate cert;
  cert.eps = eps;
  const std::size_t n = arc.size();
  // below[j] = diam(arc[i+1..j]) from the previous row.
  std::vector<double> below(n, 0.0);
  std::vector<double> row(n, 0.0);
  for (std::size_t i = n; i-- > 0;) {
    double reach = 0.0;
    row[i] = 0.0;
    for (std::size_t j = i + 1; j < n; ++j) {
      double d = space.dist(arc[i], arc[j]);
      reach = std::max(reach, d);
      row[j] = std::max(below[j], reach);
      if (d <= eps) {
        double ratio = row[j] / eps;
        if (ratio > cert.worst_ratio) {
          cert.worst_ratio = ratio;
          cert.worst_u = arc[i];
          cert.worst_v = arc[j];
        }
      }
    }
    std::swap(row, below);
  }
  cert.m = std::max(1.0, cert.worst_ratio);
  return cert;
}

double containment_factor(double turning, double assouad_constant, double q) {
  return 2.0 * turning +
         std::pow(4.0 * assouad_constant, 1.0 / (2.0 * q)) * std::sqrt(4.0 * turning);
}

QuasiarcResult build_quasiarc(const PathMetricSpace& pms, PointId x, PointId y,
                              double eps, double q,
                              const QuasiarcConstants& constants,
                              const std::vector<char>* allowed) {
  const FiniteMetricSpace& space = pms.base();
  double r = space.dist(x, y);
  if (x == y) throw InvalidInput("quasiarc endpoints coincide");
  if (!(eps > 0) || eps >= r) throw InvalidInput("quasiarc needs 0 < eps < d(x, y)");
  QuasiarcResult out;
  out.containment_factor = containment_factor(constants.turning,
                                              constants.assouad_constant, q);
  if (r <= pms.h()) {
    out.arc = make_arc(space, {x, y});
    out.chain.chain = {eps, {x, y}};
  } else {
    std::vector<PointId> reference = pms.geodesic(x, y, allowed);
    if (reference.empty()) throw Disconnected("endpoints not joined in the h-graph");
    out.chain = score_minimizing_chain(
        space, x, y, reference, eps, q,
        ChainConstants{constants.assouad_constant, constants.turning}, allowed);
    std::vector<std::vector<PointId>> bridges;
    const auto& c = out.chain.chain.points;
    for (std::size_t i = 0; i + 1 < c.size(); ++i) {
      auto bridge = pms.geodesic(c[i], c[i + 1], allowed);
      if (bridge.empty()) throw Disconnected("chain step not joined in the h-graph");
      bridges.push_back(std::move(bridge));
    }
    out.arc = extract_arc(space, bridges).arc;
    out.diagnostics = out.chain.diagnostics;
  }
  out.certificate = certify_quasiarc(space, out.arc.points, eps);
  for (PointId p : out.arc.points) out.reach = std::max(out.reach, space.dist(x, p));
  double bound = out.containment_factor * r;
  if (!(out.reach < bound)) {
    out.diagnostics.push_back({"quasiarc_containment",
                               "arc leaves B(x, N d(x,y)) with measured constants",
                               out.reach, bound});
  }
  return out;
}

ScaleWindow default_window(const FiniteMetricSpace& space) {
  return {2.0 * space.spacing(), space.diameter_estimate() / 4.0};
}

namespace {

struct MinimaxTree {
  std::vector<double> key;
  std::vector<PointId> parent;
};

MinimaxTree minimax_from(const PathMetricSpace& pms, PointId x) {
  const FiniteMetricSpace& space = pms.base();
  const NeighborGraph& g = pms.graph();
  std::size_t n = space.size();
  MinimaxTree t{std::vector<double>(n, kInf), std::vector<PointId>(n, kNoPoint)};
  std::vector<char> done(n, 0);
  using Item = std::tuple<double, std::uint32_t, PointId>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
  t.key[x] = 0.0;
  pq.emplace(0.0, space.rank(x), x);
  while (!pq.empty()) {
    auto [k, rk, u] = pq.top();
    pq.pop();
    if (done[u]) continue;
    done[u] = 1;
    for (PointId v : g.neighbors(u)) {
      if (done[v]) continue;
      double nk = std::max(k, space.dist(x, v));
      if (nk < t.key[v]) {
        t.key[v] = nk;
        t.parent[v] = u;
        pq.emplace(nk, space.rank(v), v);
      }
    }
  }
  return t;
}

}  // namespace

TurningReport bounded_turning_constant(const PathMetricSpace& pms,
                                       const std::vector<PointId>& subset,
                                       ScaleWindow window,
                                       const TurningOptions& options) {
  const FiniteMetricSpace& space = pms.base();
  TurningReport rep;
  rep.window = window;
  std::vector<PointId> pool = subset;
  std::sort(pool.begin(), pool.end(),
            [&](PointId a, PointId b) { return space.rank(a) < space.rank(b); });
  std::vector<PointId> centers = pool;
  if (centers.size() > options.centers) {
    std::mt19937_64 rng(options.seed);
    std::shuffle(centers.begin(), centers.end(), rng);
    centers.resize(options.centers);
  }
  std::vector<char> tried(space.size(), 0);
  MinimaxTree worst_tree;
  auto scan = [&](PointId x) {
    if (tried[x]) return;
    tried[x] = 1;
    MinimaxTree t = minimax_from(pms, x);
    bool improved = false;
    for (PointId y : pool) {
      if (y == x) continue;
      double d = space.dist(x, y);
      if (d < window.lo || d > window.hi) continue;
      ++rep.pairs;
      if (t.key[y] == kInf) {
        ++rep.disconnected;
        if (rep.lambda != kInf) {
          rep.lambda = kInf;
          rep.worst_x = x;
          rep.worst_y = y;
        }
        continue;
      }
      double ratio = t.key[y] / d;
      if (ratio > rep.lambda || rep.worst_x == kNoPoint) {
        rep.lambda = std::max(ratio, 1.0);
        rep.worst_x = x;
        rep.worst_y = y;
        improved = true;
      }
    }
    if (improved) worst_tree = std::move(t);
  };
  for (PointId x : centers) scan(x);
  if (options.refine && rep.worst_x != kNoPoint && rep.lambda < kInf) {
    PointId wx = rep.worst_x;
    std::vector<char> in(space.size(), 0);
    for (PointId p : pool) in[p] = 1;
    std::size_t budget = 32;
    for (PointId c : space.ball(wx, 2.0 * pms.h())) {
      if (budget == 0) break;
      if (!in[c] || tried[c]) continue;
      --budget;
      scan(c);
    }
  }
  if (rep.worst_x != kNoPoint && rep.lambda < kInf && !worst_tree.key.empty()) {
    std::vector<PointId> path;
    for (PointId p = rep.worst_y; p != kNoPoint; p = worst_tree.parent[p]) {
      path.push_back(p);
    }
    double d = space.dist(rep.worst_x, rep.worst_y);
    rep.upper = std::max(1.0, subarc_diameter(space, path, 0, path.size() - 1) / d);
  }
  return rep;
}

}  // namespace quasidisk
