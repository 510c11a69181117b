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

#include "quasidisk/quasicircle.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <numbers>
#include <queue>
#include <string>
#include <tuple>
#include <unordered_map>

#include "quasidisk/winding.hpp"

namespace quasidisk {

namespace {

constexpr double kPi = std::numbers::pi;

double orient(Vec2 a, Vec2 b, Vec2 c) {
  return (b.u - a.u) * (c.v - a.v) - (c.u - a.u) * (b.v - a.v);
}

// Same half-open rule as winding_crossings: +1 for an upward crossing of the
// rightward horizontal ray from z, -1 for a downward one.
int ray_shift(Vec2 a, Vec2 b, Vec2 z) {
  double o = orient(a, b, z);
  if (a.v <= z.v) return (b.v > z.v && o > 0) ? 1 : 0;
  return (b.v <= z.v && o < 0) ? -1 : 0;
}

bool segment_hits(Vec2 a, Vec2 b, Vec2 z) {
  return orient(a, b, z) == 0 && std::min(a.u, b.u) <= z.u && z.u <= std::max(a.u, b.u) &&
         std::min(a.v, b.v) <= z.v && z.v <= std::max(a.v, b.v);
}

// Bucket grid over chart coordinates for nearest-sample queries.
class ChartLocator {
 public:
  ChartLocator(const FiniteMetricSpace& space, double cell) : space_(space), cell_(cell) {
    const auto& chart = space.chart();
    lo_u_ = hi_u_ = chart[0].u;
    lo_v_ = hi_v_ = chart[0].v;
    for (Vec2 c : chart) {
      lo_u_ = std::min(lo_u_, c.u);
      hi_u_ = std::max(hi_u_, c.u);
      lo_v_ = std::min(lo_v_, c.v);
      hi_v_ = std::max(hi_v_, c.v);
    }
    nu_ = std::max(1L, long((hi_u_ - lo_u_) / cell_) + 1);
    nv_ = std::max(1L, long((hi_v_ - lo_v_) / cell_) + 1);
    start_.assign(std::size_t(nu_ * nv_) + 1, 0);
    std::vector<std::size_t> key(chart.size());
    for (PointId p = 0; p < chart.size(); ++p) {
      key[p] = cell_of(chart[p]);
      ++start_[key[p] + 1];
    }
    for (std::size_t i = 1; i < start_.size(); ++i) start_[i] += start_[i - 1];
    items_.resize(chart.size());
    auto fill = start_;
    for (PointId p = 0; p < chart.size(); ++p) items_[fill[key[p]]++] = p;
  }

  // Nearest sample in the chart; ties go to lower rank.
  std::pair<PointId, double> nearest(Vec2 q) const {
    long cu = clamp_u(q.u), cv = clamp_v(q.v);
    PointId best = kNoPoint;
    double bd = kInf;
    long max_ring = std::max(nu_, nv_);
    for (long ring = 0; ring <= max_ring; ++ring) {
      for (long i = cu - ring; i <= cu + ring; ++i) {
        for (long j = cv - ring; j <= cv + ring; ++j) {
          if (std::max(std::abs(i - cu), std::abs(j - cv)) != ring) continue;
          if (i < 0 || j < 0 || i >= nu_ || j >= nv_) continue;
          std::size_t c = std::size_t(j * nu_ + i);
          for (std::size_t k = start_[c]; k < start_[c + 1]; ++k) {
            PointId p = items_[k];
            Vec2 s = space_.chart_at(p);
            double d = std::hypot(s.u - q.u, s.v - q.v);
            if (d < bd || (d == bd && space_.rank(p) < space_.rank(best))) {
              bd = d;
              best = p;
            }
          }
        }
      }
      // Every cell beyond this ring is at least ring * cell away.
      if (best != kNoPoint && bd <= double(ring) * cell_) break;
    }
    return {best, bd};
  }

 private:
  long clamp_u(double u) const {
    return std::clamp(long(std::floor((u - lo_u_) / cell_)), 0L, nu_ - 1);
  }
  long clamp_v(double v) const {
    return std::clamp(long(std::floor((v - lo_v_) / cell_)), 0L, nv_ - 1);
  }
  std::size_t cell_of(Vec2 c) const { return std::size_t(clamp_v(c.v) * nu_ + clamp_u(c.u)); }

  const FiniteMetricSpace& space_;
  double cell_;
  double lo_u_, hi_u_, lo_v_, hi_v_;
  long nu_ = 1, nv_ = 1;
  std::vector<std::size_t> start_;
  std::vector<PointId> items_;
};

// d' from a source up to (and excluding) `radius`, over the h-graph.
std::unordered_map<PointId, double> local_ball(const PathMetricSpace& pms, PointId source,
                                               double radius) {
  std::unordered_map<PointId, double> dist{{source, 0.0}};
  using Item = std::pair<double, PointId>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> heap;
  heap.push({0.0, source});
  while (!heap.empty()) {
    auto [d, u] = heap.top();
    heap.pop();
    if (d > dist[u]) continue;
    auto nbr = pms.graph().neighbors(u);
    auto len = pms.graph().lengths(u);
    for (std::size_t k = 0; k < nbr.size(); ++k) {
      double nd = d + len[k];
      if (nd >= radius) continue;
      auto it = dist.find(nbr[k]);
      if (it == dist.end() || nd < it->second) {
        dist[nbr[k]] = nd;
        heap.push({nd, nbr[k]});
      }
    }
  }
  return dist;
}

bool isolated(const PathMetricSpace& pms, PointId z) {
  return pms.graph().neighbors(z).empty();
}

std::vector<double> center_distances(const PathMetricSpace& pms, PointId z, bool* fallback) {
  const FiniteMetricSpace& space = pms.base();
  if (isolated(pms, z)) {
    if (fallback) *fallback = true;
    std::vector<double> d(space.size());
    for (PointId p = 0; p < space.size(); ++p) d[p] = space.dist(z, p);
    return d;
  }
  if (fallback) *fallback = false;
  return pms.distances_from(z);
}

}  // namespace

double DiscreteLoop::forward_length(std::size_t i, std::size_t j) const {
  double f = offset[j] - offset[i];
  return f >= 0 ? f : f + length;
}

DiscreteLoop make_loop(const FiniteMetricSpace& space, std::vector<PointId> points) {
  if (points.empty()) throw InvalidInput("loop needs at least one vertex");
  if (!is_injective(points)) throw InvalidInput("loop vertices must be distinct");
  DiscreteLoop loop;
  loop.points = std::move(points);
  const std::size_t n = loop.points.size();
  loop.offset.resize(n);
  loop.edge_length.resize(n);
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    loop.offset[i] = acc;
    loop.edge_length[i] = n == 1 ? 0.0 : space.dist(loop.points[i], loop.points[(i + 1) % n]);
    acc += loop.edge_length[i];
  }
  loop.length = acc;
  loop.theta.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    loop.theta[i] = acc > 0 ? 2.0 * kPi * loop.offset[i] / acc : 0.0;
  }
  return loop;
}

DiscreteLoop reversed(const FiniteMetricSpace& space, const DiscreteLoop& loop) {
  std::vector<PointId> pts(loop.points.rbegin(), loop.points.rend());
  return make_loop(space, std::move(pts));
}

CycleSplit split_cycles(const FiniteMetricSpace& space, const std::vector<PointId>& walk,
                        Vec2 z) {
  CycleSplit out;
  std::vector<PointId> stack;
  std::unordered_map<PointId, std::size_t> pos;
  auto emit = [&](std::vector<PointId> cyc) {
    int w = cyc.size() < 3 ? 0 : winding_number(space, cyc, z);
    out.cycles.push_back(std::move(cyc));
    out.windings.push_back(w);
  };
  for (PointId v : walk) {
    auto it = pos.find(v);
    if (it == pos.end()) {
      pos[v] = stack.size();
      stack.push_back(v);
      continue;
    }
    std::size_t k = it->second;
    std::vector<PointId> cyc(stack.begin() + std::ptrdiff_t(k), stack.end());
    for (std::size_t i = k + 1; i < stack.size(); ++i) pos.erase(stack[i]);
    stack.resize(k + 1);
    emit(std::move(cyc));
  }
  if (!stack.empty()) emit(std::move(stack));
  return out;
}

std::vector<PointId> winding_cycle(const FiniteMetricSpace& space,
                                   const std::vector<PointId>& walk, Vec2 z) {
  CycleSplit split = split_cycles(space, walk, z);
  std::optional<std::size_t> pick;
  for (std::size_t i = 0; i < split.cycles.size(); ++i) {
    if (std::abs(split.windings[i]) == 1) {
      pick = i;
      break;
    }
    if (split.windings[i] != 0 && !pick) pick = i;
  }
  if (!pick) throw ResolutionError("no sub-cycle of the walk winds around the centre");
  return split.cycles[*pick];
}

double chart_scale(const FiniteMetricSpace& space, PointId z) {
  if (!space.has_chart()) throw Refusal("chart scale needs a planar chart");
  const auto& order = space.canonical_order();
  std::size_t stride = std::max<std::size_t>(1, order.size() / 4096);
  Vec2 c = space.chart_at(z);
  std::vector<double> ratios;
  for (std::size_t i = 0; i < order.size(); i += stride) {
    PointId p = order[i];
    Vec2 q = space.chart_at(p);
    double cd = std::hypot(q.u - c.u, q.v - c.v);
    if (p == z || !(cd > 0)) continue;
    ratios.push_back(space.dist(z, p) / cd);
  }
  if (ratios.empty()) return 1.0;
  auto mid = ratios.begin() + std::ptrdiff_t(ratios.size() / 2);
  std::nth_element(ratios.begin(), mid, ratios.end());
  return *mid;
}

double chart_reach(const FiniteMetricSpace& space, PointId z) {
  if (!space.has_chart()) throw Refusal("chart reach needs a planar chart");
  double kappa = chart_scale(space, z);
  double tol = space.spacing() / kappa;
  double step = tol / 2.0;
  ChartLocator loc(space, tol);
  Vec2 c = space.chart_at(z);
  double far = 0.0;
  for (Vec2 q : space.chart()) far = std::max(far, std::hypot(q.u - c.u, q.v - c.v));
  std::size_t rays = std::max<std::size_t>(64, std::size_t(std::ceil(2.0 * kPi * far / step)));
  double reach = far + tol;
  for (std::size_t k = 0; k < rays; ++k) {
    double a = 2.0 * kPi * double(k) / double(rays);
    double du = std::cos(a), dv = std::sin(a);
    for (double t = step; t < reach; t += step) {
      if (loc.nearest({c.u + t * du, c.v + t * dv}).second > tol) {
        reach = t;
        break;
      }
    }
  }
  return kappa * reach;
}

LoopConstants estimate_loop_constants(const PathMetricSpace& pms, ScaleWindow window,
                                      const Budget& budget) {
  const FiniteMetricSpace& space = pms.base();
  auto everything = all_points(space);
  LoopConstants k;
  AssouadReport a = assouad_estimate(space, everything, window, budget);
  k.d = a.d;
  k.q = a.q;
  LLCReport llc = llc_estimate(pms, everything, window, budget);
  k.lambda = std::max(llc.lambda1, llc.lambda2);
  k.l = std::max(1.0, pms.quasiconvexity(64, budget.seed).factor);
  k.c = ahlfors_estimate(space, everything, window, budget).c_ahlfors;
  return k;
}

double LoopCostModel::rho(PointId p) const {
  double t = r / dist[p];
  return t * t + 1.0;
}

double LoopCostModel::edge_cost(PointId a, PointId b, double length) const {
  return length * (rho(a) + rho(b)) / 2.0;
}

LoopCostModel cost_model(const PathMetricSpace& pms, PointId z, double r) {
  if (!(r > 0)) throw InvalidInput("loop scale must be positive");
  LoopCostModel m;
  m.z = z;
  m.r = r;
  m.dist = center_distances(pms, z, &m.metric_fallback);
  return m;
}

double loop_cost(const DiscreteLoop& loop, const LoopCostModel& model) {
  for (PointId p : loop.points) {
    if (!(model.dist[p] > 0)) throw InvalidInput("loop passes through the centre");
  }
  const std::size_t n = loop.size();
  double sigma = 0.0;
  for (std::size_t i = 0; i < n && n > 1; ++i) {
    sigma += model.edge_cost(loop.points[i], loop.points[(i + 1) % n], loop.edge_length[i]);
  }
  return sigma;
}

InitialPolygon initial_polygon(const PathMetricSpace& pms, PointId z, double r,
                               const LoopConstants& k) {
  const FiniteMetricSpace& space = pms.base();
  if (!space.has_chart()) throw Refusal("initial polygon needs a planar chart");
  if (!(r > 0)) throw InvalidInput("loop scale must be positive");
  InitialPolygon out;
  const double kappa = chart_scale(space, z);
  const double tol = space.spacing() / kappa;
  out.chart_radius = 2.0 * r / kappa;
  const Vec2 c = space.chart_at(z);

  // Jordan approximation: the chart circle snapped to samples.
  ChartLocator loc(space, tol);
  std::size_t steps = std::max<std::size_t>(
      16, std::size_t(std::ceil(2.0 * kPi * out.chart_radius / (tol / 2.0))));
  std::vector<PointId> alpha;
  for (std::size_t i = 0; i < steps; ++i) {
    double a = 2.0 * kPi * double(i) / double(steps);
    auto [p, d] = loc.nearest({c.u + out.chart_radius * std::cos(a),
                               c.v + out.chart_radius * std::sin(a)});
    if (d > tol) throw Refusal("circle of radius 2R leaves the charted region");
    if (alpha.empty() || alpha.back() != p) alpha.push_back(p);
  }
  while (alpha.size() > 1 && alpha.back() == alpha.front()) alpha.pop_back();
  out.circle_points = alpha.size();

  const double kl = k.lambda * k.l;
  out.eps = std::max(r / (128.0 * kl * (kl + 1.0)), pms.h());
  const double eps = out.eps;

  // Maximal eps-separated set on the circle in d', swept in circle order.
  std::unordered_map<PointId, char> member;
  std::unordered_map<PointId, char> covered;
  for (PointId p : alpha) {
    if (covered.count(p)) continue;
    member[p] = 1;
    for (const auto& [q, d] : local_ball(pms, p, eps)) covered[q] = 1;
  }
  out.net_size = member.size();

  auto nearest_member = [&](PointId p) {
    PointId best = kNoPoint;
    double bd = kInf;
    for (const auto& [q, d] : local_ball(pms, p, eps)) {
      if (!member.count(q)) continue;
      if (d < bd || (d == bd && space.rank(q) < space.rank(best))) {
        bd = d;
        best = q;
      }
    }
    return best;
  };

  // Inductive choice: the next index is the first circle point at d' >= eps
  // from the current net point.
  std::vector<PointId> zk{nearest_member(alpha[0])};
  std::size_t i = 0;
  while (true) {
    auto ball = local_ball(pms, zk.back(), eps);
    std::size_t j = i + 1;
    while (j < alpha.size() && ball.count(alpha[j])) ++j;
    if (j >= alpha.size()) break;
    i = j;
    zk.push_back(nearest_member(alpha[i]));
  }
  out.steps = zk.size();
  if (zk.size() < 2) throw ResolutionError("circle of radius 2R is below the vertex scale");

  std::vector<PointId> walk;
  for (std::size_t t = 0; t < zk.size(); ++t) {
    auto g = pms.geodesic(zk[t], zk[(t + 1) % zk.size()]);
    if (g.empty()) throw Disconnected("net points on the circle are not joined");
    walk.insert(walk.end(), g.begin(), g.end() - 1);
  }
  out.walk_length = walk.size();

  out.loop = make_loop(space, winding_cycle(space, walk, c));
  out.winding = winding_number(space, out.loop.points, c);
  out.c0 = out.loop.length / r;
  auto dz = center_distances(pms, z, nullptr);
  out.dist_min = kInf;
  for (PointId p : out.loop.points) {
    out.dist_min = std::min(out.dist_min, dz[p]);
    out.dist_max = std::max(out.dist_max, dz[p]);
  }
  if (out.dist_min < r / 2.0 || out.dist_min > 3.0 * r) {
    throw ResolutionError("initial polygon lies outside [R/2, 3R] from the centre");
  }
  return out;
}

MinimizedLoop minimize_loop(const PathMetricSpace& pms, PointId z, double r,
                            const DiscreteLoop& warm, const LoopConstants& k, double c0,
                            const MinimizeOptions& options) {
  const FiniteMetricSpace& space = pms.base();
  if (!space.has_chart()) throw Refusal("loop minimisation needs a planar chart");
  if (options.sheets < 2) throw InvalidInput("covering needs at least two sheets");
  const Vec2 zc = space.chart_at(z);
  LoopCostModel model = cost_model(pms, z, r);
  MinimizedLoop out;
  out.warm_sigma = loop_cost(warm, model);
  int warm_winding = warm.size() < 3 ? 0 : winding_number(space, warm.points, zc);
  if (warm_winding == 0) throw InvalidInput("warm start does not wind around the centre");
  out.region_radius = options.region_radius;

  // Region vertices, numbered in canonical order.
  std::vector<std::uint32_t> local(space.size(), kNoPoint);
  std::vector<PointId> verts;
  for (PointId p : space.canonical_order()) {
    if (p == z || !(model.dist[p] <= options.region_radius)) continue;
    local[p] = std::uint32_t(verts.size());
    verts.push_back(p);
  }
  out.region_size = verts.size();
  bool warm_inside = std::all_of(warm.points.begin(), warm.points.end(),
                                 [&](PointId p) { return local[p] != kNoPoint; });
  if (!warm_inside) {
    out.diagnostics.push_back({"warm_start_region", "warm start leaves the search region",
                               out.warm_sigma, 0.0});
  }

  struct Arc {
    std::uint32_t to;
    int shift;
    double cost;
  };
  std::vector<std::size_t> first(verts.size() + 1, 0);
  std::vector<Arc> arcs;
  std::vector<char> next_to_cut(verts.size(), 0);
  for (std::uint32_t a = 0; a < verts.size(); ++a) {
    PointId u = verts[a];
    Vec2 cu = space.chart_at(u);
    auto nbr = pms.graph().neighbors(u);
    auto len = pms.graph().lengths(u);
    for (std::size_t e = 0; e < nbr.size(); ++e) {
      std::uint32_t b = local[nbr[e]];
      if (b == kNoPoint) continue;
      Vec2 cv = space.chart_at(nbr[e]);
      if (segment_hits(cu, cv, zc)) continue;
      int s = ray_shift(cu, cv, zc);
      if (s == 1) next_to_cut[a] = 1;
      arcs.push_back({b, s, model.edge_cost(u, nbr[e], len[e])});
    }
    first[a + 1] = arcs.size();
  }

  std::vector<std::uint32_t> sources;
  for (std::uint32_t a = 0; a < verts.size(); ++a) {
    if (next_to_cut[a]) sources.push_back(a);
  }
  std::sort(sources.begin(), sources.end(), [&](std::uint32_t a, std::uint32_t b) {
    double ka = std::abs(model.dist[verts[a]] - r), kb = std::abs(model.dist[verts[b]] - r);
    if (ka != kb) return ka < kb;
    return space.rank(verts[a]) < space.rank(verts[b]);
  });
  out.sources = sources.size();
  if (sources.empty()) throw ResolutionError("no sample edge crosses the cut from the centre");

  // Lifted search: state = vertex * sheets + level; a loop of winding one
  // runs from (v, base) to (v, base + 1).
  const int sheets = options.sheets;
  const int base = (sheets - 1) / 2;
  const std::size_t states = verts.size() * std::size_t(sheets);
  std::vector<double> dist(states, kInf);
  std::vector<std::uint32_t> parent(states, kNoPoint);
  std::vector<std::uint32_t> touched;
  double bound = (warm_inside && std::abs(warm_winding) == 1) ? out.warm_sigma : kInf;
  std::vector<std::uint32_t> best_path;
  using Item = std::tuple<double, std::uint32_t, std::uint32_t>;  // cost, rank, state
  for (std::uint32_t s : sources) {
    for (std::uint32_t t : touched) {
      dist[t] = kInf;
      parent[t] = kNoPoint;
    }
    touched.clear();
    std::uint32_t start = s * std::uint32_t(sheets) + std::uint32_t(base);
    std::uint32_t goal = start + 1;
    std::priority_queue<Item, std::vector<Item>, std::greater<>> heap;
    dist[start] = 0.0;
    touched.push_back(start);
    heap.push({0.0, space.rank(verts[s]), start});
    while (!heap.empty()) {
      auto [d, rk, st] = heap.top();
      heap.pop();
      if (d > dist[st]) continue;
      if (d >= bound) break;
      if (st == goal) {
        bound = d;
        best_path.clear();
        for (std::uint32_t x = st; x != kNoPoint; x = parent[x]) best_path.push_back(x);
        std::reverse(best_path.begin(), best_path.end());
        break;
      }
      std::uint32_t a = st / std::uint32_t(sheets);
      int level = int(st % std::uint32_t(sheets));
      for (std::size_t e = first[a]; e < first[a + 1]; ++e) {
        int nl = level + arcs[e].shift;
        if (nl < 0 || nl >= sheets) continue;
        std::uint32_t ns = arcs[e].to * std::uint32_t(sheets) + std::uint32_t(nl);
        double nd = d + arcs[e].cost;
        if (nd < dist[ns]) {
          if (dist[ns] == kInf) touched.push_back(ns);
          dist[ns] = nd;
          parent[ns] = st;
          heap.push({nd, space.rank(verts[arcs[e].to]), ns});
        }
      }
    }
  }

  if (best_path.empty()) {
    if (bound == kInf) {
      throw ResolutionError("no cycle of winding one about the centre in the region");
    }
    out.loop = warm;
    out.warm_kept = true;
  } else {
    std::vector<PointId> walk;
    for (std::size_t i = 0; i + 1 < best_path.size(); ++i) {
      walk.push_back(verts[best_path[i] / std::uint32_t(sheets)]);
    }
    out.loop = make_loop(space, winding_cycle(space, walk, zc));
  }
  out.sigma = loop_cost(out.loop, model);
  out.winding = winding_number(space, out.loop.points, zc);
  if (std::abs(out.winding) != 1) {
    out.diagnostics.push_back({"winding_class", "minimiser winds more than once",
                               double(out.winding), 1.0});
  }
  if (out.sigma > out.warm_sigma * (1.0 + 1e-12) && warm_inside) {
    out.diagnostics.push_back({"warm_start", "minimiser costs more than the warm start",
                               out.sigma, out.warm_sigma});
  }

  out.dist_min = kInf;
  for (PointId p : out.loop.points) {
    out.dist_min = std::min(out.dist_min, model.dist[p]);
    out.dist_max = std::max(out.dist_max, model.dist[p]);
  }
  const double kl = k.lambda * k.l;
  if (out.loop.length > out.sigma) {
    out.diagnostics.push_back({"length_bound", "l_n exceeds sigma", out.loop.length, out.sigma});
  }
  if (!(out.dist_min < 2.0 * kl * out.loop.length)) {
    out.diagnostics.push_back({"distance_upper", "d_n is not below 2 Lambda L l_n",
                               out.dist_min, 2.0 * kl * out.loop.length});
  }
  double lower = r / (320.0 * c0 * kl);
  if (out.dist_min < lower) {
    out.diagnostics.push_back({"distance_lower", "d_n is below R / (320 C0 Lambda L)",
                               out.dist_min, lower});
  }
  return out;
}

ChordArcCertificate certify_chord_arc(const FiniteMetricSpace& space, const DiscreteLoop& loop,
                                      std::optional<PointId> z) {
  const std::size_t n = loop.size();
  if (n < 3) throw InvalidInput("chord-arc certificate needs at least three vertices");
  ChordArcCertificate cert;
  double worst = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      double chord = space.dist(loop.points[i], loop.points[j]);
      double fwd = loop.offset[j] - loop.offset[i];
      double arc = std::min(fwd, loop.length - fwd);
      cert.diam = std::max(cert.diam, chord);
      double ratio = arc / chord;
      if (ratio > worst) {
        worst = ratio;
        cert.worst_a = loop.points[i];
        cert.worst_b = loop.points[j];
      }
    }
  }
  cert.lambda = std::max(1.0, worst);
  if (z) {
    cert.dist = kInf;
    for (PointId p : loop.points) cert.dist = std::min(cert.dist, space.dist(*z, p));
    if (space.has_chart()) cert.winding = winding_number(space, loop.points, space.chart_at(*z));
  }
  return cert;
}

QuasicircleResult chord_arc_pipeline(const PathMetricSpace& pms, PointId z, double r,
                                     const QuasicircleOptions& options) {
  const FiniteMetricSpace& space = pms.base();
  if (!space.has_chart()) throw Refusal("quasicircle construction needs a planar chart");
  QuasicircleResult res;
  res.r = r;
  ScaleWindow window = options.window;
  if (!(window.lo > 0) || window.hi == kInf) window = default_window(space);
  res.constants = options.constants ? *options.constants
                                    : estimate_loop_constants(pms, window, options.budget);
  const LoopConstants& k = res.constants;
  const double kl = k.lambda * k.l;
  res.r0 = options.r0 ? *options.r0 : chart_reach(space, z);

  res.initial = initial_polygon(pms, z, r, k);
  res.c0 = res.initial.c0;
  res.c1 = 320.0 * res.c0 * (kl + 2.0);
  res.guard_ok = r <= res.r0 / res.c1;
  if (!res.guard_ok) {
    if (!options.guard_off) {
      throw Refusal("R = " + std::to_string(r) + " exceeds the scale guard R0 / C1 = " +
                    std::to_string(res.r0 / res.c1));
    }
    res.diagnostics.push_back({"scale_guard", "R exceeds R0 / C1; guard relaxed", r,
                               res.r0 / res.c1});
  }
  double nominal = res.r0 / (options.b0_multiplier * kl);
  res.region_radius = nominal;
  if (!res.guard_ok) {
    res.region_radius = std::max(nominal, std::min(res.r0, 2.0 * res.initial.dist_max));
  }

  MinimizeOptions mo;
  mo.region_radius = res.region_radius;
  mo.sheets = options.sheets;
  res.minimized = minimize_loop(pms, z, r, res.initial.loop, k, res.c0, mo);
  for (const auto& d : res.minimized.diagnostics) res.diagnostics.push_back(d);
  const DiscreteLoop& loop = res.minimized.loop;
  res.certificate = certify_chord_arc(space, loop, z);
  res.dist_prime = res.minimized.dist_min;

  const auto& cert = res.certificate;
  res.c2 = std::max({r / cert.dist, cert.dist / r, r / cert.diam, cert.diam / r});
  res.c2_ceiling = std::max(320.0 * res.c0 * kl * kl * k.l, 10.0 * res.c0 * (2.0 * kl + 1.0));
  if (res.c2 > res.c2_ceiling) {
    res.diagnostics.push_back({"inclusion_constant", "measured C2 above the proof's value",
                               res.c2, res.c2_ceiling});
  }
  // diam_d bounds diam_d' from below, so this implies the d' statement.
  double need = res.dist_prime / kl;
  if (cert.diam < need) {
    res.diagnostics.push_back({"dist_diam", "loop diameter below dist / (Lambda L)",
                               cert.diam, need});
  }
  double t = 6400.0 * res.c0 * res.c0 * kl * (kl + 1.0);
  res.lambda_ceiling = t * t * k.l;
  if (cert.lambda > res.lambda_ceiling) {
    res.diagnostics.push_back({"chord_arc_ceiling", "chord-arc constant above the proof's bound",
                               cert.lambda, res.lambda_ceiling});
  }
  if (!cert.winding || std::abs(*cert.winding) != 1) {
    res.diagnostics.push_back({"winding", "loop does not wind once around the centre",
                               cert.winding ? double(*cert.winding) : 0.0, 1.0});
  }
  return res;
}

Domain extract_domain(const FiniteMetricSpace& space, const DiscreteLoop& loop, PointId z,
                      double r, double lambda, double c2) {
  if (!space.has_chart()) throw Refusal("domain extraction needs a planar chart");
  if (loop.size() < 3) throw InvalidInput("domain extraction needs a loop of three vertices");
  Domain dom;
  auto poly = chart_polygon(space, loop.points);
  const Vec2 zc = space.chart_at(z);
  auto wz = winding_crossings(poly, zc);
  if (!wz || *wz == 0) throw InvalidInput("loop does not wind around the centre");

  dom.reach = chart_reach(space, z);
  double kappa = chart_scale(space, z);
  double loop_far = 0.0;
  for (PointId p : loop.points) {
    Vec2 q = space.chart_at(p);
    loop_far = std::max(loop_far, kappa * std::hypot(q.u - zc.u, q.v - zc.v));
  }
  if (loop_far >= dom.reach) throw Refusal("loop reaches the edge of the charted region");

  std::vector<char> on_loop(space.size(), 0);
  for (PointId p : loop.points) on_loop[p] = 1;
  for (PointId p = 0; p < space.size(); ++p) {
    if (on_loop[p]) continue;
    auto w = winding_crossings(poly, space.chart_at(p));
    if (!w) {
      dom.on_edge.push_back(p);
    } else if (*w != 0) {
      dom.interior.push_back(p);
    }
  }
  dom.closure = dom.interior;
  dom.closure.insert(dom.closure.end(), dom.on_edge.begin(), dom.on_edge.end());
  dom.closure.insert(dom.closure.end(), loop.points.begin(), loop.points.end());
  std::sort(dom.closure.begin(), dom.closure.end());

  dom.inner_radius = r / (2.0 * lambda * c2);
  dom.outer_radius = c2 * (4.0 * lambda + 2.0) * r;
  std::vector<char> inside(space.size(), 0);
  for (PointId p : dom.interior) inside[p] = 1;
  inside[z] = 1;
  dom.inner_ok = true;
  for (PointId p : space.ball(z, dom.inner_radius, false)) {
    if (!inside[p]) dom.inner_ok = false;
  }
  double far = 0.0;
  for (PointId p : dom.closure) far = std::max(far, space.dist(z, p));
  dom.outer_ok = far < dom.outer_radius;
  if (!dom.inner_ok) {
    dom.diagnostics.push_back({"lower_inclusion", "a point of B(z, R / (2 Lambda C2)) is outside",
                               dom.inner_radius, 0.0});
  }
  if (!dom.outer_ok) {
    dom.diagnostics.push_back({"upper_inclusion", "closure leaves B(z, C2 (4 Lambda + 2) R)",
                               far, dom.outer_radius});
  }
  if (dom.reach < dom.outer_radius) {
    dom.diagnostics.push_back({"chart_envelope", "chart covers less than the outer envelope",
                               dom.reach, dom.outer_radius});
  }
  return dom;
}

DomainReport verify_domain(const PathMetricSpace& pms, const Domain& domain,
                           const DiscreteLoop& loop, const LoopConstants& ambient,
                           double lambda, const Budget& budget) {
  DomainReport rep;
  rep.lambda_prime_bound = 4.0 * ambient.lambda * (4.0 * lambda + 1.0);
  rep.points = domain.closure.size();
  if (domain.interior.empty()) {
    rep.vacuous = true;
    rep.diagnostics.push_back({"vacuous", "domain has no interior samples", 0.0, 0.0});
    rep.ahlfors_bound = 64.0 * ambient.c * rep.lambda_prime_bound * rep.lambda_prime_bound;
    return rep;
  }
  const FiniteMetricSpace& space = pms.base();
  auto sub = std::make_shared<const FiniteMetricSpace>(space.subspace(domain.closure));
  PathMetricSpace sub_pms(sub, pms.h());
  std::vector<PointId> index(space.size(), kNoPoint);
  for (std::size_t i = 0; i < domain.closure.size(); ++i) index[domain.closure[i]] = PointId(i);
  std::vector<PointId> boundary;
  for (PointId p : loop.points) boundary.push_back(index[p]);
  std::sort(boundary.begin(), boundary.end());

  ScaleWindow window = default_window(*sub);
  auto everything = all_points(*sub);
  LLCReport llc = llc_estimate(sub_pms, everything, window, budget);
  rep.lambda_prime = std::max(llc.lambda1, llc.lambda2);
  rep.llc_ok = rep.lambda_prime <= rep.lambda_prime_bound;

  PorosityReport por = porosity_constant(*sub, boundary, window, budget);
  rep.porosity = por.c_por;
  rep.porosity_ok = por.porous && por.c_por <= rep.porosity_bound;

  rep.ahlfors = ahlfors_estimate(*sub, everything, window, budget).c_ahlfors;
  double cl = rep.porosity * rep.lambda_prime_bound;
  rep.ahlfors_bound = 64.0 * ambient.c * cl * cl;
  rep.ahlfors_ok = rep.ahlfors <= rep.ahlfors_bound;

  if (!rep.llc_ok) {
    rep.diagnostics.push_back({"domain_llc", "closure LLC above 4 Lambda (4 lambda + 1)",
                               rep.lambda_prime, rep.lambda_prime_bound});
  }
  if (!rep.porosity_ok) {
    rep.diagnostics.push_back({"boundary_porosity", "loop not 4-porous in the closure",
                               rep.porosity, rep.porosity_bound});
  }
  if (!rep.ahlfors_ok) {
    rep.diagnostics.push_back({"domain_ahlfors", "closure Ahlfors constant above the bound",
                               rep.ahlfors, rep.ahlfors_bound});
  }
  return rep;
}

}  // namespace quasidisk
