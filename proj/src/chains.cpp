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

#include "quasidisk/chains.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <stdexcept>
#include <tuple>

namespace quasidisk {

namespace {

// Node-weighted search on the implicit closed eps-graph. The path cost is the
// left-to-right sum of node costs, which keeps results bit-identical to a
// direct enumeration.
template <typename CostFn>
std::vector<PointId> node_weighted_path(const FiniteMetricSpace& space,
                                        PointId x, PointId y, double eps,
                                        CostFn cost,
                                        const std::vector<char>* allowed) {
  std::size_t n = space.size();
  std::vector<double> dist(n, kInf);
  std::vector<std::uint32_t> hops(n, ~0u);
  std::vector<PointId> parent(n, kNoPoint);
  std::vector<char> done(n, 0);
  struct Item {
    double d;
    std::uint32_t hops;
    std::uint32_t rank;
    PointId id;
    bool operator>(const Item& o) const {
      return std::tie(d, hops, rank) > std::tie(o.d, o.hops, o.rank);
    }
  };
  std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
  dist[x] = cost(x);
  hops[x] = 0;
  pq.push({dist[x], 0, space.rank(x), x});
  while (!pq.empty()) {
    Item it = pq.top();
    pq.pop();
    PointId u = it.id;
    if (done[u] || it.d != dist[u] || it.hops != hops[u]) continue;
    done[u] = 1;
    if (u == y) break;
    space.for_each_in_ball(u, eps, true, [&](PointId v, double) {
      if (v == u || done[v]) return;
      if (allowed && !(*allowed)[v]) return;
      double nd = dist[u] + cost(v);
      std::uint32_t nh = hops[u] + 1;
      if (nd < dist[v] || (nd == dist[v] && nh < hops[v])) {
        dist[v] = nd;
        hops[v] = nh;
        parent[v] = u;
        pq.push({nd, nh, space.rank(v), v});
      }
    });
  }
  if (!done[y]) return {};
  std::vector<PointId> path;
  for (PointId p = y; p != kNoPoint; p = parent[p]) path.push_back(p);
  std::reverse(path.begin(), path.end());
  return path;
}

}  // namespace

double distance_to_set(const FiniteMetricSpace& space, PointId p,
                       const std::vector<PointId>& set) {
  double best = kInf;
  for (PointId q : set) best = std::min(best, space.dist(p, q));
  return best;
}

DiscreteChain minimal_chain(const FiniteMetricSpace& space, PointId x, PointId y,
                            double eps) {
  if (!(eps > 0)) throw InvalidInput("chain scale must be positive");
  DiscreteChain chain;
  chain.eps = eps;
  if (x == y) {
    chain.points = {x};
    return chain;
  }
  chain.points = node_weighted_path(
      space, x, y, eps, [](PointId) { return 1.0; }, nullptr);
  if (chain.points.empty()) {
    throw Disconnected("disconnected at scale eps");
  }
  // A minimal chain cannot be shortcut: points two or more steps apart are
  // farther than eps.
  const auto& pts = chain.points;
  for (std::size_t i = 0; i + 2 < pts.size(); ++i) {
    for (std::size_t j = i + 2; j < pts.size(); ++j) {
      if (space.dist(pts[i], pts[j]) <= eps) {
        throw std::logic_error("minimal chain admits a shortcut");
      }
    }
  }
  return chain;
}

double score(const FiniteMetricSpace& space, const std::vector<PointId>& chain,
             const std::vector<PointId>& reference, double eps, double q) {
  if (!(eps > 0) || q < 0) throw InvalidInput("score needs eps > 0, Q >= 0");
  double total = 0.0;
  for (PointId w : chain) {
    total += 1.0 + std::pow(distance_to_set(space, w, reference) / eps, 2.0 * q);
  }
  return total;
}

double deviation_bound(double assouad_constant, double turning, double q,
                       double r, double eps) {
  return std::pow(4.0 * assouad_constant, 1.0 / (2.0 * q)) *
         std::sqrt(4.0 * turning * r * eps);
}

ScoredChain score_minimizing_chain(const FiniteMetricSpace& space, PointId x,
                                   PointId y,
                                   const std::vector<PointId>& reference,
                                   double eps, double q,
                                   std::optional<ChainConstants> constants,
                                   const std::vector<char>* allowed) {
  if (!(eps > 0) || q < 0) throw InvalidInput("score needs eps > 0, Q >= 0");
  if (reference.empty()) throw InvalidInput("empty reference arc");
  std::vector<double> cache(space.size(), -1.0);
  auto cost = [&](PointId w) {
    if (cache[w] < 0) {
      cache[w] = 1.0 + std::pow(distance_to_set(space, w, reference) / eps, 2.0 * q);
    }
    return cache[w];
  };
  ScoredChain out;
  out.reference = reference;
  out.exponent = 2.0 * q;
  out.chain.eps = eps;
  if (x == y) {
    out.chain.points = {x};
  } else {
    out.chain.points = node_weighted_path(space, x, y, eps, cost, allowed);
    if (out.chain.points.empty()) throw Disconnected("disconnected at scale eps");
  }
  for (PointId w : out.chain.points) {
    out.score += cost(w);
    out.max_deviation =
        std::max(out.max_deviation, distance_to_set(space, w, reference));
  }
  if (constants) {
    double bound = deviation_bound(constants->assouad_constant, constants->turning,
                                   q, space.dist(x, y), eps);
    out.deviation_bound = bound;
    if (out.max_deviation > bound) {
      out.diagnostics.push_back({"chain_deviation",
                                 "score minimiser strays farther than the "
                                 "bound from measured D and lambda",
                                 out.max_deviation, bound});
    }
  }
  return out;
}

}  // namespace quasidisk
