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

#include "quasidisk/invariants.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

namespace quasidisk {

std::vector<PointId> sample_centers(const FiniteMetricSpace& space,
                                    const std::vector<PointId>& subset,
                                    std::size_t count, std::uint64_t seed) {
  std::vector<PointId> pool = subset;
  std::sort(pool.begin(), pool.end(),
            [&](PointId a, PointId b) { return space.rank(a) < space.rank(b); });
  if (pool.size() > count) {
    std::mt19937_64 rng(seed);
    std::shuffle(pool.begin(), pool.end(), rng);
    pool.resize(count);
  }
  return pool;
}

std::vector<double> geometric_radii(double lo, double hi, int per_octave) {
  std::vector<double> out;
  if (!(lo > 0) || !(hi >= lo) || per_octave < 1) return out;
  double step = std::pow(2.0, 1.0 / per_octave);
  for (int k = 0;; ++k) {
    double r = lo * std::pow(step, k);
    if (r > hi * (1 + 1e-12)) break;
    out.push_back(r);
  }
  return out;
}

namespace {

struct Fit {
  double slope = 0.0;
  double intercept = 0.0;
  bool ok = false;
};

Fit least_squares(const std::vector<double>& x, const std::vector<double>& y) {
  Fit f;
  std::size_t n = x.size();
  if (n < 2) return f;
  double mx = std::accumulate(x.begin(), x.end(), 0.0) / double(n);
  double my = std::accumulate(y.begin(), y.end(), 0.0) / double(n);
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  if (sxx <= 0) return f;
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  f.ok = true;
  return f;
}

// Subtracts the mean of entries [first, end) from both series.
void demean(std::vector<double>& xs, std::vector<double>& ys, std::size_t first) {
  const std::size_t m = xs.size() - first;
  if (m == 0) return;
  double mx = 0, my = 0;
  for (std::size_t i = first; i < xs.size(); ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= double(m);
  my /= double(m);
  for (std::size_t i = first; i < xs.size(); ++i) {
    xs[i] -= mx;
    ys[i] -= my;
  }
}

std::vector<char> mask_of(std::size_t n, const std::vector<PointId>& ids) {
  std::vector<char> m(n, 0);
  for (PointId p : ids) m[p] = 1;
  return m;
}

class UnionFind {
 public:
  explicit UnionFind(std::size_t n) : parent_(n), members_(n) {
    std::iota(parent_.begin(), parent_.end(), PointId{0});
  }
  void make(PointId p) { members_[p] = {p}; }
  PointId find(PointId p) {
    while (parent_[p] != p) {
      parent_[p] = parent_[parent_[p]];
      p = parent_[p];
    }
    return p;
  }
  // Joins two roots, returns the surviving root. Members of the smaller side
  // move to the larger.
  PointId join(PointId a, PointId b) {
    if (members_[a].size() < members_[b].size()) std::swap(a, b);
    parent_[b] = a;
    members_[a].insert(members_[a].end(), members_[b].begin(), members_[b].end());
    members_[b].clear();
    members_[b].shrink_to_fit();
    return a;
  }
  const std::vector<PointId>& members(PointId root) const { return members_[root]; }

 private:
  std::vector<PointId> parent_;
  std::vector<std::vector<PointId>> members_;
};

// Vertices of `pool` in sweep order with the level at which each joins the
// component of the first vertex. Levels are distances from `center`.
struct Sweep {
  std::vector<PointId> order;
  std::vector<double> level;  // by position in order
  std::vector<double> join;   // by position in order; kInf (outward) or -1 (inward)
};

Sweep sweep(const PathMetricSpace& pms, PointId center,
            const std::vector<PointId>& pool, bool outward, double stop_radius) {
  const FiniteMetricSpace& space = pms.base();
  const std::size_t n = space.size();
  Sweep s;
  s.order = pool;
  std::vector<double> d(n, 0.0);
  for (PointId p : pool) d[p] = space.dist(center, p);
  std::sort(s.order.begin(), s.order.end(), [&](PointId a, PointId b) {
    if (d[a] != d[b]) return outward ? d[a] < d[b] : d[a] > d[b];
    return space.rank(a) < space.rank(b);
  });
  const std::size_t m = s.order.size();
  s.level.resize(m);
  s.join.assign(m, outward ? kInf : -1.0);
  std::vector<std::size_t> pos(n, SIZE_MAX);
  for (std::size_t i = 0; i < m; ++i) {
    pos[s.order[i]] = i;
    s.level[i] = d[s.order[i]];
  }
  if (m == 0) return s;
  UnionFind uf(n);
  std::vector<char> added(n, 0);
  const PointId anchor = s.order[0];
  // Points inside stop_radius (outward) that still have to join the anchor.
  std::size_t pending = 0;
  if (outward) {
    for (std::size_t i = 0; i < m; ++i) {
      if (s.level[i] < stop_radius) ++pending;
    }
  }
  auto settle = [&](PointId root, double level) {
    for (PointId q : uf.members(root)) {
      std::size_t i = pos[q];
      if (outward ? s.join[i] == kInf : s.join[i] < 0) {
        s.join[i] = level;
        if (outward && s.level[i] < stop_radius) --pending;
      }
    }
  };
  for (std::size_t i = 0; i < m; ++i) {
    PointId p = s.order[i];
    double lvl = s.level[i];
    added[p] = 1;
    uf.make(p);
    PointId root = p;
    for (PointId q : pms.graph().neighbors(p)) {
      if (!added[q]) continue;
      PointId rq = uf.find(q);
      if (rq == root) continue;
      PointId ra = uf.find(anchor);
      bool a_side = (rq == ra) || (root == ra);
      PointId other = rq == ra ? root : rq;
      if (a_side) settle(other, lvl);
      root = uf.join(root, rq);
    }
    if (p == anchor) settle(uf.find(anchor), lvl);
    if (outward && pending == 0 && lvl >= stop_radius) break;
  }
  return s;
}

double llc1_from_sweep(const Sweep& s, double r, std::size_t* witness) {
  double worst = 0.0;
  for (std::size_t i = 0; i < s.order.size() && s.level[i] < r; ++i) {
    if (s.join[i] > worst || (s.join[i] == kInf && worst != kInf)) {
      worst = s.join[i];
      if (witness) *witness = i;
    }
  }
  return worst == kInf ? kInf : std::max(1.0, worst / r);
}

// Inward sweep: every point at distance >= r must join the anchor by a level
// of at least r / lambda.
double llc2_from_sweep(const Sweep& s, double r, std::size_t* witness) {
  double lowest = kInf;
  std::size_t count = 0;
  for (std::size_t i = 0; i < s.order.size() && s.level[i] >= r; ++i) {
    ++count;
    if (s.join[i] < lowest) {
      lowest = s.join[i];
      if (witness) *witness = i;
    }
  }
  if (count < 2) return 1.0;
  if (!(lowest > 0)) return kInf;
  return std::max(1.0, r / lowest);
}

bool compactly_inside(const PathMetricSpace& pms, const std::vector<char>& in_u,
                      PointId center, double r) {
  bool inside = true;
  pms.base().for_each_in_ball(center, r + pms.h(), true, [&](PointId q, double) {
    if (!in_u[q]) inside = false;
  });
  return inside;
}

}  // namespace

AssouadReport assouad_estimate(const FiniteMetricSpace& space,
                               const std::vector<PointId>& subset,
                               ScaleWindow window, const Budget& budget) {
  AssouadReport rep;
  rep.window = window;
  rep.budget = budget;
  if (subset.size() <= 1) {
    rep.q = 0.0;
    rep.d = 1.0;
    return rep;
  }
  if (!(window.lo > 0) || window.hi < 2.0 * window.lo) {
    rep.refused = true;
    rep.reason = "scale window narrower than one octave";
    return rep;
  }
  // One global net per scale; N(x, r, eps) counts its members in B(x, r).
  // A fresh net of each ball would add a boundary term that biases the slope
  // low when r / eps is only a few octaves.
  auto centers = sample_centers(space, subset, budget.centers, budget.seed);
  auto radii = geometric_radii(2.0 * window.lo, window.hi, budget.radii_per_octave);
  auto scales = geometric_radii(window.lo, window.hi / 2.0, budget.radii_per_octave);
  std::vector<std::vector<char>> member(scales.size());
  for (std::size_t k = 0; k < scales.size(); ++k) {
    Net net = maximal_net(space, scales[k], budget.seed + k, &subset);
    member[k].assign(space.size(), 0);
    for (PointId m : net.members) member[k][m] = 1;
  }
  // Slope is fitted within each ball: every (x, r) gets its own intercept, so
  // clipped balls near the edge of the set do not tilt the pooled fit.
  std::vector<double> xs, ys;
  for (PointId x : centers) {
    for (double r : radii) {
      auto ball = space.ball(x, r);
      std::size_t first = xs.size();
      for (std::size_t k = 0; k < scales.size(); ++k) {
        double t = scales[k] / r;
        if (t > 0.5 * (1 + 1e-12)) break;
        std::size_t count = 0;
        for (PointId p : ball) count += member[k][p];
        if (count == 0) continue;
        rep.samples.push_back({x, r, t, count});
        xs.push_back(std::log(1.0 / t));
        ys.push_back(std::log(double(count)));
      }
      demean(xs, ys, first);
    }
  }
  Fit f = least_squares(xs, ys);
  if (!f.ok) {
    rep.refused = true;
    rep.reason = "window admits a single scale ratio";
    return rep;
  }
  rep.q = std::max(0.0, f.slope);
  double d = 1.0;
  for (const auto& s : rep.samples) {
    d = std::max(d, double(s.count) * std::pow(s.ratio, rep.q));
  }
  rep.d = d;
  return rep;
}

RegularityReport ahlfors_estimate(const FiniteMetricSpace& space,
                                  const std::vector<PointId>& subset,
                                  ScaleWindow window, const Budget& budget,
                                  std::optional<double> proxy_scale) {
  RegularityReport rep;
  rep.window = window;
  rep.budget = budget;
  rep.proxy_scale = proxy_scale.value_or(space.spacing());
  if (!space.has_weights() && !(rep.proxy_scale > 0)) {
    throw InvalidInput("area weights or a proxy scale are required");
  }
  auto centers = sample_centers(space, subset, budget.centers, budget.seed);
  auto radii = geometric_radii(window.lo, window.hi, budget.radii_per_octave);
  std::vector<double> xs, ys;
  // log measure per radius, for the local exponent profile
  std::vector<std::vector<double>> per_radius(radii.size());
  for (PointId x : centers) {
    for (std::size_t k = 0; k < radii.size(); ++k) {
      double r = radii[k];
      auto ball = space.ball(x, r);
      double mu = hausdorff_proxy(space, 2, ball, rep.proxy_scale);
      double ratio = mu / (r * r);
      rep.table.push_back({x, r, ratio});
      double c = ratio > 0 ? std::max(ratio, 1.0 / ratio) : kInf;
      if (c > rep.c_ahlfors) {
        rep.c_ahlfors = c;
        rep.worst_center = x;
        rep.worst_radius = r;
      }
      if (mu > 0) {
        xs.push_back(std::log(r));
        ys.push_back(std::log(mu));
        per_radius[k].push_back(std::log(mu));
      }
    }
  }
  if (rep.c_ahlfors == kInf) {
    rep.degenerate = true;
    rep.note = "zero-measure ball in the window";
  }
  Fit f = least_squares(xs, ys);
  if (f.ok) rep.exponent = f.slope;
  std::vector<double> tx, ty;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (xs[i] >= std::log(radii[radii.size() / 2])) {
      tx.push_back(xs[i]);
      ty.push_back(ys[i]);
    }
  }
  Fit tail = least_squares(tx, ty);
  if (tail.ok) rep.tail_exponent = tail.slope;
  // Local exponent between consecutive radii from the median log measure.
  auto median = [](std::vector<double> v) {
    std::sort(v.begin(), v.end());
    return v.empty() ? 0.0 : v[v.size() / 2];
  };
  for (std::size_t k = 1; k < radii.size(); ++k) {
    if (per_radius[k].empty() || per_radius[k - 1].empty()) continue;
    double local = (median(per_radius[k]) - median(per_radius[k - 1])) /
                   std::log(radii[k] / radii[k - 1]);
    if (local < 1.5 || local > 2.5) {
      rep.failure_scale = radii[k];
      break;
    }
  }
  if (std::abs(rep.tail_exponent - 2.0) > 0.5 || std::abs(rep.exponent - 2.0) > 0.5) {
    rep.degenerate = true;
    if (rep.note.empty()) rep.note = "measure growth departs from r^2";
  }
  if (rep.degenerate && !rep.failure_scale && !radii.empty()) {
    rep.failure_scale = rep.worst_radius > 0 ? rep.worst_radius : radii.back();
  }
  return rep;
}

double llc1_ratio(const PathMetricSpace& pms, PointId center, double r) {
  Sweep s = sweep(pms, center, all_points(pms.base()), true, r);
  return llc1_from_sweep(s, r, nullptr);
}

double llc2_ratio(const PathMetricSpace& pms, const std::vector<PointId>& u,
                  PointId center, double r) {
  Sweep s = sweep(pms, center, u, false, 0.0);
  return llc2_from_sweep(s, r, nullptr);
}

LLCReport llc_estimate(const PathMetricSpace& pms, const std::vector<PointId>& u,
                       ScaleWindow window, const Budget& budget) {
  const FiniteMetricSpace& space = pms.base();
  LLCReport rep;
  rep.window = window;
  rep.budget = budget;
  auto in_u = mask_of(space.size(), u);
  auto centers = sample_centers(space, u, budget.centers, budget.seed);
  auto radii = geometric_radii(window.lo, window.hi, budget.radii_per_octave);
  if (radii.empty()) return rep;
  auto everything = all_points(space);
  for (PointId a : centers) {
    Sweep out = sweep(pms, a, everything, true, radii.back());
    Sweep in = sweep(pms, a, u, false, 0.0);
    for (double r : radii) {
      std::size_t w = 0;
      double l1 = llc1_from_sweep(out, r, &w);
      ++rep.balls1;
      if (l1 > rep.lambda1 || rep.witness1_center == kNoPoint) {
        l1 = std::max(l1, rep.lambda1);
        rep.lambda1 = l1;
        rep.witness1_center = a;
        rep.witness1_point = out.order[w];
        rep.witness1_radius = r;
      }
      if (!compactly_inside(pms, in_u, a, r)) continue;
      ++rep.balls2;
      w = 0;
      double l2 = llc2_from_sweep(in, r, &w);
      if (l2 > rep.lambda2 || rep.witness2_center == kNoPoint) {
        l2 = std::max(l2, rep.lambda2);
        rep.lambda2 = l2;
        rep.witness2_center = a;
        rep.witness2_point = in.order[w];
        rep.witness2_radius = r;
      }
    }
  }
  return rep;
}

ThreePointCertificate three_point_constant(const FiniteMetricSpace& space,
                                           const std::vector<PointId>& loop) {
  const std::size_t n = loop.size();
  if (n < 4) throw InvalidInput("three-point scan needs at least 4 loop vertices");
  if (n > kMaxThreePointLoop) throw InvalidInput("loop too long for the exact scan");
  if (!is_injective(loop)) throw InvalidInput("loop is not injective");
  auto dd = [&](std::size_t i, std::size_t j) {
    return space.dist(loop[i % n], loop[j % n]);
  };
  // diam of the arc from i running `len` steps forward. Rows for len <= half
  // are kept; longer arcs are rolled and paired with their stored complement.
  const std::size_t half = n / 2;
  std::vector<double> stored((half + 1) * n, 0.0);
  std::vector<double> prev(n, 0.0), cur(n, 0.0);
  ThreePointCertificate cert;
  auto consider = [&](std::size_t i, std::size_t j, double a, double b) {
    double d = dd(i, j);
    double ratio = std::min(a, b) / d;
    if (ratio > cert.worst_ratio) {
      cert.worst_ratio = ratio;
      cert.worst_x = loop[i % n];
      cert.worst_y = loop[j % n];
    }
  };
  for (std::size_t len = 1; len < n; ++len) {
    for (std::size_t i = 0; i < n; ++i) {
      // arc i..i+len = max(arc i..i+len-1, arc i+1..i+len, d(i, i+len))
      double a = prev[i];
      double b = prev[(i + 1) % n];
      cur[i] = std::max({a, b, dd(i, i + len)});
    }
    if (len <= half) {
      std::copy(cur.begin(), cur.end(), stored.begin() + std::ptrdiff_t(len * n));
    }
    if (len >= n - half) {
      // Complement arc runs from i+len back to i with length n - len.
      std::size_t clen = n - len;
      for (std::size_t i = 0; i < n; ++i) {
        std::size_t j = (i + len) % n;
        if (len == clen && i > j) continue;  // each antipodal pair once
        consider(i, j, cur[i], stored[clen * n + j]);
      }
    }
    std::swap(prev, cur);
  }
  cert.lambda = std::max(1.0, cert.worst_ratio);
  return cert;
}

std::vector<double> porosity_grid() {
  std::vector<double> g;
  for (int k = 1; k <= 28; ++k) g.push_back(std::pow(2.0, k / 4.0));
  g[3] = 2.0;  // exact octave values
  g[7] = 4.0;
  g[11] = 8.0;
  g[15] = 16.0;
  g[19] = 32.0;
  g[23] = 64.0;
  g[27] = 128.0;
  return g;
}

bool porosity_witness_holds(const FiniteMetricSpace& space,
                            const std::vector<char>& in_y, PointId y, double r,
                            PointId x, double c) {
  bool ok = space.dist(y, x) < r && !in_y[x];
  if (!ok) return false;
  space.for_each_in_ball(x, r / c, false, [&](PointId p, double) {
    if (in_y[p] || !(space.dist(y, p) < r)) ok = false;
  });
  return ok;
}

PorosityReport porosity_constant(const FiniteMetricSpace& space,
                                 const std::vector<PointId>& y,
                                 ScaleWindow window, const Budget& budget) {
  if (y.empty()) throw InvalidInput("porosity needs a nonempty set");
  PorosityReport rep;
  rep.window = window;
  rep.budget = budget;
  const auto grid = porosity_grid();
  auto in_y = mask_of(space.size(), y);
  std::vector<double> dist_y(space.size(), -1.0);
  auto to_y = [&](PointId p) {
    if (dist_y[p] < 0) {
      double best = kInf;
      for (PointId q : y) best = std::min(best, space.dist(p, q));
      dist_y[p] = best;
    }
    return dist_y[p];
  };
  auto centers = sample_centers(space, y, budget.centers, budget.seed);
  auto radii = geometric_radii(window.lo, window.hi, budget.radii_per_octave);
  for (PointId c0 : centers) {
    for (double r : radii) {
      // rho(x): distance from x to the nearest point of Y or outside B(c0, r),
      // so B(x, r/C) qualifies exactly when r/C <= rho(x). dist_Y bounds rho
      // from above; candidates are scanned in that order.
      std::vector<std::pair<double, PointId>> cand;
      space.for_each_in_ball(c0, r, false, [&](PointId x, double) {
        if (!in_y[x]) cand.emplace_back(to_y(x), x);
      });
      std::sort(cand.begin(), cand.end(), [&](const auto& a, const auto& b) {
        if (a.first != b.first) return a.first > b.first;
        return space.rank(a.second) < space.rank(b.second);
      });
      double best = 0.0;
      PointId best_x = kNoPoint;
      for (const auto& [upper, x] : cand) {
        if (upper <= best) break;
        double rho = upper;
        space.for_each_in_ball(x, upper, false, [&](PointId p, double d) {
          if (d < rho && !(space.dist(c0, p) < r)) rho = d;
        });
        if (rho > best) {
          best = rho;
          best_x = x;
        }
      }
      PorositySample found{c0, r, kNoPoint, kInf};
      if (best_x != kNoPoint) {
        for (double c : grid) {
          if (r / c <= best &&
              porosity_witness_holds(space, in_y, c0, r, best_x, c)) {
            found = {c0, r, best_x, c};
            break;
          }
        }
      }
      rep.witnesses.push_back(found);
      if (found.witness == kNoPoint) {
        rep.porous = false;
        rep.c_por = kInf;
        rep.note = "not porous at tested resolution";
      } else if (rep.porous) {
        rep.c_por = std::max(rep.c_por, found.c);
      }
    }
  }
  return rep;
}

}  // namespace quasidisk
