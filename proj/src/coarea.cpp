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

#include "quasidisk/coarea.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <set>
#include <stdexcept>

namespace quasidisk {

std::vector<PointId> LevelSetDecomposition::sublevel(std::size_t j) const {
  double top = levels[j] + band / 2.0;
  std::vector<PointId> out;
  for (PointId p = 0; p < dist.size(); ++p) {
    if (dist[p] < top) out.push_back(p);
  }
  return out;
}

LevelSetDecomposition level_sets(const PathMetricSpace& pms,
                                 const std::vector<PointId>& base, double t_max,
                                 double band) {
  const FiniteMetricSpace& space = pms.base();
  if (base.empty()) throw InvalidInput("level sets need a nonempty base set");
  if (band == 0.0) band = 2.0 * space.spacing();
  if (!(band >= space.spacing() * (1 - 1e-9))) {
    throw InvalidInput("band narrower than the sample spacing");
  }
  if (!(t_max >= 0)) throw InvalidInput("t_max must be nonnegative");
  LevelSetDecomposition dec;
  dec.base = base;
  dec.band = band;
  dec.t_max = t_max;
  const std::size_t n = space.size();
  const std::size_t levels = std::size_t(std::ceil(t_max / band - 1e-9));
  // dist(., E) in the metric itself, exact up to the last band top.
  dec.dist.assign(n, kInf);
  const double reach = double(levels) * band;
  for (PointId e : base) {
    dec.dist[e] = 0.0;
    if (levels == 0) continue;
    space.for_each_in_ball(e, reach, false, [&](PointId p, double d) {
      if (d < dec.dist[p]) dec.dist[p] = d;
    });
  }
  dec.levels.resize(levels);
  dec.bands.resize(levels);
  for (std::size_t j = 0; j < levels; ++j) dec.levels[j] = (double(j) + 0.5) * band;
  for (PointId p : space.canonical_order()) {
    double d = dec.dist[p];
    if (d <= 0.0 || d >= reach) continue;
    std::size_t j = std::min(levels - 1, std::size_t(d / band));
    dec.bands[j].push_back(p);
  }
  dec.band_length.resize(levels);
  dec.outside_label.resize(levels);
  dec.outside_count.resize(levels);
  for (std::size_t j = 0; j < levels; ++j) {
    dec.band_length[j] = hausdorff_proxy(space, 1, dec.bands[j], band);
    double top = dec.levels[j] + band / 2.0;
    std::vector<char> outside(n, 0);
    for (PointId p = 0; p < n; ++p) outside[p] = dec.dist[p] >= top;
    auto comps = connected_components(space, pms.graph(), &outside);
    auto& label = dec.outside_label[j];
    label.assign(n, kNoPoint);
    for (std::size_t c = 0; c < comps.size(); ++c) {
      for (PointId p : comps[c]) label[p] = std::uint32_t(c);
    }
    dec.outside_count[j] = comps.size();
  }
  return dec;
}

CoareaCheck coarea_check(const FiniteMetricSpace& space,
                         const LevelSetDecomposition& dec) {
  CoareaCheck out;
  for (double len : dec.band_length) out.lhs += len * dec.band;
  double top = double(dec.level_count()) * dec.band;
  std::vector<PointId> region;
  for (PointId p = 0; p < dec.dist.size(); ++p) {
    if (dec.dist[p] < top || dec.dist[p] == 0.0) region.push_back(p);
  }
  out.rhs = hausdorff_proxy(space, 2, region, space.spacing());
  if (!(out.rhs > 0)) throw Refusal("co-area check has zero area on the right");
  out.ratio = out.lhs / out.rhs;
  return out;
}

OmegaCalibration calibrate_omega(const PathMetricSpace& pms, std::size_t count,
                                 std::uint64_t seed, double band, double t_max) {
  const FiniteMetricSpace& space = pms.base();
  OmegaCalibration cal;
  cal.band = band == 0.0 ? 2.0 * space.spacing() : band;
  cal.t_max = t_max == 0.0 ? space.diameter_estimate() / 8.0 : t_max;
  const auto& order = space.canonical_order();
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::size_t> pick(0, order.size() - 1);
  std::size_t attempts = 0;
  while (cal.continua.size() < count && attempts < 50 * count) {
    ++attempts;
    PointId a = order[pick(rng)], b = order[pick(rng)];
    if (a == b) continue;
    auto path = pms.geodesic(a, b);
    if (path.empty()) continue;
    auto dec = level_sets(pms, path, cal.t_max, cal.band);
    CoareaCheck c = coarea_check(space, dec);
    cal.continua.emplace_back(a, b);
    cal.ratios.push_back(c.ratio);
    cal.omega = std::max(cal.omega, c.ratio);
  }
  if (cal.continua.empty()) throw Refusal("no base continuum could be sampled");
  return cal;
}

GoodLevel good_level_search(const FiniteMetricSpace& space,
                            const LevelSetDecomposition& dec, double r, double s,
                            double c, double n, double omega) {
  if (!(s > 8.0 * n)) throw InvalidInput("good level search needs s > 8N");
  GoodLevel g;
  g.threshold = 8.0 * c * omega * n * n * s * r;
  g.t_range = r / s;
  for (std::size_t j = 0; j < dec.level_count(); ++j) {
    if (dec.levels[j] <= g.t_range) g.considered.push_back(j);
  }
  if (g.considered.empty() && dec.level_count() > 0) {
    g.floored = true;
    for (std::size_t j = 0; j < dec.level_count(); ++j) g.considered.push_back(j);
  }
  // The co-area bound behind the scan rests on the lower 2-regularity bound:
  // E_T contains a ball of radius T about any base point.
  double top = double(dec.level_count()) * dec.band;
  if (top > 0) {
    std::vector<PointId> region;
    for (PointId p = 0; p < dec.dist.size(); ++p) {
      if (dec.dist[p] < top) region.push_back(p);
    }
    double area = hausdorff_proxy(space, 2, region, space.spacing());
    double lower = top * top / c;
    if (!(area >= lower) || !std::isfinite(omega) || !(omega > 0)) {
      g.diagnostics.push_back({"regularity",
                               "sublevel area below the 2-regular lower bound",
                               area, lower});
      return g;
    }
  }
  for (std::size_t j : g.considered) {
    if (dec.band_length[j] <= g.threshold) g.qualifying.push_back(j);
  }
  std::stable_sort(g.qualifying.begin(), g.qualifying.end(),
                   [&](std::size_t a, std::size_t b) {
                     return dec.band_length[a] < dec.band_length[b];
                   });
  g.fraction = g.considered.empty()
                   ? 0.0
                   : double(g.qualifying.size()) / double(g.considered.size());
  if (g.qualifying.empty()) {
    g.diagnostics.push_back({"good_level", "no band under the length threshold",
                             0.0, g.threshold});
    return g;
  }
  if (g.fraction < 0.5) {
    g.diagnostics.push_back({"measure_estimate",
                             "fewer than half the bands qualify", g.fraction, 0.5});
  }
  g.best = g.qualifying.front();
  g.t0 = dec.levels[*g.best];
  return g;
}

namespace {

double nonzero(double v) { return v > 0 ? v : 1.0; }

struct LevelProblem {
  double r = 0.0;
  double eps = 0.0;  // from the constants
  double eps_used = 0.0;
  double s0 = 0.0;
  double trim = 0.0;
  QuasiarcResult quasiarc;
  std::vector<PointId> base;
  LevelSetDecomposition dec;
  GoodLevel good;
};

double theory_eps(double r, const QuasiconvexConstants& k) {
  return r / (32.0 * k.m * k.n * k.lambda * (k.lambda + 1.0));
}

// Largest band count J such that the trim radius J w + h stays below 0.45 r
// (x and y stay outside every band) and the nearest band reaches at least h
// into B(x, r/4): J w + 2h - w <= r / 4.
std::size_t band_room(double r, double w, double h) {
  double j = std::min(std::floor((0.45 * r - h) / w),
                      std::floor((r / 4.0 - 2.0 * h) / w) + 1.0);
  return j < 1 ? 0 : std::size_t(j);
}

std::optional<LevelProblem> prepare(const PathMetricSpace& pms, PointId x, PointId y,
                                    const QuasiconvexConstants& k, double w,
                                    std::size_t min_bands) {
  const FiniteMetricSpace& space = pms.base();
  const double h = pms.h();
  LevelProblem lp;
  lp.r = space.dist(x, y);
  lp.eps = theory_eps(lp.r, k);
  lp.s0 = 5.0 * lp.r / lp.eps;
  std::size_t room = band_room(lp.r, w, h);
  if (room == 0) return std::nullopt;
  std::size_t bands = std::max<std::size_t>(
      min_bands, std::size_t(std::ceil(lp.r / lp.s0 / w - 1e-9)));
  bands = std::min(bands, room);
  lp.trim = std::max(lp.r / (8.0 * k.n), double(bands) * w + h);
  lp.eps_used = std::min(std::max(lp.eps, h), lp.r / 2.0);
  lp.quasiarc = build_quasiarc(pms, x, y, lp.eps_used, k.q,
                               QuasiarcConstants{k.turning, k.assouad_constant});
  const auto& pts = lp.quasiarc.arc.points;
  std::size_t a = 0;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    if (space.dist(x, pts[i]) <= lp.trim) a = i;
  }
  std::size_t b = pts.size() - 1;
  for (std::size_t i = a; i < pts.size(); ++i) {
    if (space.dist(y, pts[i]) <= lp.trim) {
      b = i;
      break;
    }
  }
  lp.base.assign(pts.begin() + std::ptrdiff_t(a), pts.begin() + std::ptrdiff_t(b) + 1);
  lp.dec = level_sets(pms, lp.base, double(bands) * w, w);
  lp.good = good_level_search(space, lp.dec, lp.r, lp.s0, k.c, k.n, k.omega);
  return lp;
}

// Shortest path inside band j from B(x, r/4) to B(y, r/4).
std::vector<PointId> band_path(const PathMetricSpace& pms,
                               const LevelSetDecomposition& dec, std::size_t j,
                               PointId x, PointId y, double r) {
  const FiniteMetricSpace& space = pms.base();
  std::vector<char> allowed(space.size(), 0);
  std::vector<PointId> sources;
  for (PointId p : dec.bands[j]) {
    allowed[p] = 1;
    if (space.dist(x, p) < r / 4.0) sources.push_back(p);
  }
  if (sources.empty()) return {};
  SearchOptions opts;
  opts.allowed = &allowed;
  auto tree = dijkstra(space, pms.graph(), sources, opts);
  PointId best = kNoPoint;
  for (PointId p : dec.bands[j]) {
    if (!(space.dist(y, p) < r / 4.0) || tree.dist[p] == kInf) continue;
    if (best == kNoPoint || tree.dist[p] < tree.dist[best] ||
        (tree.dist[p] == tree.dist[best] && space.rank(p) < space.rank(best))) {
      best = p;
    }
  }
  if (best == kNoPoint) return {};
  return trace_path(tree, best);
}

struct Builder {
  const PathMetricSpace& pms;
  const QuasiconvexConstants& k;
  double w;
  QuasiconvexPath& out;
  std::vector<std::vector<PointId>> segments;

  void record(std::size_t depth, double gap, const std::vector<PointId>& seg) {
    if (out.level_gap.size() <= depth) {
      out.level_gap.resize(depth + 1, 0.0);
      out.level_length.resize(depth + 1, 0.0);
    }
    out.level_gap[depth] = std::max(out.level_gap[depth], gap);
    out.level_length[depth] += make_arc(pms.base(), seg).length;
    out.depth = std::max(out.depth, depth);
  }

  void floor_piece(PointId x, PointId y, std::size_t depth) {
    auto path = pms.geodesic(x, y);
    if (path.empty()) throw Disconnected("endpoints not joined in the h-graph");
    record(depth, pms.base().dist(x, y), path);
    if (path.size() > 2) ++out.floor_pieces;
    segments.push_back(std::move(path));
  }

  void connect(PointId x, PointId y, std::size_t depth) {
    const FiniteMetricSpace& space = pms.base();
    if (x == y) return;
    double r = space.dist(x, y);
    if (depth > out.depth_bound) {
      throw std::logic_error("quasiconvex recursion exceeded its depth bound");
    }
    if (r <= pms.h()) {
      record(depth, r, {x, y});
      segments.push_back({x, y});
      return;
    }
    auto lp = prepare(pms, x, y, k, w, 1);
    if (!lp) {
      floor_piece(x, y, depth);
      return;
    }
    if (depth == 0) {
      out.eps = lp->eps;
      out.s0 = lp->s0;
    }
    for (const auto& d : lp->quasiarc.diagnostics) out.diagnostics.push_back(d);
    for (const auto& d : lp->good.diagnostics) out.diagnostics.push_back(d);
    if (lp->quasiarc.certificate.m > k.m) {
      out.diagnostics.push_back({"quasiarc_constant",
                                 "certified M exceeds the supplied constant",
                                 lp->quasiarc.certificate.m, k.m});
    }
    std::vector<std::size_t> order = lp->good.qualifying;
    std::vector<PointId> path;
    for (std::size_t j : order) {
      path = band_path(pms, lp->dec, j, x, y, r);
      BandCheck bc;
      bc.depth = depth;
      bc.from = x;
      bc.to = y;
      bc.t0 = lp->dec.levels[j];
      bc.mu1 = lp->dec.band_length[j];
      bc.threshold = lp->good.threshold;
      bc.connected = !path.empty();
      const auto& label = lp->dec.outside_label[j];
      bc.same_component = label[x] != kNoPoint && label[x] == label[y];
      bc.contained = true;
      double lo = lp->dec.levels[j] - w / 2.0, hi = lp->dec.levels[j] + w / 2.0;
      for (PointId p : path) {
        double d = lp->dec.dist[p];
        if (!(d >= lo && d < hi)) bc.contained = false;
      }
      if (!bc.contained) throw std::logic_error("level path left its band");
      out.bands.push_back(bc);
      if (!path.empty()) break;
    }
    if (path.empty()) {
      out.diagnostics.push_back({"level_band_disconnected",
                                 "no qualifying band joins the two end balls", r,
                                 double(order.size())});
      floor_piece(x, y, depth);
      return;
    }
    ++out.band_pieces;
    PointId a = path.front(), b = path.back();
    connect(x, a, depth + 1);
    record(depth, r, path);
    segments.push_back(path);
    connect(b, y, depth + 1);
  }
};

}  // namespace

QuasiconvexPath quasiconvex_path(const PathMetricSpace& pms, PointId x, PointId y,
                                 const QuasiconvexConstants& constants,
                                 const QuasiconvexOptions& options) {
  const FiniteMetricSpace& space = pms.base();
  if (x == y) throw InvalidInput("quasiconvex path needs distinct endpoints");
  double w = options.band == 0.0 ? 2.0 * space.spacing() : options.band;
  double r = space.dist(x, y);
  QuasiconvexPath out;
  out.floor_radius = std::max((w + pms.h()) / 0.45, 8.0 * pms.h());
  // Each band step leaves gaps below r / 4.
  out.depth_bound =
      std::size_t(std::ceil(std::log2(std::max(2.0, r / pms.h())))) + 1;
  Builder builder{pms, constants, w, out, {}};
  builder.connect(x, y, 0);
  out.arc = extract_arc(space, builder.segments).arc;
  out.ratio = out.arc.length / r;
  if (out.arc.length < r * (1 - 1e-12)) {
    throw std::logic_error("path shorter than the distance of its endpoints");
  }
  return out;
}

DiscreteModulus discrete_modulus(const FiniteMetricSpace& space,
                                 const std::vector<std::vector<PointId>>& family,
                                 const std::vector<double>& mass,
                                 std::size_t sweeps) {
  DiscreteModulus out;
  const std::size_t n = space.size();
  out.density.assign(n, 0.0);
  if (family.empty()) return out;
  // a[g] lists (point, length share) with the share half of each incident edge.
  std::vector<std::vector<std::pair<PointId, double>>> a(family.size());
  for (std::size_t g = 0; g < family.size(); ++g) {
    const auto& path = family[g];
    for (std::size_t i = 0; i < path.size(); ++i) {
      double share = 0.0;
      if (i > 0) share += space.dist(path[i - 1], path[i]) / 2.0;
      if (i + 1 < path.size()) share += space.dist(path[i], path[i + 1]) / 2.0;
      if (share > 0) a[g].emplace_back(path[i], share);
    }
    if (a[g].empty()) throw InvalidInput("path family member has zero length");
  }
  std::vector<double> lam(family.size(), 0.0), c(n, 0.0);
  for (std::size_t sweep = 0; sweep < sweeps; ++sweep) {
    double moved = 0.0;
    for (std::size_t g = 0; g < family.size(); ++g) {
      double grad = 1.0, curv = 0.0;
      for (auto [p, s] : a[g]) {
        grad -= s * c[p] / (2.0 * mass[p]);
        curv += s * s / (2.0 * mass[p]);
      }
      double next = std::max(0.0, lam[g] + grad / curv);
      double delta = next - lam[g];
      if (delta == 0.0) continue;
      for (auto [p, s] : a[g]) c[p] += delta * s;
      lam[g] = next;
      moved = std::max(moved, std::abs(delta));
    }
    if (moved < 1e-14) break;
  }
  double dual = std::accumulate(lam.begin(), lam.end(), 0.0);
  for (PointId p = 0; p < n; ++p) {
    if (c[p] != 0.0) dual -= c[p] * c[p] / (4.0 * mass[p]);
    out.density[p] = c[p] / (2.0 * mass[p]);
  }
  out.lower = std::max(0.0, dual);
  double worst = kInf;
  for (const auto& row : a) {
    double integral = 0.0;
    for (auto [p, s] : row) integral += s * out.density[p];
    worst = std::min(worst, integral);
  }
  double energy = 0.0;
  for (PointId p = 0; p < n; ++p) energy += mass[p] * out.density[p] * out.density[p];
  out.upper = worst > 0 ? energy / (worst * worst) : kInf;
  return out;
}

ModulusBound modulus_lower_bound(const PathMetricSpace& pms, PointId x, PointId y,
                                 const QuasiconvexConstants& k,
                                 const ModulusOptions& options) {
  const FiniteMetricSpace& space = pms.base();
  if (x == y) throw InvalidInput("modulus needs distinct endpoints");
  double w = options.band == 0.0 ? 2.0 * space.spacing() : options.band;
  double r = space.dist(x, y);
  ModulusBound out;
  out.s0 = 5.0 * r / theory_eps(r, k);
  out.analytic = 1.0 / (16.0 * k.c * k.omega * k.omega * k.n * k.n * out.s0 * out.s0);
  std::optional<LevelProblem> lp;
  try {
    lp = prepare(pms, x, y, k, w, options.min_bands);
  } catch (const Disconnected&) {
    out.low_confidence = true;
    out.diagnostics.push_back({"disconnected", "endpoints lie in different components",
                               r, kInf});
    return out;
  }
  if (!lp) {
    out.low_confidence = true;
    out.diagnostics.push_back({"resolution", "no band fits between the end balls",
                               r, std::max((w + pms.h()) / 0.45, 8.0 * pms.h())});
    return out;
  }
  out.diagnostics = lp->good.diagnostics;
  std::set<std::vector<PointId>> seen;
  for (std::size_t j : lp->good.qualifying) {
    auto path = band_path(pms, lp->dec, j, x, y, r);
    if (path.empty() || !seen.insert(path).second) continue;
    out.family.push_back(std::move(path));
    out.family_levels.push_back(lp->dec.levels[j]);
  }
  out.low_confidence = out.family.size() < 3;
  if (out.family.empty()) return out;
  std::vector<double> mass(space.size());
  for (PointId p = 0; p < space.size(); ++p) {
    mass[p] = space.has_weights() ? nonzero(space.weight2(p))
                                  : space.spacing() * space.spacing();
  }
  auto mod = discrete_modulus(space, out.family, mass, options.sweeps);
  out.numerical = mod.lower;
  out.primal = mod.upper;
  // Weighted co-area inequality at the dual density.
  for (const auto& path : out.family) {
    double inner = 0.0;
    for (std::size_t i = 0; i < path.size(); ++i) {
      double share = 0.0;
      if (i > 0) share += space.dist(path[i - 1], path[i]) / 2.0;
      if (i + 1 < path.size()) share += space.dist(path[i], path[i + 1]) / 2.0;
      inner += share * mod.density[path[i]] * mod.density[path[i]];
    }
    out.coarea_lhs += inner * w;
  }
  for (PointId p = 0; p < space.size(); ++p) {
    out.coarea_rhs += mass[p] * mod.density[p] * mod.density[p];
  }
  out.coarea_rhs *= k.omega;
  out.coarea_holds = out.coarea_lhs <= out.coarea_rhs * (1 + 1e-12);
  if (!out.coarea_holds) {
    out.diagnostics.push_back({"weighted_coarea",
                               "dual density breaks the weighted co-area bound",
                               out.coarea_lhs, out.coarea_rhs});
  }
  return out;
}

ConstantsEstimate estimate_constants(const PathMetricSpace& pms, ScaleWindow window,
                                     const Budget& budget) {
  const FiniteMetricSpace& space = pms.base();
  ConstantsEstimate est;
  auto everything = all_points(space);
  est.assouad = assouad_estimate(space, everything, window, budget);
  est.regularity = ahlfors_estimate(space, everything, window, budget);
  est.regularity.q = est.assouad.q;
  est.regularity.d = est.assouad.d;
  est.llc = llc_estimate(pms, everything, window, budget);
  est.turning = bounded_turning_constant(pms, everything, window);
  est.omega = calibrate_omega(pms, 5, budget.seed, 0.0, window.hi / 2.0);
  auto& k = est.constants;
  k.c = est.regularity.c_ahlfors;
  k.lambda = std::max(est.llc.lambda1, est.llc.lambda2);
  k.q = std::max(1.0, std::ceil(est.assouad.q - 1e-9));
  k.assouad_constant = est.assouad.d;
  k.turning = est.turning.lambda;
  k.n = containment_factor(k.turning, k.assouad_constant, k.q);
  k.omega = est.omega.omega;
  // M from quasiarcs between sampled pairs at one eighth of their distance.
  auto centers = sample_centers(space, everything, std::max<std::size_t>(4, budget.centers / 4),
                                budget.seed + 1);
  double m = 1.0;
  for (std::size_t i = 0; i + 1 < centers.size(); i += 2) {
    PointId a = centers[i], b = centers[i + 1];
    double d = space.dist(a, b);
    if (!(d > 2.0 * pms.h())) continue;
    double eps = std::max(d / 8.0, pms.h());
    auto qa = build_quasiarc(pms, a, b, eps, k.q,
                             QuasiarcConstants{k.turning, k.assouad_constant});
    m = std::max(m, qa.certificate.m);
    ++est.quasiarcs;
  }
  k.m = m;
  est.caveat =
      "lambda is the LLC surrogate for linear local contractibility; constants "
      "derived from it differ from the contractibility ones by an unquantified factor";
  return est;
}

}  // namespace quasidisk
