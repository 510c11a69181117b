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

#include "quasidisk/space.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <queue>
#include <random>
#include <sstream>
#include <tuple>

namespace quasidisk {

namespace {

bool indexable(const DistanceSource& s) {
  return (s.kind == MetricKind::kEuclidean || s.kind == MetricKind::kManhattan ||
          s.kind == MetricKind::kSnowflake) &&
         s.dim >= 1 && s.dim <= 3;
}

std::string pair_text(std::size_t a, std::size_t b) {
  std::ostringstream out;
  out << "(" << a << ", " << b << ")";
  return out.str();
}

}  // namespace

std::size_t DistanceSource::size() const {
  if (kind == MetricKind::kMatrix) {
    return static_cast<std::size_t>(std::llround(std::sqrt(double(matrix.size()))));
  }
  return dim > 0 ? coords.size() / static_cast<std::size_t>(dim) : 0;
}

DistanceSource coordinate_source(int dim, std::vector<double> coords,
                                 MetricKind kind) {
  if (dim < 1) throw InvalidInput("coordinate dimension must be positive");
  if (coords.size() % static_cast<std::size_t>(dim) != 0) {
    throw InvalidInput("coordinate list length is not a multiple of dim");
  }
  if (kind != MetricKind::kEuclidean && kind != MetricKind::kManhattan) {
    throw InvalidInput("coordinate_source takes Euclidean or Manhattan");
  }
  for (double c : coords) {
    if (!std::isfinite(c)) throw InvalidInput("non-finite coordinate");
  }
  DistanceSource s;
  s.kind = kind;
  s.dim = dim;
  s.coords = std::move(coords);
  return s;
}

DistanceSource matrix_source(std::size_t n, std::vector<double> m) {
  if (m.size() != n * n) throw InvalidInput("matrix is not n x n");
  for (std::size_t i = 0; i < n; ++i) {
    if (m[i * n + i] != 0.0) {
      throw InvalidInput("nonzero diagonal at " + std::to_string(i));
    }
    for (std::size_t j = i + 1; j < n; ++j) {
      double a = m[i * n + j];
      double b = m[j * n + i];
      if (!std::isfinite(a) || !std::isfinite(b)) {
        throw InvalidInput("non-finite distance at " + pair_text(i, j));
      }
      if (a < 0 || b < 0) {
        throw InvalidInput("negative distance at " + pair_text(i, j));
      }
      if (std::abs(a - b) > 1e-9 * std::max(a, b)) {
        throw InvalidInput("asymmetric distance at " + pair_text(i, j));
      }
      if (a == 0 || b == 0) {
        throw InvalidInput("zero distance between distinct points " +
                           pair_text(i, j));
      }
      double s = 0.5 * (a + b);
      m[i * n + j] = s;
      m[j * n + i] = s;
    }
  }
  DistanceSource s;
  s.kind = MetricKind::kMatrix;
  s.dim = 0;
  s.matrix = std::move(m);
  return s;
}

DistanceSource edge_list_source(std::size_t n,
                                const std::vector<WeightedEdge>& edges) {
  std::vector<std::vector<std::pair<PointId, double>>> adj(n);
  for (const auto& e : edges) {
    if (e.a >= n || e.b >= n) throw InvalidInput("edge endpoint out of range");
    if (!(e.length > 0) || !std::isfinite(e.length)) {
      throw InvalidInput("edge lengths must be positive");
    }
    if (e.a == e.b) continue;
    adj[e.a].emplace_back(e.b, e.length);
    adj[e.b].emplace_back(e.a, e.length);
  }
  std::vector<double> m(n * n, kInf);
  using Item = std::pair<double, PointId>;
  for (std::size_t s = 0; s < n; ++s) {
    double* row = m.data() + s * n;
    row[s] = 0.0;
    std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
    pq.emplace(0.0, static_cast<PointId>(s));
    while (!pq.empty()) {
      auto [d, u] = pq.top();
      pq.pop();
      if (d > row[u]) continue;
      for (auto [v, w] : adj[u]) {
        double nd = d + w;
        if (nd < row[v]) {
          row[v] = nd;
          pq.emplace(nd, v);
        }
      }
    }
    for (std::size_t t = 0; t < n; ++t) {
      if (row[t] == kInf) {
        throw Disconnected("edge list is disconnected: no path " +
                           pair_text(s, t));
      }
    }
  }
  return matrix_source(n, std::move(m));
}

double FiniteMetricSpace::raw_dist(PointId a, PointId b) const {
  const auto& s = source_;
  switch (s.kind) {
    case MetricKind::kMatrix:
      return s.matrix[std::size_t(a) * n_ + b];
    case MetricKind::kCone: {
      double ra = s.coords[2 * std::size_t(a)];
      double ta = s.coords[2 * std::size_t(a) + 1];
      double rb = s.coords[2 * std::size_t(b)];
      double tb = s.coords[2 * std::size_t(b) + 1];
      double phi = std::abs(ta - tb);
      phi = std::min(phi, s.cone_angle - phi);
      if (phi >= std::numbers::pi) return ra + rb;
      double sq = ra * ra + rb * rb - 2.0 * ra * rb * std::cos(phi);
      return std::sqrt(std::max(0.0, sq));
    }
    default:
      break;
  }
  const double* x = s.coords.data() + std::size_t(a) * s.dim;
  const double* y = s.coords.data() + std::size_t(b) * s.dim;
  if (s.kind == MetricKind::kManhattan) {
    double acc = 0.0;
    for (int k = 0; k < s.dim; ++k) acc += std::abs(x[k] - y[k]);
    return acc;
  }
  double acc = 0.0;
  for (int k = 0; k < s.dim; ++k) {
    double t = x[k] - y[k];
    acc += t * t;
  }
  double e = std::sqrt(acc);
  return s.kind == MetricKind::kSnowflake ? std::pow(e, s.exponent) : e;
}

double FiniteMetricSpace::dist(PointId a, PointId b) const {
  if (a == b) return 0.0;
  return scale_ * raw_dist(a, b);
}

double FiniteMetricSpace::coord_radius(double r) const {
  double base = r / scale_;
  if (source_.kind == MetricKind::kSnowflake) {
    return std::pow(base, 1.0 / source_.exponent);
  }
  return base;
}

void FiniteMetricSpace::build_index() {
  index_.reset();
  if (!indexable(source_) || n_ == 0) return;
  auto idx = std::make_shared<GridIndex>();
  int dim = source_.dim;
  idx->dim = dim;
  double hi[3] = {0, 0, 0};
  for (int k = 0; k < dim; ++k) {
    idx->lo[k] = kInf;
    hi[k] = -kInf;
  }
  for (std::size_t i = 0; i < n_; ++i) {
    for (int k = 0; k < dim; ++k) {
      double c = source_.coords[i * dim + k];
      idx->lo[k] = std::min(idx->lo[k], c);
      hi[k] = std::max(hi[k], c);
    }
  }
  double volume = 1.0;
  int live = 0;
  double longest = 0.0;
  for (int k = 0; k < dim; ++k) {
    double ext = hi[k] - idx->lo[k];
    longest = std::max(longest, ext);
    if (ext > 0) {
      volume *= ext;
      ++live;
    }
  }
  double cell = live > 0 ? std::pow(volume / double(n_), 1.0 / live) : 1.0;
  if (!(cell > 0)) cell = longest > 0 ? longest : 1.0;
  // Keep the dense grid below ~4n cells.
  for (;;) {
    double cells = 1.0;
    for (int k = 0; k < dim; ++k) {
      cells *= std::floor((hi[k] - idx->lo[k]) / cell) + 1.0;
    }
    if (cells <= 4.0 * double(n_) + 8.0) break;
    cell *= 1.5;
  }
  idx->cell = cell;
  std::size_t total = 1;
  for (int k = 0; k < dim; ++k) {
    idx->extent[k] = int(std::floor((hi[k] - idx->lo[k]) / cell)) + 1;
    total *= std::size_t(idx->extent[k]);
  }
  auto cell_of = [&](std::size_t i) {
    std::size_t key = 0;
    for (int k = dim - 1; k >= 0; --k) {
      int c = int(std::floor((source_.coords[i * dim + k] - idx->lo[k]) / cell));
      c = std::clamp(c, 0, idx->extent[k] - 1);
      key = key * std::size_t(idx->extent[k]) + std::size_t(c);
    }
    return key;
  };
  idx->start.assign(total + 1, 0);
  std::vector<std::size_t> keys(n_);
  for (std::size_t i = 0; i < n_; ++i) {
    keys[i] = cell_of(i);
    ++idx->start[keys[i] + 1];
  }
  for (std::size_t c = 0; c < total; ++c) idx->start[c + 1] += idx->start[c];
  idx->items.resize(n_);
  std::vector<std::uint32_t> fill(idx->start.begin(), idx->start.end() - 1);
  for (std::size_t i = 0; i < n_; ++i) {
    idx->items[fill[keys[i]]++] = static_cast<PointId>(i);
  }
  index_ = std::move(idx);
}

void FiniteMetricSpace::for_each_in_ball(
    PointId center, double r, bool closed,
    const std::function<void(PointId, double)>& fn) const {
  auto visit = [&](PointId q) {
    double d = dist(center, q);
    if (closed ? d <= r : d < r) fn(q, d);
  };
  if (!index_) {
    for (std::size_t q = 0; q < n_; ++q) visit(static_cast<PointId>(q));
    return;
  }
  const GridIndex& g = *index_;
  double e = coord_radius(r);
  e = e * (1.0 + 1e-12) + 1e-300;
  int lo[3] = {0, 0, 0};
  int hi[3] = {0, 0, 0};
  double span = 1.0;
  for (int k = 0; k < g.dim; ++k) {
    double c = source_.coords[std::size_t(center) * g.dim + k];
    double a = std::floor((c - e - g.lo[k]) / g.cell);
    double b = std::floor((c + e - g.lo[k]) / g.cell);
    a = std::clamp(a, 0.0, double(g.extent[k] - 1));
    b = std::clamp(b, 0.0, double(g.extent[k] - 1));
    lo[k] = int(a);
    hi[k] = int(b);
    span *= double(hi[k] - lo[k] + 1);
  }
  if (span * 0.5 > double(n_)) {
    for (std::size_t q = 0; q < n_; ++q) visit(static_cast<PointId>(q));
    return;
  }
  int ex1 = g.dim > 1 ? g.extent[1] : 1;
  int ex0 = g.extent[0];
  for (int z = lo[2]; z <= hi[2]; ++z) {
    for (int y = lo[1]; y <= hi[1]; ++y) {
      std::size_t row = (std::size_t(z) * ex1 + std::size_t(y)) * ex0;
      for (int x = lo[0]; x <= hi[0]; ++x) {
        std::size_t c = row + std::size_t(x);
        for (std::uint32_t k = g.start[c]; k < g.start[c + 1]; ++k) {
          visit(g.items[k]);
        }
      }
    }
  }
}

std::vector<PointId> FiniteMetricSpace::ball(PointId center, double r,
                                             bool closed) const {
  std::vector<PointId> out;
  for_each_in_ball(center, r, closed, [&](PointId q, double) { out.push_back(q); });
  std::sort(out.begin(), out.end(),
            [&](PointId a, PointId b) { return rank_[a] < rank_[b]; });
  return out;
}

void FiniteMetricSpace::compute_rank() {
  order_.resize(n_);
  std::iota(order_.begin(), order_.end(), PointId{0});
  if (has_chart()) {
    std::stable_sort(order_.begin(), order_.end(), [&](PointId a, PointId b) {
      return std::tie(chart_[a].u, chart_[a].v) < std::tie(chart_[b].u, chart_[b].v);
    });
  } else if (source_.kind != MetricKind::kMatrix) {
    int dim = source_.dim;
    const double* c = source_.coords.data();
    std::stable_sort(order_.begin(), order_.end(), [&](PointId a, PointId b) {
      return std::lexicographical_compare(c + std::size_t(a) * dim,
                                          c + std::size_t(a + 1) * dim,
                                          c + std::size_t(b) * dim,
                                          c + std::size_t(b + 1) * dim);
    });
  } else {
    std::vector<double> sums(n_, 0.0);
    for (std::size_t i = 0; i < n_; ++i) {
      std::vector<double> row(source_.matrix.begin() + i * n_,
                              source_.matrix.begin() + (i + 1) * n_);
      std::sort(row.begin(), row.end());
      for (double v : row) sums[i] += v;
    }
    std::stable_sort(order_.begin(), order_.end(),
                     [&](PointId a, PointId b) { return sums[a] < sums[b]; });
  }
  rank_.resize(n_);
  for (std::size_t i = 0; i < n_; ++i) rank_[order_[i]] = std::uint32_t(i);
}

double FiniteMetricSpace::median_nn_spacing() const {
  if (n_ < 2) return 0.0;
  std::vector<double> nn(n_, kInf);
  double probe = index_ ? index_->cell * scale_ : kInf;
  if (source_.kind == MetricKind::kSnowflake && index_) {
    probe = scale_ * std::pow(index_->cell, source_.exponent);
  }
  for (std::size_t i = 0; i < n_; ++i) {
    double best = kInf;
    double r = probe;
    for (;;) {
      for_each_in_ball(PointId(i), r, true, [&](PointId q, double d) {
        if (q != i) best = std::min(best, d);
      });
      if (best < kInf || r == kInf) break;
      r *= 2.0;
    }
    if (best == 0.0) {
      throw InvalidInput("duplicate points at id " + std::to_string(i));
    }
    nn[i] = best;
  }
  auto mid = nn.begin() + std::ptrdiff_t(n_ / 2);
  std::nth_element(nn.begin(), mid, nn.end());
  return *mid;
}

void FiniteMetricSpace::audit(const SpaceOptions& options) const {
  auto check = [&](PointId a, PointId b, PointId c) {
    double ab = dist(a, b), bc = dist(b, c), ac = dist(a, c);
    double tol = options.audit_tolerance * std::max({ab, bc, ac});
    if (ac > ab + bc + tol || ab > ac + bc + tol || bc > ab + ac + tol) {
      std::ostringstream msg;
      msg << "triangle inequality fails on (" << a << ", " << b << ", " << c
          << ")";
      throw InvalidInput(msg.str());
    }
  };
  if (n_ < 3) return;
  if (n_ < options.full_audit_below) {
    for (PointId a = 0; a < n_; ++a) {
      for (PointId b = a + 1; b < n_; ++b) {
        for (PointId c = b + 1; c < n_; ++c) check(a, b, c);
      }
    }
    return;
  }
  std::mt19937_64 rng(options.audit_seed);
  std::uniform_int_distribution<PointId> pick(0, PointId(n_ - 1));
  for (std::size_t k = 0; k < options.audit_samples; ++k) {
    PointId a = pick(rng), b = pick(rng), c = pick(rng);
    if (a == b || b == c || a == c) continue;
    check(a, b, c);
  }
}

FiniteMetricSpace build_space(DistanceSource source, std::vector<Vec2> chart,
                              std::vector<double> weight2,
                              const SpaceOptions& options) {
  FiniteMetricSpace s;
  s.n_ = source.size();
  if (source.kind == MetricKind::kMatrix && s.n_ * s.n_ != source.matrix.size()) {
    throw InvalidInput("matrix is not square");
  }
  if (source.kind == MetricKind::kCone) {
    if (source.dim != 2) throw InvalidInput("cone coordinates are (r, theta)");
    if (!(source.cone_angle > 0)) throw InvalidInput("cone angle must be positive");
  }
  if (source.kind == MetricKind::kSnowflake &&
      !(source.exponent > 0 && source.exponent <= 1)) {
    throw InvalidInput("snowflake exponent must lie in (0, 1]");
  }
  if (!chart.empty() && chart.size() != s.n_) {
    throw InvalidInput("chart size does not match point count");
  }
  if (!weight2.empty() && weight2.size() != s.n_) {
    throw InvalidInput("weight count does not match point count");
  }
  for (double w : weight2) {
    if (!(w >= 0) || !std::isfinite(w)) throw InvalidInput("bad area weight");
  }
  s.source_ = std::move(source);
  s.chart_ = std::move(chart);
  s.weight2_ = std::move(weight2);
  if (s.has_chart()) {
    std::vector<Vec2> sorted = s.chart_;
    std::sort(sorted.begin(), sorted.end(), [](Vec2 a, Vec2 b) {
      return std::tie(a.u, a.v) < std::tie(b.u, b.v);
    });
    for (std::size_t i = 1; i < sorted.size(); ++i) {
      if (sorted[i].u == sorted[i - 1].u && sorted[i].v == sorted[i - 1].v) {
        throw InvalidInput("chart is not injective");
      }
    }
  }
  s.build_index();
  s.compute_rank();
  s.spacing_ = s.median_nn_spacing();
  if (options.connect_radius) {
    if (!(*options.connect_radius > 0)) {
      throw InvalidInput("connect radius must be positive");
    }
    s.h_ = *options.connect_radius;
  } else {
    s.h_ = 3.0 * s.spacing_;
  }
  if (options.audit) s.audit(options);
  return s;
}

double FiniteMetricSpace::diameter_estimate() const {
  if (n_ < 2) return 0.0;
  auto farthest = [&](PointId from) {
    PointId best = from;
    double bd = -1.0;
    for (PointId q : order_) {
      double d = dist(from, q);
      if (d > bd) {
        bd = d;
        best = q;
      }
    }
    return std::make_pair(best, bd);
  };
  auto [a, da] = farthest(order_.front());
  auto [b, db] = farthest(a);
  (void)b;
  return std::max(da, db);
}

FiniteMetricSpace FiniteMetricSpace::rescaled(double s) const {
  if (!(s > 0)) throw InvalidInput("scale factor must be positive");
  FiniteMetricSpace out = *this;
  out.scale_ *= s;
  out.h_ *= s;
  out.spacing_ *= s;
  for (double& w : out.weight2_) w *= s * s;
  return out;
}

FiniteMetricSpace FiniteMetricSpace::permuted(const std::vector<PointId>& perm) const {
  if (perm.size() != n_) throw InvalidInput("permutation size mismatch");
  std::vector<PointId> inverse(n_, kNoPoint);
  for (std::size_t i = 0; i < n_; ++i) {
    if (perm[i] >= n_ || inverse[perm[i]] != kNoPoint) {
      throw InvalidInput("not a permutation");
    }
    inverse[perm[i]] = PointId(i);
  }
  return subspace(inverse);
}

FiniteMetricSpace FiniteMetricSpace::subspace(const std::vector<PointId>& ids) const {
  FiniteMetricSpace out;
  out.n_ = ids.size();
  out.scale_ = scale_;
  out.h_ = h_;
  out.spacing_ = spacing_;
  out.source_.kind = source_.kind;
  out.source_.dim = source_.dim;
  out.source_.exponent = source_.exponent;
  out.source_.cone_angle = source_.cone_angle;
  if (source_.kind == MetricKind::kMatrix) {
    out.source_.matrix.resize(out.n_ * out.n_);
    for (std::size_t i = 0; i < out.n_; ++i) {
      for (std::size_t j = 0; j < out.n_; ++j) {
        out.source_.matrix[i * out.n_ + j] =
            source_.matrix[std::size_t(ids[i]) * n_ + ids[j]];
      }
    }
  } else {
    int dim = source_.dim;
    out.source_.coords.resize(out.n_ * std::size_t(dim));
    for (std::size_t i = 0; i < out.n_; ++i) {
      for (int k = 0; k < dim; ++k) {
        out.source_.coords[i * dim + k] = source_.coords[std::size_t(ids[i]) * dim + k];
      }
    }
  }
  if (has_chart()) {
    out.chart_.resize(out.n_);
    for (std::size_t i = 0; i < out.n_; ++i) out.chart_[i] = chart_[ids[i]];
  }
  if (has_weights()) {
    out.weight2_.resize(out.n_);
    for (std::size_t i = 0; i < out.n_; ++i) out.weight2_[i] = weight2_[ids[i]];
  }
  out.build_index();
  out.compute_rank();
  return out;
}

NeighborGraph::NeighborGraph(const FiniteMetricSpace& space, double radius)
    : radius_(radius) {
  std::size_t n = space.size();
  offsets_.assign(n + 1, 0);
  std::vector<std::pair<PointId, double>> row;
  for (PointId p = 0; p < n; ++p) {
    row.clear();
    space.for_each_in_ball(p, radius, true, [&](PointId q, double d) {
      if (q != p) row.emplace_back(q, d);
    });
    std::sort(row.begin(), row.end(), [&](const auto& a, const auto& b) {
      return space.rank(a.first) < space.rank(b.first);
    });
    for (const auto& [q, d] : row) {
      targets_.push_back(q);
      lengths_.push_back(d);
    }
    offsets_[p + 1] = targets_.size();
  }
}

ShortestPathTree dijkstra(const FiniteMetricSpace& space,
                          const NeighborGraph& graph,
                          const std::vector<PointId>& sources,
                          const SearchOptions& options) {
  std::size_t n = graph.size();
  ShortestPathTree t;
  t.dist.assign(n, kInf);
  t.parent.assign(n, kNoPoint);
  t.hops.assign(n, std::numeric_limits<std::uint32_t>::max());
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
  std::vector<char> done(n, 0);
  auto usable = [&](PointId p) {
    return options.allowed == nullptr || (*options.allowed)[p];
  };
  for (PointId s : sources) {
    if (!usable(s)) continue;
    double d0 = options.node_cost ? (*options.node_cost)[s] : 0.0;
    if (d0 < t.dist[s]) {
      t.dist[s] = d0;
      t.hops[s] = 0;
      pq.push({d0, 0, space.rank(s), s});
    }
  }
  const bool lengths = options.node_cost == nullptr;
  while (!pq.empty()) {
    Item it = pq.top();
    pq.pop();
    PointId u = it.id;
    if (done[u] || it.d != t.dist[u] || it.hops != t.hops[u]) continue;
    done[u] = 1;
    if (u == options.target) break;
    auto nb = graph.neighbors(u);
    auto len = graph.lengths(u);
    for (std::size_t k = 0; k < nb.size(); ++k) {
      PointId v = nb[k];
      if (done[v] || !usable(v)) continue;
      double nd = t.dist[u] + (lengths ? len[k] : (*options.node_cost)[v]);
      if (nd > options.max_dist) continue;
      std::uint32_t nh = t.hops[u] + 1;
      if (nd < t.dist[v] || (nd == t.dist[v] && nh < t.hops[v])) {
        t.dist[v] = nd;
        t.hops[v] = nh;
        t.parent[v] = u;
        pq.push({nd, nh, space.rank(v), v});
      }
    }
  }
  return t;
}

std::vector<PointId> trace_path(const ShortestPathTree& tree, PointId target) {
  std::vector<PointId> path;
  if (target >= tree.dist.size() || tree.dist[target] == kInf) return path;
  for (PointId p = target; p != kNoPoint; p = tree.parent[p]) path.push_back(p);
  std::reverse(path.begin(), path.end());
  return path;
}

std::vector<std::vector<PointId>> connected_components(
    const FiniteMetricSpace& space, const NeighborGraph& graph,
    const std::vector<char>* allowed) {
  std::vector<std::vector<PointId>> comps;
  std::vector<char> seen(graph.size(), 0);
  for (PointId s : space.canonical_order()) {
    if (seen[s] || (allowed && !(*allowed)[s])) continue;
    std::vector<PointId> comp{s};
    seen[s] = 1;
    for (std::size_t head = 0; head < comp.size(); ++head) {
      for (PointId v : graph.neighbors(comp[head])) {
        if (seen[v] || (allowed && !(*allowed)[v])) continue;
        seen[v] = 1;
        comp.push_back(v);
      }
    }
    std::sort(comp.begin(), comp.end(), [&](PointId a, PointId b) {
      return space.rank(a) < space.rank(b);
    });
    comps.push_back(std::move(comp));
  }
  return comps;
}

PathMetricSpace::PathMetricSpace(std::shared_ptr<const FiniteMetricSpace> base,
                                 double h)
    : base_(std::move(base)) {
  if (!(h > 0)) throw InvalidInput("path metric radius must be positive");
  graph_ = NeighborGraph(*base_, h);
}

PathMetricSpace::PathMetricSpace(std::shared_ptr<const FiniteMetricSpace> base)
    : PathMetricSpace(base, base->connect_radius()) {}

double PathMetricSpace::d_prime(PointId a, PointId b) const {
  if (a == b) return 0.0;
  SearchOptions opt;
  opt.target = b;
  return dijkstra(*base_, graph_, {a}, opt).dist[b];
}

std::vector<double> PathMetricSpace::distances_from(PointId a) const {
  return dijkstra(*base_, graph_, {a}).dist;
}

std::vector<double> PathMetricSpace::distances_from(
    const std::vector<PointId>& sources) const {
  return dijkstra(*base_, graph_, sources).dist;
}

std::vector<PointId> PathMetricSpace::geodesic(PointId a, PointId b,
                                               const std::vector<char>* allowed) const {
  SearchOptions opt;
  opt.target = b;
  opt.allowed = allowed;
  return trace_path(dijkstra(*base_, graph_, {a}, opt), b);
}

double PathMetricSpace::path_length(const std::vector<PointId>& path) const {
  double total = 0.0;
  for (std::size_t i = 1; i < path.size(); ++i) {
    total += base_->dist(path[i - 1], path[i]);
  }
  return total;
}

QuasiconvexityReport PathMetricSpace::quasiconvexity(std::size_t sources,
                                                     std::uint64_t seed) const {
  QuasiconvexityReport rep;
  std::vector<PointId> pool = base_->canonical_order();
  if (pool.size() > 400 && pool.size() > sources) {
    std::mt19937_64 rng(seed);
    std::shuffle(pool.begin(), pool.end(), rng);
    pool.resize(sources);
  }
  for (PointId s : pool) {
    auto d = distances_from(s);
    for (PointId t = 0; t < d.size(); ++t) {
      if (t == s) continue;
      ++rep.pairs;
      if (d[t] == kInf) {
        ++rep.disconnected_pairs;
        rep.factor = kInf;
        continue;
      }
      double ratio = d[t] / base_->dist(s, t);
      if (ratio > rep.factor ||
          (ratio == rep.factor && rep.worst_a != kNoPoint &&
           std::make_pair(base_->rank(s), base_->rank(t)) <
               std::make_pair(base_->rank(rep.worst_a), base_->rank(rep.worst_b)))) {
        rep.factor = ratio;
        rep.worst_a = s;
        rep.worst_b = t;
      }
    }
  }
  return rep;
}

std::vector<PointId> all_points(const FiniteMetricSpace& space) {
  std::vector<PointId> ids(space.size());
  std::iota(ids.begin(), ids.end(), PointId{0});
  return ids;
}

Net maximal_net(const FiniteMetricSpace& space, double eps,
                std::optional<std::uint64_t> seed,
                const std::vector<PointId>* subset) {
  if (!(eps > 0)) throw InvalidInput("net scale must be positive");
  std::size_t n = space.size();
  std::vector<char> in(n, subset ? 0 : 1);
  if (subset) {
    for (PointId p : *subset) in[p] = 1;
  }
  std::vector<PointId> sweep;
  sweep.reserve(subset ? subset->size() : n);
  for (PointId p : space.canonical_order()) {
    if (in[p]) sweep.push_back(p);
  }
  if (seed) {
    std::mt19937_64 rng(*seed);
    std::shuffle(sweep.begin(), sweep.end(), rng);
  }
  Net net;
  net.scale = eps;
  std::vector<char> covered(n, 0);
  for (PointId p : sweep) {
    if (covered[p]) continue;
    net.members.push_back(p);
    space.for_each_in_ball(p, eps, false, [&](PointId q, double) {
      if (in[q]) covered[q] = 1;
    });
  }
  net.assignment.assign(n, kNoPoint);
  std::vector<double> best(n, kInf);
  for (PointId m : net.members) {
    space.for_each_in_ball(m, eps, false, [&](PointId q, double d) {
      if (!in[q]) return;
      if (d < best[q] || (d == best[q] && space.rank(m) < space.rank(net.assignment[q]))) {
        best[q] = d;
        net.assignment[q] = m;
      }
    });
  }
  return net;
}

std::size_t covering_number(const FiniteMetricSpace& space,
                            const std::vector<PointId>& subset, double eps) {
  if (subset.empty()) return 0;
  std::vector<char> in(space.size(), 0);
  for (PointId p : subset) in[p] = 1;
  std::vector<PointId> sweep = subset;
  std::sort(sweep.begin(), sweep.end(),
            [&](PointId a, PointId b) { return space.rank(a) < space.rank(b); });
  std::vector<char> covered(space.size(), 0);
  std::size_t count = 0;
  for (PointId p : sweep) {
    if (covered[p]) continue;
    ++count;
    space.for_each_in_ball(p, eps, false, [&](PointId q, double) {
      if (in[q]) covered[q] = 1;
    });
  }
  return count;
}

double hausdorff_proxy(const FiniteMetricSpace& space, int q,
                       const std::vector<PointId>& subset, double eps) {
  if (q != 1 && q != 2) throw InvalidInput("proxy dimension must be 1 or 2");
  if (subset.empty()) return 0.0;
  if (q == 2 && space.has_weights()) {
    double total = 0.0;
    for (PointId p : subset) total += space.weight2(p);
    return total;
  }
  double count = double(covering_number(space, subset, eps));
  return q == 1 ? count * eps : count * eps * eps;
}

}  // namespace quasidisk
