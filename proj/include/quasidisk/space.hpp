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

#ifndef QUASIDISK_SPACE_HPP_
#define QUASIDISK_SPACE_HPP_

#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "quasidisk/core.hpp"

namespace quasidisk {

enum class MetricKind {
  kEuclidean,  // coordinates, l2
  kManhattan,  // coordinates, l1
  kSnowflake,  // coordinates, (l2)^alpha
  kCone,       // polar (r, theta) on a flat cone of total angle cone_angle
  kMatrix,     // dense n x n
};

struct DistanceSource {
  MetricKind kind = MetricKind::kEuclidean;
  int dim = 2;
  std::vector<double> coords;  // row-major n x dim; cone: (r, theta)
  std::vector<double> matrix;  // row-major n x n
  double exponent = 1.0;
  double cone_angle = 0.0;

  std::size_t size() const;
};

struct WeightedEdge {
  PointId a;
  PointId b;
  double length;
};

DistanceSource coordinate_source(int dim, std::vector<double> coords,
                                 MetricKind kind = MetricKind::kEuclidean);
DistanceSource matrix_source(std::size_t n, std::vector<double> matrix);
// Completes an edge list to a full metric by all-pairs shortest paths.
// Throws Disconnected if the graph has more than one component.
DistanceSource edge_list_source(std::size_t n,
                                const std::vector<WeightedEdge>& edges);

struct SpaceOptions {
  std::optional<double> connect_radius;  // defaults to 3x median NN spacing
  bool audit = true;
  std::size_t audit_samples = 100000;
  std::size_t full_audit_below = 300;
  double audit_tolerance = 1e-9;
  std::uint64_t audit_seed = 0x9e3779b97f4a7c15ULL;
};

class FiniteMetricSpace {
 public:
  FiniteMetricSpace() = default;

  std::size_t size() const { return n_; }
  MetricKind kind() const { return source_.kind; }
  const DistanceSource& source() const { return source_; }
  double scale() const { return scale_; }

  double dist(PointId a, PointId b) const;

  bool has_chart() const { return !chart_.empty(); }
  const std::vector<Vec2>& chart() const { return chart_; }
  Vec2 chart_at(PointId p) const { return chart_[p]; }

  bool has_weights() const { return !weight2_.empty(); }
  const std::vector<double>& weights() const { return weight2_; }
  double weight2(PointId p) const { return weight2_[p]; }

  double connect_radius() const { return h_; }
  double spacing() const { return spacing_; }

  // Position of p in the geometric canonical order. All tie-breaks and greedy
  // sweeps go through this, so results do not depend on point ids.
  std::uint32_t rank(PointId p) const { return rank_[p]; }
  const std::vector<PointId>& canonical_order() const { return order_; }

  // Points with dist(center, q) <= r (closed) or < r (open), sorted by rank.
  std::vector<PointId> ball(PointId center, double r, bool closed = true) const;
  void for_each_in_ball(PointId center, double r, bool closed,
                        const std::function<void(PointId, double)>& fn) const;

  double diameter_estimate() const;

  FiniteMetricSpace rescaled(double s) const;
  // new_id = perm[old_id]
  FiniteMetricSpace permuted(const std::vector<PointId>& perm) const;
  // Induced subspace; h and spacing are inherited. ids[i] becomes point i.
  FiniteMetricSpace subspace(const std::vector<PointId>& ids) const;

  friend FiniteMetricSpace build_space(DistanceSource source,
                                       std::vector<Vec2> chart,
                                       std::vector<double> weight2,
                                       const SpaceOptions& options);

 private:
  struct GridIndex {
    int dim = 0;
    double cell = 0.0;
    double lo[3] = {0, 0, 0};
    int extent[3] = {1, 1, 1};
    std::vector<std::uint32_t> start;
    std::vector<PointId> items;
  };

  double raw_dist(PointId a, PointId b) const;
  double coord_radius(double r) const;
  void build_index();
  void compute_rank();
  double median_nn_spacing() const;
  void audit(const SpaceOptions& options) const;

  std::size_t n_ = 0;
  DistanceSource source_;
  double scale_ = 1.0;
  std::vector<Vec2> chart_;
  std::vector<double> weight2_;
  double h_ = 0.0;
  double spacing_ = 0.0;
  std::vector<std::uint32_t> rank_;
  std::vector<PointId> order_;
  std::shared_ptr<const GridIndex> index_;
};

FiniteMetricSpace build_space(DistanceSource source, std::vector<Vec2> chart = {},
                              std::vector<double> weight2 = {},
                              const SpaceOptions& options = {});

// Compressed adjacency of the r-neighbourhood graph, neighbours sorted by rank.
class NeighborGraph {
 public:
  NeighborGraph() = default;
  NeighborGraph(const FiniteMetricSpace& space, double radius);

  std::size_t size() const { return offsets_.empty() ? 0 : offsets_.size() - 1; }
  double radius() const { return radius_; }
  std::span<const PointId> neighbors(PointId p) const {
    return {targets_.data() + offsets_[p], offsets_[p + 1] - offsets_[p]};
  }
  std::span<const double> lengths(PointId p) const {
    return {lengths_.data() + offsets_[p], offsets_[p + 1] - offsets_[p]};
  }
  std::size_t edge_count() const { return targets_.size() / 2; }

 private:
  double radius_ = 0.0;
  std::vector<std::size_t> offsets_;
  std::vector<PointId> targets_;
  std::vector<double> lengths_;
};

struct SearchOptions {
  const std::vector<char>* allowed = nullptr;  // vertex mask, 1 = usable
  double max_dist = kInf;
  PointId target = kNoPoint;                  // stop once settled
  const std::vector<double>* node_cost = nullptr;  // paid on entering a vertex
};

struct ShortestPathTree {
  std::vector<double> dist;
  std::vector<PointId> parent;
  std::vector<std::uint32_t> hops;
};

// Multi-source Dijkstra. Ties in the queue go to fewer hops, then lower rank.
// With node costs a source pays its own cost.
ShortestPathTree dijkstra(const FiniteMetricSpace& space,
                          const NeighborGraph& graph,
                          const std::vector<PointId>& sources,
                          const SearchOptions& options = {});

std::vector<PointId> trace_path(const ShortestPathTree& tree, PointId target);

std::vector<std::vector<PointId>> connected_components(
    const FiniteMetricSpace& space, const NeighborGraph& graph,
    const std::vector<char>* allowed = nullptr);

struct QuasiconvexityReport {
  double factor = 1.0;  // max d'/d over scanned pairs
  PointId worst_a = kNoPoint;
  PointId worst_b = kNoPoint;
  std::size_t pairs = 0;
  std::size_t disconnected_pairs = 0;
};

class PathMetricSpace {
 public:
  PathMetricSpace(std::shared_ptr<const FiniteMetricSpace> base, double h);
  explicit PathMetricSpace(std::shared_ptr<const FiniteMetricSpace> base);

  const FiniteMetricSpace& base() const { return *base_; }
  std::shared_ptr<const FiniteMetricSpace> base_ptr() const { return base_; }
  double h() const { return graph_.radius(); }
  const NeighborGraph& graph() const { return graph_; }

  double d_prime(PointId a, PointId b) const;
  std::vector<double> distances_from(PointId a) const;
  std::vector<double> distances_from(const std::vector<PointId>& sources) const;
  std::vector<PointId> geodesic(PointId a, PointId b,
                                const std::vector<char>* allowed = nullptr) const;
  double path_length(const std::vector<PointId>& path) const;

  // Scans all pairs from up to `sources` source vertices (all when n is small).
  QuasiconvexityReport quasiconvexity(std::size_t sources = 64,
                                      std::uint64_t seed = 1) const;

 private:
  std::shared_ptr<const FiniteMetricSpace> base_;
  NeighborGraph graph_;
};

struct Net {
  double scale = 0.0;
  std::vector<PointId> members;
  std::vector<PointId> assignment;  // kNoPoint outside the netted subset
};

// Greedy maximal eps-separated subset: members pairwise >= eps, every point of
// the subset within distance < eps of a member. Sweep order is canonical, or a
// seeded shuffle of it.
Net maximal_net(const FiniteMetricSpace& space, double eps,
                std::optional<std::uint64_t> seed = std::nullopt,
                const std::vector<PointId>* subset = nullptr);

// Size of a greedy eps-net of `subset` (covering number proxy).
std::size_t covering_number(const FiniteMetricSpace& space,
                            const std::vector<PointId>& subset, double eps);

double hausdorff_proxy(const FiniteMetricSpace& space, int q,
                       const std::vector<PointId>& subset, double eps);

std::vector<PointId> all_points(const FiniteMetricSpace& space);

}  // namespace quasidisk

#endif  // QUASIDISK_SPACE_HPP_
