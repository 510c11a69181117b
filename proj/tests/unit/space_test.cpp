#include <algorithm>
#include <cmath>
#include <memory>
#include <numbers>
#include <random>

#include "doctest.h"
#include "quasidisk/fixtures.hpp"
#include "quasidisk/space.hpp"

using namespace quasidisk;

namespace {

FiniteMetricSpace unit_grid(int side, double pitch = 1.0) {
  FixtureSpec spec;
  spec.kind = FixtureKind::kGrid;
  spec.n = std::size_t(side);
  spec.spacing = pitch;
  return generate(spec).space;
}

// Floyd-Warshall on an edge list, independent of the library's Dijkstra.
std::vector<double> floyd(std::size_t n, const std::vector<WeightedEdge>& edges) {
  std::vector<double> d(n * n, kInf);
  for (std::size_t i = 0; i < n; ++i) d[i * n + i] = 0;
  for (auto e : edges) {
    d[e.a * n + e.b] = std::min(d[e.a * n + e.b], e.length);
    d[e.b * n + e.a] = std::min(d[e.b * n + e.a], e.length);
  }
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        d[i * n + j] = std::min(d[i * n + j], d[i * n + k] + d[k * n + j]);
  return d;
}

// Largest 2-separated subset of the 10x10 unit grid, exact by row DP. Within a
// row points need a gap of 2; rows one apart need a column offset of 2; rows
// two apart never conflict.
int max_two_separated_on_grid() {
  std::vector<int> masks;
  for (int m = 0; m < 1024; ++m) {
    if ((m & (m << 1)) == 0) masks.push_back(m);
  }
  auto clash = [](int a, int b) { return (a & b) || (a & (b << 1)) || (a & (b >> 1)); };
  std::vector<int> best(masks.size());
  for (std::size_t i = 0; i < masks.size(); ++i) best[i] = __builtin_popcount(masks[i]);
  for (int row = 1; row < 10; ++row) {
    std::vector<int> next(masks.size(), -1);
    for (std::size_t i = 0; i < masks.size(); ++i) {
      for (std::size_t j = 0; j < masks.size(); ++j) {
        if (clash(masks[i], masks[j])) continue;
        next[j] = std::max(next[j], best[i] + __builtin_popcount(masks[j]));
      }
    }
    best = next;
  }
  return *std::max_element(best.begin(), best.end());
}

}  // namespace

TEST_CASE("collinear points give additive distances") {
  auto s = build_space(coordinate_source(2, {0, 0, 1, 0, 2, 0}));
  CHECK(s.dist(0, 2) == 2.0);
  CHECK(s.dist(2, 0) == 2.0);
  CHECK(s.dist(1, 1) == 0.0);
}

TEST_CASE("asymmetric matrix is rejected") {
  CHECK_THROWS_AS(matrix_source(2, {0, 1, 2, 0}), InvalidInput);
}

TEST_CASE("negative distance is rejected") {
  CHECK_THROWS_AS(matrix_source(2, {0, -1, -1, 0}), InvalidInput);
}

TEST_CASE("triangle inequality violation is rejected") {
  auto src = matrix_source(3, {0, 1, 5, 1, 0, 1, 5, 1, 0});
  CHECK_THROWS_AS(build_space(src), InvalidInput);
}

TEST_CASE("path edge list completes to the path metric") {
  std::vector<WeightedEdge> edges;
  for (PointId i = 0; i < 10; ++i) edges.push_back({i, i + 1, 1.0});
  auto s = build_space(edge_list_source(11, edges));
  auto oracle = floyd(11, edges);
  CHECK(s.dist(0, 10) == 10.0);
  for (PointId i = 0; i < 11; ++i)
    for (PointId j = 0; j < 11; ++j) CHECK(s.dist(i, j) == oracle[i * 11 + j]);
}

TEST_CASE("disconnected edge list is rejected") {
  std::vector<WeightedEdge> edges{{0, 1, 1.0}, {2, 3, 1.0}};
  CHECK_THROWS_AS(edge_list_source(4, edges), Disconnected);
}

TEST_CASE("random weighted graphs match Floyd-Warshall") {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 20; ++trial) {
    std::size_t n = 6 + trial % 7;
    std::vector<WeightedEdge> edges;
    std::uniform_real_distribution<double> w(0.5, 2.0);
    for (PointId i = 1; i < n; ++i) {
      edges.push_back({PointId(rng() % i), i, w(rng)});
    }
    for (int k = 0; k < 8; ++k) {
      PointId a = PointId(rng() % n), b = PointId(rng() % n);
      if (a != b) edges.push_back({a, b, w(rng)});
    }
    auto s = build_space(edge_list_source(n, edges));
    auto oracle = floyd(n, edges);
    for (PointId i = 0; i < n; ++i)
      for (PointId j = 0; j < n; ++j)
        CHECK(s.dist(i, j) == doctest::Approx(oracle[i * n + j]).epsilon(1e-12));
  }
}

TEST_CASE("chart must be injective") {
  CHECK_THROWS_AS(build_space(coordinate_source(2, {0, 0, 1, 0}), {{0, 0}, {0, 0}}),
                  InvalidInput);
}

TEST_CASE("duplicate coordinates are rejected") {
  CHECK_THROWS_AS(build_space(coordinate_source(2, {0, 0, 0, 0, 1, 0})), InvalidInput);
}

TEST_CASE("ball queries agree with brute force") {
  FixtureSpec spec;
  spec.kind = FixtureKind::kFlatDisk;
  spec.spacing = 0.05;
  spec.jitter = 0.3;
  auto s = generate(spec).space;
  std::mt19937_64 rng(11);
  for (int t = 0; t < 30; ++t) {
    PointId c = PointId(rng() % s.size());
    double r = 0.01 + 0.5 * double(t) / 30.0;
    auto got = s.ball(c, r);
    std::vector<PointId> want;
    for (PointId q = 0; q < s.size(); ++q)
      if (s.dist(c, q) <= r) want.push_back(q);
    std::sort(got.begin(), got.end());
    CHECK(got == want);
  }
}

TEST_CASE("maximal net on the unit grid") {
  auto s = unit_grid(10);
  CHECK(maximal_net(s, 0.5).members.size() == 100);
  CHECK(maximal_net(s, 10 * std::sqrt(2.0) + 1).members.size() == 1);
  int oracle = max_two_separated_on_grid();
  auto net = maximal_net(s, 2.0);
  CHECK(net.members.size() * 2 >= std::size_t(oracle));
  CHECK(net.members.size() <= std::size_t(oracle));
}

TEST_CASE("net members are separated and cover") {
  FixtureSpec spec;
  spec.kind = FixtureKind::kFlatDisk;
  spec.spacing = 0.04;
  spec.jitter = 0.4;
  auto s = generate(spec).space;
  for (double eps : {0.05, 0.13, 0.4}) {
    auto net = maximal_net(s, eps, 99);
    for (std::size_t i = 0; i < net.members.size(); ++i)
      for (std::size_t j = i + 1; j < net.members.size(); ++j)
        CHECK(s.dist(net.members[i], net.members[j]) >= eps);
    for (PointId p = 0; p < s.size(); ++p) {
      REQUIRE(net.assignment[p] != kNoPoint);
      CHECK(s.dist(p, net.assignment[p]) < eps);
    }
  }
}

TEST_CASE("net size is stable under reseeding") {
  auto s = unit_grid(40, 0.025);
  double base = double(maximal_net(s, 0.1).members.size());
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    double k = double(maximal_net(s, 0.1, seed).members.size());
    CHECK(k >= 0.8 * base);
    CHECK(k <= 1.2 * base);
  }
}

TEST_CASE("hausdorff proxies") {
  std::vector<double> seg;
  for (int i = 0; i <= 100; ++i) seg.insert(seg.end(), {double(i), 0.0});
  auto line = build_space(coordinate_source(2, seg));
  double v = hausdorff_proxy(line, 1, all_points(line), 1.0);
  CHECK(v >= 50.0);
  CHECK(v <= 101.0);
  CHECK(hausdorff_proxy(line, 1, {}, 1.0) == 0.0);

  auto sq = unit_grid(101, 0.01);
  double area = hausdorff_proxy(sq, 2, all_points(sq), 0.01);
  CHECK(area == doctest::Approx(1.0).epsilon(0.05));
}

TEST_CASE("hausdorff proxy is monotone under inclusion") {
  auto s = unit_grid(30, 0.1);
  std::vector<PointId> small, big;
  for (PointId p = 0; p < s.size(); ++p) {
    if (p % 3 == 0) small.push_back(p);
    if (p % 3 != 2) big.push_back(p);
  }
  for (double eps : {0.1, 0.25, 0.7}) {
    CHECK(hausdorff_proxy(s, 1, small, eps) <= hausdorff_proxy(s, 1, big, eps));
  }
}

TEST_CASE("path metric dominates the metric and matches it at large radius") {
  FixtureSpec spec;
  spec.kind = FixtureKind::kFlatDisk;
  spec.spacing = 0.1;
  spec.jitter = 0.3;
  auto s = std::make_shared<FiniteMetricSpace>(generate(spec).space);
  PathMetricSpace local(s);
  PathMetricSpace full(s, 3.0);
  for (PointId a = 0; a < s->size(); a += 37) {
    auto dl = local.distances_from(a);
    auto df = full.distances_from(a);
    for (PointId b = 0; b < s->size(); ++b) {
      CHECK(dl[b] >= s->dist(a, b));
      CHECK(df[b] == s->dist(a, b));
    }
  }
}

TEST_CASE("two points joined by one edge") {
  auto s = std::make_shared<FiniteMetricSpace>(
      build_space(coordinate_source(2, {0, 0, 3, 4}), {}, {}, SpaceOptions{5.0}));
  PathMetricSpace pms(s);
  CHECK(pms.d_prime(0, 1) == 5.0);
}

TEST_CASE("flat disk is nearly convex in the path metric") {
  FixtureSpec spec;
  spec.kind = FixtureKind::kFlatDisk;
  spec.spacing = 0.05;
  auto s = std::make_shared<FiniteMetricSpace>(generate(spec).space);
  PathMetricSpace pms(s);
  auto rep = pms.quasiconvexity(32);
  CHECK(rep.factor <= 1.1);
  CHECK(rep.factor >= 1.0);
}

TEST_CASE("intrinsic circle over chords tends to pi/2") {
  FixtureSpec spec;
  spec.kind = FixtureKind::kCircleLoop;
  spec.n = 256;
  auto base = generate(spec).space;
  double step = base.dist(0, 1);
  auto s = std::make_shared<FiniteMetricSpace>(base);
  PathMetricSpace pms(s, step * 1.01);
  auto rep = pms.quasiconvexity();
  CHECK(rep.factor == doctest::Approx(std::numbers::pi / 2).epsilon(0.01));
}

TEST_CASE("subpaths of graph geodesics are geodesics") {
  FixtureSpec spec;
  spec.kind = FixtureKind::kFlatDisk;
  spec.spacing = 0.1;
  spec.jitter = 0.4;
  auto s = std::make_shared<FiniteMetricSpace>(generate(spec).space);
  PathMetricSpace pms(s);
  std::mt19937_64 rng(5);
  for (int t = 0; t < 10; ++t) {
    PointId a = PointId(rng() % s->size()), b = PointId(rng() % s->size());
    auto path = pms.geodesic(a, b);
    REQUIRE(!path.empty());
    std::size_t i = path.size() / 4, j = 3 * path.size() / 4;
    std::vector<PointId> sub(path.begin() + i, path.begin() + j + 1);
    CHECK(pms.path_length(sub) ==
          doctest::Approx(pms.d_prime(path[i], path[j])).epsilon(1e-12));
  }
}

TEST_CASE("rescaling multiplies distances, permutation relabels them") {
  FixtureSpec spec;
  spec.kind = FixtureKind::kFlatDisk;
  spec.spacing = 0.2;
  auto s = generate(spec).space;
  auto big = s.rescaled(1000.0);
  CHECK(big.connect_radius() == doctest::Approx(1000.0 * s.connect_radius()));
  std::vector<PointId> perm(s.size());
  for (PointId i = 0; i < s.size(); ++i) perm[i] = PointId(s.size() - 1 - i);
  auto p = s.permuted(perm);
  for (PointId a = 0; a < s.size(); a += 7) {
    for (PointId b = 0; b < s.size(); b += 5) {
      CHECK(big.dist(a, b) == doctest::Approx(1000.0 * s.dist(a, b)));
      CHECK(p.dist(perm[a], perm[b]) == s.dist(a, b));
    }
    CHECK(p.rank(perm[a]) == s.rank(a));
  }
}
