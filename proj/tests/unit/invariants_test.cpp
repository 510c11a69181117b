#include <algorithm>
#include <cmath>
#include <memory>
#include <numbers>
#include <random>

#include "doctest.h"
#include "quasidisk/chains.hpp"
#include "quasidisk/fixtures.hpp"
#include "quasidisk/invariants.hpp"
#include "quasidisk/winding.hpp"

using namespace quasidisk;

namespace {

Fixture grid_fixture() {
  FixtureSpec spec;
  spec.kind = FixtureKind::kGrid;
  spec.spacing = 0.01;
  spec.length = 1.0;
  return generate(spec);
}

Fixture disk_fixture(double spacing = 0.05) {
  FixtureSpec spec;
  spec.kind = FixtureKind::kFlatDisk;
  spec.spacing = spacing;
  return generate(spec);
}

std::vector<PointId> boundary_ring(const FiniteMetricSpace& s, double radius,
                                   double tol) {
  std::vector<PointId> out;
  for (PointId p = 0; p < s.size(); ++p) {
    Vec2 c = s.chart_at(p);
    if (std::hypot(c.u, c.v) >= radius - tol) out.push_back(p);
  }
  return out;
}

// lambda by direct enumeration of both complementary arcs of every pair.
double three_point_brute(const FiniteMetricSpace& s, const std::vector<PointId>& loop) {
  const std::size_t n = loop.size();
  auto arc_diam = [&](std::size_t i, std::size_t j) {
    double d = 0;
    for (std::size_t a = i; a != (j + 1) % n; a = (a + 1) % n)
      for (std::size_t b = a; b != (j + 1) % n; b = (b + 1) % n)
        d = std::max(d, s.dist(loop[a], loop[b]));
    return d;
  };
  double worst = 0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      double m = std::min(arc_diam(i, j), arc_diam(j, i));
      worst = std::max(worst, m / s.dist(loop[i], loop[j]));
    }
  return std::max(1.0, worst);
}

std::vector<Vec2> square(double a, int per_side) {
  std::vector<Vec2> p;
  for (int k = 0; k < per_side; ++k) p.push_back({-a + 2 * a * k / per_side, -a});
  for (int k = 0; k < per_side; ++k) p.push_back({a, -a + 2 * a * k / per_side});
  for (int k = 0; k < per_side; ++k) p.push_back({a - 2 * a * k / per_side, a});
  for (int k = 0; k < per_side; ++k) p.push_back({-a, a - 2 * a * k / per_side});
  return p;
}

FiniteMetricSpace planar(const std::vector<Vec2>& pts) {
  std::vector<double> c;
  for (auto p : pts) c.insert(c.end(), {p.u, p.v});
  return build_space(coordinate_source(2, c), pts);
}

std::vector<PointId> iota_ids(std::size_t n) {
  std::vector<PointId> v(n);
  for (std::size_t i = 0; i < n; ++i) v[i] = PointId(i);
  return v;
}

}  // namespace

TEST_CASE("assouad dimension of a square grid is near two") {
  auto fx = grid_fixture();
  auto rep = assouad_estimate(fx.space, all_points(fx.space), {0.05, 0.4});
  CHECK_FALSE(rep.refused);
  CHECK(rep.q >= 1.8);
  CHECK(rep.q <= 2.2);
  CHECK(rep.d >= 1.0);
  for (const auto& s : rep.samples) {
    CHECK(double(s.count) <= rep.d * std::pow(s.ratio, -rep.q) * (1 + 1e-9));
  }
}

TEST_CASE("assouad dimension of a segment is near one") {
  std::vector<double> c;
  for (int i = 0; i <= 1000; ++i) c.insert(c.end(), {i / 1000.0, 0.0});
  auto s = build_space(coordinate_source(2, c));
  auto rep = assouad_estimate(s, all_points(s), {0.01, 0.4});
  CHECK(rep.q == doctest::Approx(1.0).epsilon(0.1));
}

TEST_CASE("assouad trivial and refused cases") {
  auto s = build_space(coordinate_source(2, {0.0, 0.0, 1.0, 0.0}));
  auto one = assouad_estimate(s, {0}, {0.1, 1.0});
  CHECK(one.q == 0.0);
  CHECK(one.d == 1.0);
  auto fx = grid_fixture();
  auto narrow = assouad_estimate(fx.space, all_points(fx.space), {0.1, 0.15});
  CHECK(narrow.refused);
  CHECK_FALSE(narrow.reason.empty());
}

TEST_CASE("ahlfors regularity of a grid") {
  auto fx = grid_fixture();
  auto rep = ahlfors_estimate(fx.space, all_points(fx.space), {0.05, 0.4});
  CHECK(rep.c_ahlfors <= 4.0);
  CHECK_FALSE(rep.degenerate);
  // Interior balls carry area close to pi r^2.
  Budget b;
  b.centers = 1;
  auto center_only = ahlfors_estimate(fx.space, {fx.center}, {0.05, 0.4}, b);
  for (const auto& row : center_only.table) {
    CHECK(row.ratio == doctest::Approx(std::numbers::pi).epsilon(0.08));
  }
}

TEST_CASE("ahlfors regularity of a sphere") {
  FixtureSpec spec;
  spec.kind = FixtureKind::kSphere;
  spec.n = 3000;
  auto fx = generate(spec);
  auto rep = ahlfors_estimate(fx.space, all_points(fx.space), {0.1, 0.8});
  CHECK(rep.c_ahlfors <= 4.0);
  CHECK_FALSE(rep.degenerate);
}

TEST_CASE("ahlfors flags a segment and a thin strip") {
  std::vector<double> c;
  for (int i = 0; i <= 400; ++i) c.insert(c.end(), {i / 400.0, 0.0});
  auto seg = build_space(coordinate_source(2, c));
  auto rs = ahlfors_estimate(seg, all_points(seg), {0.02, 0.4});
  CHECK(rs.degenerate);
  CHECK(rs.failure_scale.has_value());

  FixtureSpec spec;
  spec.kind = FixtureKind::kStrip;
  spec.spacing = 0.02;
  spec.width = 0.1;
  spec.length = 4.0;
  auto fx = generate(spec);
  auto rep = ahlfors_estimate(fx.space, all_points(fx.space), {0.04, 1.0});
  REQUIRE(rep.failure_scale.has_value());
  CHECK(*rep.failure_scale >= spec.width);
  CHECK(*rep.failure_scale <= 4 * spec.width);
  CHECK(rep.c_ahlfors > 4.0);
}

TEST_CASE("llc constants of a disk are near one") {
  auto fx = disk_fixture();
  auto pms = PathMetricSpace(std::make_shared<FiniteMetricSpace>(fx.space));
  auto rep = llc_estimate(pms, all_points(fx.space), {0.15, 0.5});
  CHECK(rep.balls1 > 0);
  CHECK(rep.balls2 > 0);
  CHECK(rep.lambda1 <= 1.3);
  CHECK(rep.lambda2 <= 1.5);
}

TEST_CASE("llc witness replays to the reported constant") {
  auto fx = disk_fixture();
  auto pms = PathMetricSpace(std::make_shared<FiniteMetricSpace>(fx.space));
  auto rep = llc_estimate(pms, all_points(fx.space), {0.15, 0.5});
  REQUIRE(rep.witness1_center != kNoPoint);
  CHECK(llc1_ratio(pms, rep.witness1_center, rep.witness1_radius) ==
        doctest::Approx(rep.lambda1));
  if (rep.witness2_center != kNoPoint) {
    CHECK(llc2_ratio(pms, all_points(fx.space), rep.witness2_center,
                     rep.witness2_radius) == doctest::Approx(rep.lambda2));
  }
}

TEST_CASE("llc first constant of a dumbbell is large") {
  FixtureSpec spec;
  spec.kind = FixtureKind::kDumbbell;
  spec.spacing = 0.05;
  spec.radius = 0.5;
  spec.gap = 0.2;
  spec.width = 0.15;
  spec.length = 2.0;
  auto fx = generate(spec);
  auto pms = PathMetricSpace(std::make_shared<FiniteMetricSpace>(fx.space));
  // fx.center sits on the gap edge of the left lobe; a ball reaching across
  // the gap can only be joined through the neck.
  double r = spec.gap + 2 * spec.spacing;
  double lo = fx.expected.front().lo;
  CHECK(llc1_ratio(pms, fx.center, r) >= lo);
  auto rep = llc_estimate(pms, fx.space.ball(fx.center, 0.1), {r, 0.8});
  CHECK(rep.lambda1 >= lo);
  CHECK(llc1_ratio(pms, rep.witness1_center, rep.witness1_radius) ==
        doctest::Approx(rep.lambda1));
}

TEST_CASE("llc of two points") {
  auto s = build_space(coordinate_source(2, {0.0, 0.0, 1.0, 0.0}),
                       {{0, 0}, {1, 0}}, {}, SpaceOptions{1.0});
  PathMetricSpace pms(std::make_shared<FiniteMetricSpace>(s));
  auto rep = llc_estimate(pms, {0, 1}, {0.25, 2.0});
  CHECK(rep.lambda1 == 1.0);
}

TEST_CASE("three point constant of a round circle") {
  FixtureSpec spec;
  spec.kind = FixtureKind::kCircleLoop;
  spec.n = 256;
  auto fx = generate(spec);
  auto loop = iota_ids(fx.space.size());
  auto cert = three_point_constant(fx.space, loop);
  CHECK(cert.lambda == doctest::Approx(1.0).epsilon(0.02));
}

TEST_CASE("three point constant matches direct enumeration") {
  auto pts = square(1.0, 10);
  auto s = planar(pts);
  auto loop = iota_ids(s.size());
  CHECK(three_point_constant(s, loop).lambda ==
        doctest::Approx(three_point_brute(s, loop)).epsilon(1e-12));
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-0.05, 0.05);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<Vec2> q;
    int m = 5 + trial;
    for (int k = 0; k < m; ++k) {
      double t = 2 * std::numbers::pi * k / m;
      q.push_back({std::cos(t) * (1 + u(rng)) + u(rng), std::sin(t) * (1 + 3 * u(rng))});
    }
    auto sp = planar(q);
    auto lp = iota_ids(sp.size());
    CHECK(three_point_constant(sp, lp).lambda ==
          doctest::Approx(three_point_brute(sp, lp)).epsilon(1e-12));
  }
}

TEST_CASE("three point constant of a pinched loop is large") {
  // Two unit lobes joined by a neck of width 0.01, traversed clockwise.
  const double pi = std::numbers::pi;
  const double th = std::asin(0.005);
  const int m = 60;
  std::vector<Vec2> pts;
  for (int k = -5; k < 5; ++k) pts.push_back({0.01 * k, 0.005});
  for (int k = 0; k <= m; ++k) {
    double t = (pi - th) - (2 * pi - 2 * th) * k / m;
    pts.push_back({1.05 + std::cos(t), std::sin(t)});
  }
  for (int k = 4; k > -5; --k) pts.push_back({0.01 * k, -0.005});
  for (int k = 0; k < m; ++k) {
    double t = -th - (2 * pi - 2 * th) * k / m;
    pts.push_back({-1.05 + std::cos(t), std::sin(t)});
  }
  auto s = planar(pts);
  auto loop = iota_ids(s.size());
  REQUIRE(is_injective(loop));
  CHECK(three_point_constant(s, loop).lambda >= 100.0);
}

TEST_CASE("three point rejects short and repeated loops") {
  auto s = planar(square(1.0, 2));
  CHECK_THROWS_AS(three_point_constant(s, {0, 1, 2}), InvalidInput);
  CHECK_THROWS_AS(three_point_constant(s, {0, 1, 2, 1}), InvalidInput);
}

TEST_CASE("porosity of a boundary circle") {
  auto fx = disk_fixture(0.02);
  auto ring = boundary_ring(fx.space, 1.0, 0.03);
  auto rep = porosity_constant(fx.space, ring, {0.1, 0.5});
  CHECK(rep.porous);
  CHECK(rep.c_por <= 4.0);
  std::vector<char> in(fx.space.size(), 0);
  for (PointId p : ring) in[p] = 1;
  for (const auto& w : rep.witnesses) {
    CHECK(porosity_witness_holds(fx.space, in, w.y, w.radius, w.witness, w.c));
  }
}

TEST_CASE("whole space is not porous") {
  auto fx = disk_fixture();
  auto rep = porosity_constant(fx.space, all_points(fx.space), {0.1, 0.5});
  CHECK_FALSE(rep.porous);
  CHECK(rep.c_por == kInf);
  CHECK_FALSE(rep.note.empty());
}

TEST_CASE("a single point is porous with constant two") {
  auto fx = grid_fixture();
  // Radii that are lattice multiples plus a half pitch avoid boundary ties.
  auto rep = porosity_constant(fx.space, {fx.center}, {0.11, 0.35});
  CHECK(rep.porous);
  CHECK(rep.c_por <= 2.0);
}

TEST_CASE("porosity grid has exact octaves") {
  auto g = porosity_grid();
  REQUIRE(g.size() == 28);
  CHECK(g[3] == 2.0);
  CHECK(g[27] == 128.0);
  CHECK(std::is_sorted(g.begin(), g.end()));
}

TEST_CASE("winding numbers of simple polygons") {
  auto sq = square(1.0, 4);
  CHECK(winding_angle_sum(sq, {0, 0}).index == 1);
  CHECK(*winding_crossings(sq, {0, 0}) == 1);
  auto rev = sq;
  std::reverse(rev.begin(), rev.end());
  CHECK(winding_angle_sum(rev, {0, 0}).index == -1);
  CHECK(*winding_crossings(rev, {0, 0}) == -1);
  CHECK(winding_angle_sum(sq, {3, 0.3}).index == 0);
  CHECK(*winding_crossings(sq, {3, 0.3}) == 0);
  CHECK_FALSE(winding_crossings(sq, {1.0, 0.1}).has_value());
  CHECK_THROWS_AS(winding_angle_sum(sq, sq[0]), InvalidInput);
}

TEST_CASE("winding of a doubled loop is additive") {
  auto sq = square(1.0, 4);
  auto twice = sq;
  twice.insert(twice.end(), sq.begin(), sq.end());
  CHECK(winding_angle_sum(twice, {0.2, -0.1}).index == 2);
  CHECK(*winding_crossings(twice, {0.2, -0.1}) == 2);
  // Out along the square and straight back.
  auto back = sq;
  for (auto it = sq.rbegin() + 1; it != sq.rend() - 1; ++it) back.push_back(*it);
  CHECK(*winding_crossings(back, {0, 0}) == 0);
}

TEST_CASE("angle sum refuses coarse loops") {
  std::vector<Vec2> tri{{-1, -1}, {1, -1}, {0, 1}};
  // An edge passing through z subtends a straight angle.
  CHECK_THROWS_AS(winding_angle_sum(tri, {0, -1}), ResolutionError);
  CHECK(winding_angle_sum(tri, {0, -0.99}).index == 1);
}

TEST_CASE("winding number of a chart loop") {
  FixtureSpec spec;
  spec.kind = FixtureKind::kCircleLoop;
  spec.n = 64;
  auto fx = generate(spec);
  auto loop = iota_ids(fx.space.size());
  CHECK(std::abs(winding_number(fx.space, loop, {0, 0})) == 1);
  CHECK(winding_number(fx.space, loop, {2, 0}) == 0);
}

TEST_CASE("close loops wind equally away from the guard tube") {
  // alpha and beta: two nearby polygons on a shared point set.
  std::vector<Vec2> pts;
  const int m = 40;
  for (int k = 0; k < m; ++k) {
    double t = 2 * std::numbers::pi * k / m;
    pts.push_back({std::cos(t), std::sin(t)});
  }
  for (int k = 0; k < m; ++k) {
    double t = 2 * std::numbers::pi * (k + 0.5) / m;
    pts.push_back({1.05 * std::cos(t), 1.05 * std::sin(t)});
  }
  std::vector<Vec2> queries;
  for (int i = -6; i <= 6; ++i)
    for (int j = -6; j <= 6; ++j) queries.push_back({0.3 * i + 0.01, 0.3 * j + 0.02});
  std::size_t base = pts.size();
  pts.insert(pts.end(), queries.begin(), queries.end());
  auto s = planar(pts);
  std::vector<PointId> alpha, beta, qs;
  std::vector<std::size_t> ap, bp;
  for (int k = 0; k < m; ++k) {
    alpha.push_back(PointId(k));
    beta.push_back(PointId(m + k));
    ap.push_back(std::size_t(k));
    bp.push_back(std::size_t(k));
  }
  for (std::size_t i = base; i < pts.size(); ++i) qs.push_back(PointId(i));
  double delta = 0.25;
  auto rep = certify_loop_closeness(s, alpha, beta, ap, bp, delta, 1.0, qs);
  CHECK(rep.hypotheses_hold);
  CHECK(rep.guard == doctest::Approx(1.0));
  CHECK_FALSE(rep.checked.empty());
  CHECK_FALSE(rep.excluded.empty());
  CHECK(rep.mismatched.empty());

  auto tight = certify_loop_closeness(s, alpha, beta, ap, bp, 0.05, 1.0, qs);
  CHECK_FALSE(tight.hypotheses_hold);
  CHECK(tight.violating_index == 0);
}

TEST_CASE("chain deviation stays within the bound from measured constants") {
  auto fx = disk_fixture();
  auto space = std::make_shared<FiniteMetricSpace>(fx.space);
  PathMetricSpace pms(space);
  ScaleWindow window{2 * space->spacing(), 0.5};
  auto a = assouad_estimate(*space, all_points(*space), window);
  REQUIRE_FALSE(a.refused);
  auto turn = bounded_turning_constant(pms, all_points(*space), window);
  PointId x = fx.center;
  PointId y = space->ball(x, 0.6).back();
  for (PointId p : space->ball(x, 0.6))
    if (space->dist(x, p) > space->dist(x, y)) y = p;
  auto ref = pms.geodesic(x, y);
  double eps = 0.1;
  auto sc = score_minimizing_chain(*space, x, y, ref, eps, a.q,
                                   ChainConstants{a.d, turn.lambda});
  REQUIRE(sc.deviation_bound.has_value());
  CHECK(sc.max_deviation <= *sc.deviation_bound);
  CHECK(sc.diagnostics.empty());
}

TEST_CASE("invariants are unchanged by rescaling") {
  auto fx = disk_fixture();
  const double k = 3.0;
  auto big = fx.space.rescaled(k);
  ScaleWindow w{0.15, 0.5}, wk{0.15 * k, 0.5 * k};
  auto q1 = assouad_estimate(fx.space, all_points(fx.space), w);
  auto q2 = assouad_estimate(big, all_points(big), wk);
  CHECK(q1.q == doctest::Approx(q2.q).epsilon(1e-9));
  auto p1 = PathMetricSpace(std::make_shared<FiniteMetricSpace>(fx.space));
  auto p2 = PathMetricSpace(std::make_shared<FiniteMetricSpace>(big));
  auto l1 = llc_estimate(p1, all_points(fx.space), w);
  auto l2 = llc_estimate(p2, all_points(big), wk);
  CHECK(l1.lambda1 == doctest::Approx(l2.lambda1).epsilon(1e-9));
  CHECK(l1.lambda2 == doctest::Approx(l2.lambda2).epsilon(1e-9));
  auto ring = boundary_ring(fx.space, 1.0, 0.06);
  auto c1 = porosity_constant(fx.space, ring, w);
  auto c2 = porosity_constant(big, ring, wk);
  CHECK(c1.c_por == c2.c_por);
}

TEST_CASE("invariants are unchanged by relabelling") {
  auto fx = disk_fixture();
  const std::size_t n = fx.space.size();
  std::vector<PointId> perm = iota_ids(n);
  std::shuffle(perm.begin(), perm.end(), std::mt19937_64(11));
  auto moved = fx.space.permuted(perm);
  ScaleWindow w{0.15, 0.5};
  auto q1 = assouad_estimate(fx.space, all_points(fx.space), w);
  auto q2 = assouad_estimate(moved, all_points(moved), w);
  CHECK(q1.q == doctest::Approx(q2.q).epsilon(1e-12));
  auto a1 = ahlfors_estimate(fx.space, all_points(fx.space), w);
  auto a2 = ahlfors_estimate(moved, all_points(moved), w);
  CHECK(a1.c_ahlfors == doctest::Approx(a2.c_ahlfors).epsilon(1e-12));
  auto p1 = PathMetricSpace(std::make_shared<FiniteMetricSpace>(fx.space));
  auto p2 = PathMetricSpace(std::make_shared<FiniteMetricSpace>(moved));
  auto l1 = llc_estimate(p1, all_points(fx.space), w);
  auto l2 = llc_estimate(p2, all_points(moved), w);
  CHECK(l1.lambda1 == doctest::Approx(l2.lambda1).epsilon(1e-12));
  CHECK(l1.lambda2 == doctest::Approx(l2.lambda2).epsilon(1e-12));
  if (l1.witness1_center != kNoPoint) {
    CHECK(perm[l1.witness1_center] == l2.witness1_center);
  }
}
