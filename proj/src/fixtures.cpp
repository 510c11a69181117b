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

#include "quasidisk/fixtures.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <random>

namespace quasidisk {

namespace {

constexpr double kPi = std::numbers::pi;

struct Samples {
  std::vector<double> coords;
  std::vector<Vec2> chart;
  std::vector<double> weights;
};

// Square lattice of pitch s over [x0, x1] x [y0, y1], kept where inside(x, y).
// Jitter moves each point by up to jitter * s / 2 per axis.
Samples lattice(double x0, double x1, double y0, double y1, double s,
                double jitter, std::uint64_t seed,
                const std::function<bool(double, double)>& inside) {
  Samples out;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> shake(-0.5, 0.5);
  long i0 = std::lround(std::ceil(x0 / s - 1e-9));
  long i1 = std::lround(std::floor(x1 / s + 1e-9));
  long j0 = std::lround(std::ceil(y0 / s - 1e-9));
  long j1 = std::lround(std::floor(y1 / s + 1e-9));
  for (long j = j0; j <= j1; ++j) {
    for (long i = i0; i <= i1; ++i) {
      double x = double(i) * s;
      double y = double(j) * s;
      double dx = jitter > 0 ? jitter * s * shake(rng) : 0.0;
      double dy = jitter > 0 ? jitter * s * shake(rng) : 0.0;
      if (!inside(x, y)) continue;
      // Keep the lattice point at the origin exact so it can serve as a centre.
      if (i == 0 && j == 0) dx = dy = 0.0;
      out.coords.push_back(x + dx);
      out.coords.push_back(y + dy);
      out.chart.push_back({x + dx, y + dy});
      out.weights.push_back(s * s);
    }
  }
  return out;
}

PointId nearest_to(const FiniteMetricSpace& space, Vec2 target) {
  PointId best = kNoPoint;
  double bd = kInf;
  for (PointId p : space.canonical_order()) {
    Vec2 c = space.chart_at(p);
    double d = std::hypot(c.u - target.u, c.v - target.v);
    if (d < bd) {
      bd = d;
      best = p;
    }
  }
  return best;
}

}  // namespace

const char* fixture_name(FixtureKind kind) {
  switch (kind) {
    case FixtureKind::kFlatDisk: return "flat-disk";
    case FixtureKind::kGrid: return "grid";
    case FixtureKind::kSphere: return "sphere";
    case FixtureKind::kCone: return "cone";
    case FixtureKind::kDumbbell: return "dumbbell";
    case FixtureKind::kSnowflake: return "snowflake";
    case FixtureKind::kCircleLoop: return "circle-loop";
    case FixtureKind::kStrip: return "strip";
    case FixtureKind::kAnnulus: return "annulus";
  }
  return "unknown";
}

FixtureKind parse_fixture_kind(const std::string& name) {
  for (auto k : {FixtureKind::kFlatDisk, FixtureKind::kGrid, FixtureKind::kSphere,
                 FixtureKind::kCone, FixtureKind::kDumbbell, FixtureKind::kSnowflake,
                 FixtureKind::kCircleLoop, FixtureKind::kStrip,
                 FixtureKind::kAnnulus}) {
    if (name == fixture_name(k)) return k;
  }
  throw InvalidInput("unknown fixture kind: " + name);
}

Fixture generate(const FixtureSpec& spec, const SpaceOptions& options) {
  Fixture fx;
  fx.spec = spec;
  const double s = spec.spacing;
  if (!(s > 0) || !(spec.radius > 0)) throw InvalidInput("fixture needs positive sizes");
  if (spec.jitter < 0 || spec.jitter >= 0.5) {
    throw InvalidInput("jitter must lie in [0, 0.5)");
  }
  auto planar = [&](Samples smp) {
    return build_space(coordinate_source(2, std::move(smp.coords)),
                       std::move(smp.chart), std::move(smp.weights), options);
  };
  switch (spec.kind) {
    case FixtureKind::kFlatDisk: {
      double r = spec.radius;
      fx.space = planar(lattice(-r, r, -r, r, s, spec.jitter, spec.seed,
                                [&](double x, double y) { return x * x + y * y <= r * r; }));
      fx.center = nearest_to(fx.space, {0, 0});
      fx.expected = {{"assouad_q", 1.8, 2.2, "covering counts of a planar region"},
                     {"ahlfors_c", 1.0, 4.0, "Riemann sums of disk areas"},
                     {"llc1", 1.0, 1.3, "convexity"},
                     {"quasiconvexity", 1.0, 1.1, "chords are near graph geodesics"}};
      break;
    }
    case FixtureKind::kGrid: {
      double side = spec.n > 0 ? double(spec.n - 1) * s : spec.length;
      fx.space = planar(lattice(0, side, 0, side, s, spec.jitter, spec.seed,
                                [](double, double) { return true; }));
      fx.center = nearest_to(fx.space, {side / 2, side / 2});
      fx.expected = {{"assouad_q", 1.8, 2.2, "covering counts of a square"},
                     {"ahlfors_c", 1.0, 4.0, "Riemann sums of disk areas"}};
      break;
    }
    case FixtureKind::kStrip: {
      fx.space = planar(lattice(0, spec.length, 0, spec.width, s, spec.jitter,
                                spec.seed, [](double, double) { return true; }));
      fx.center = nearest_to(fx.space, {spec.length / 2, spec.width / 2});
      fx.expected = {{"ahlfors_failure_scale", spec.width, spec.width * 4,
                      "ball area saturates once r exceeds the width"}};
      break;
    }
    case FixtureKind::kAnnulus: {
      double r = spec.radius, a = spec.inner;
      Samples smp = lattice(-r, r, -r, r, s, spec.jitter, spec.seed, [&](double x, double y) {
        double q = x * x + y * y;
        return (q >= a * a && q <= r * r) || (x == 0 && y == 0);
      });
      fx.space = planar(std::move(smp));
      fx.center = nearest_to(fx.space, {0, 0});
      fx.expected = {{"optimal_radius", a, r, "minimiser of R^2/t + t clamped to the band"}};
      break;
    }
    case FixtureKind::kDumbbell: {
      double a = spec.radius, g = spec.gap, w = spec.width, top = a + spec.length;
      double ca = -(a + g / 2), cb = a + g / 2;
      auto inside = [&](double x, double y) {
        auto in_disk = [&](double c) { return (x - c) * (x - c) + y * y <= a * a; };
        bool column = y >= 0 && y <= top &&
                      (std::abs(x - ca) <= w / 2 || std::abs(x - cb) <= w / 2);
        bool bar = y >= top - w && y <= top && x >= ca - w / 2 && x <= cb + w / 2;
        return in_disk(ca) || in_disk(cb) || column || bar;
      };
      fx.space = planar(lattice(ca - a, cb + a, -a, top, s, spec.jitter, spec.seed, inside));
      fx.center = nearest_to(fx.space, {ca + a, 0});
      fx.expected = {{"turning_across_gap", 0.8 * top / (g + 2 * s), kInf,
                      "any connecting continuum climbs the neck"}};
      break;
    }
    case FixtureKind::kCircleLoop: {
      std::size_t n = spec.n ? spec.n : 256;
      Samples smp;
      for (std::size_t i = 0; i < n; ++i) {
        double t = 2.0 * kPi * double(i) / double(n);
        double x = spec.radius * std::cos(t), y = spec.radius * std::sin(t);
        smp.coords.insert(smp.coords.end(), {x, y});
        smp.chart.push_back({x, y});
      }
      fx.space = build_space(coordinate_source(2, std::move(smp.coords)),
                             std::move(smp.chart), {}, options);
      fx.center = 0;
      fx.expected = {{"three_point", 0.98, 1.02, "minor arc diameter equals chord"},
                     {"chord_arc", kPi / 2 - 0.05, kPi / 2 + 0.05,
                      "arc over chord peaks at antipodes"}};
      break;
    }
    case FixtureKind::kSphere: {
      std::size_t n = spec.n ? spec.n : 2000;
      std::vector<double> coords;
      const double golden = kPi * (3.0 - std::sqrt(5.0));
      for (std::size_t i = 0; i < n; ++i) {
        double y = 1.0 - 2.0 * (double(i) + 0.5) / double(n);
        double rr = std::sqrt(std::max(0.0, 1.0 - y * y));
        double phi = golden * double(i);
        coords.insert(coords.end(), {spec.radius * rr * std::cos(phi),
                                     spec.radius * y, spec.radius * rr * std::sin(phi)});
      }
      std::vector<double> weights(n, 4.0 * kPi * spec.radius * spec.radius / double(n));
      fx.space = build_space(coordinate_source(3, std::move(coords)), {},
                             std::move(weights), options);
      fx.center = 0;
      fx.expected = {{"quasiconvexity", 1.0, kPi / 2 + 0.2, "great circle over chord"},
                     {"ahlfors_c", 1.0, 4.0, "cap area against r^2"}};
      break;
    }
    case FixtureKind::kSnowflake: {
      std::size_t n = spec.n ? spec.n : 1025;
      DistanceSource src;
      src.kind = MetricKind::kSnowflake;
      src.dim = 1;
      src.exponent = spec.alpha;
      for (std::size_t i = 0; i < n; ++i) {
        src.coords.push_back(spec.radius * double(i) / double(n - 1));
      }
      fx.space = build_space(std::move(src), {}, {}, options);
      fx.center = PointId(n / 2);
      fx.expected = {{"assouad_q", 1.0 / spec.alpha - 0.3, 1.0 / spec.alpha + 0.3,
                      "snowflake dimension 1 / alpha"}};
      break;
    }
    case FixtureKind::kCone: {
      double theta = spec.cone_angle > 0 ? spec.cone_angle : 1.5 * kPi;
      DistanceSource src;
      src.kind = MetricKind::kCone;
      src.dim = 2;
      src.cone_angle = theta;
      std::vector<Vec2> chart;
      std::vector<double> weights;
      // Apex, then rings of pitch s staggered by half a step.
      src.coords.insert(src.coords.end(), {0.0, 0.0});
      chart.push_back({0, 0});
      weights.push_back(theta * s * s / 8.0);
      long rings = std::lround(std::floor(spec.radius / s + 1e-9));
      for (long k = 1; k <= rings; ++k) {
        double r = double(k) * s;
        long m = std::max(3L, std::lround(theta * r / s));
        double step = theta / double(m);
        for (long j = 0; j < m; ++j) {
          double t = (double(j) + 0.5 * double(k % 2)) * step;
          src.coords.insert(src.coords.end(), {r, t});
          double planar_angle = t * 2.0 * kPi / theta;
          chart.push_back({r * std::cos(planar_angle), r * std::sin(planar_angle)});
          weights.push_back(theta * r * s / double(m));
        }
      }
      fx.space = build_space(std::move(src), std::move(chart), std::move(weights), options);
      fx.center = 0;
      fx.expected = {{"cone_angle", theta, theta, "construction"}};
      break;
    }
  }
  return fx;
}

}  // namespace quasidisk
