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

#ifndef QUASIDISK_FIXTURES_HPP_
#define QUASIDISK_FIXTURES_HPP_

#include <cstdint>
#include <string>
#include <vector>

#include "quasidisk/space.hpp"

namespace quasidisk {

enum class FixtureKind {
  kFlatDisk,
  kGrid,
  kSphere,
  kCone,
  kDumbbell,
  kSnowflake,
  kCircleLoop,
  kStrip,
  kAnnulus,
};

const char* fixture_name(FixtureKind kind);
FixtureKind parse_fixture_kind(const std::string& name);

// Lengths are absolute. Unused fields are ignored by a given kind.
struct FixtureSpec {
  FixtureKind kind = FixtureKind::kFlatDisk;
  std::size_t n = 0;        // count for sphere, snowflake, circle-loop
  double spacing = 0.02;    // lattice pitch
  double radius = 1.0;      // disk, sphere, circle, cone, annulus outer
  double inner = 0.3;       // annulus inner radius
  double width = 0.1;       // strip width, dumbbell neck width
  double length = 4.0;      // strip length, dumbbell neck height, grid side
  double gap = 0.1;         // dumbbell gap between the disks
  double alpha = 0.5;       // snowflake exponent
  double cone_angle = 0.0;  // 0 means 3 pi / 2
  double jitter = 0.0;      // lattice jitter as a fraction of the pitch
  std::uint64_t seed = 1;
};

struct ExpectedConstant {
  std::string name;
  double lo = 0.0;
  double hi = 0.0;
  std::string basis;  // how the value is known
};

struct Fixture {
  FixtureSpec spec;
  FiniteMetricSpace space;
  PointId center = kNoPoint;  // point nearest the geometric centre
  std::vector<ExpectedConstant> expected;
};

Fixture generate(const FixtureSpec& spec, const SpaceOptions& options = {});

}  // namespace quasidisk

#endif  // QUASIDISK_FIXTURES_HPP_
