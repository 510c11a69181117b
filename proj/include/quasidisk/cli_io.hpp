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

#ifndef QUASIDISK_CLI_IO_HPP_
#define QUASIDISK_CLI_IO_HPP_

#include <filesystem>
#include <iosfwd>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "quasidisk/coarea.hpp"
#include "quasidisk/fixtures.hpp"
#include "quasidisk/quasicircle.hpp"
#include "quasidisk/space.hpp"

namespace quasidisk {

inline constexpr int kSchemaVersion = 1;

using Json = nlohmann::json;

// ---- ingestion -------------------------------------------------------------

enum class InputFormat { kAuto, kCsv, kMatrix, kOff, kObj };

InputFormat parse_input_format(const std::string& name);

// CSV: one point per row, "id,x,y[,z]" or a header naming id, x, y, z, w.
// Planar rows also become the chart; w is the per-point area weight.
FiniteMetricSpace read_csv(std::istream& in, const SpaceOptions& options = {});

// Text: n followed by n*n distances. Binary: "QDMX", uint64 n, n*n float64,
// all little endian.
FiniteMetricSpace read_matrix(std::istream& in, const SpaceOptions& options = {});

// Edge-graph metric of a mesh: shortest paths along edges, Euclidean edge
// lengths. Meshes lying in a plane z = const get a chart.
FiniteMetricSpace read_off(std::istream& in, const SpaceOptions& options = {});
FiniteMetricSpace read_obj(std::istream& in, const SpaceOptions& options = {});

// Format from the extension when kAuto. Throws InvalidInput on malformed or
// empty input.
FiniteMetricSpace ingest(const std::filesystem::path& path,
                         InputFormat format = InputFormat::kAuto,
                         const SpaceOptions& options = {});

void write_csv(std::ostream& out, const FiniteMetricSpace& space);
void write_matrix(std::ostream& out, const FiniteMetricSpace& space);

// ---- configuration ---------------------------------------------------------

struct PipelineConfig {
  std::optional<PointId> center;   // default: nearest the chart centroid
  std::optional<double> scale;     // default: diameter / 20
  bool guard_off = false;
  double b0_multiplier = 16.0;
  int sheets = 4;
  ScaleWindow window{0.0, kInf};  // zero lo means the default window
  Budget budget;
  std::size_t quasiconvex_pairs = 6;
  std::uint64_t seed = 1;
  std::optional<LoopConstants> constants;  // skips estimation when set
  std::optional<FixtureSpec> fixture;
};

// Unknown keys are errors. The TOML form uses the same keys as the JSON one.
PipelineConfig parse_config(const Json& j);
PipelineConfig load_config(const std::filesystem::path& path);
Json config_json(const PipelineConfig& config);
// "lo:hi"; either side may be empty.
ScaleWindow parse_window(const std::string& text);

Json fixture_spec_json(const FixtureSpec& spec);
FixtureSpec parse_fixture_spec(const Json& j);

// Every fixture kind with its default parameters and expected constants.
Json fixture_manifest();

// ---- reports ---------------------------------------------------------------

// Sorted keys, schema version, config, seed and budgets.
Json report_envelope(const std::string& command, const PipelineConfig& config);
Json space_json(const FiniteMetricSpace& space);
Json diagnostics_json(const Diagnostics& diagnostics);
std::string dump_report(const Json& report);

PointId default_center(const FiniteMetricSpace& space);
double default_scale(const FiniteMetricSpace& space);

struct InvariantsStage {
  ConstantsEstimate estimate;
  Json json;
};

InvariantsStage run_invariants(const PathMetricSpace& pms, const PipelineConfig& config);

struct QuasiconvexStage {
  double l_hat = 1.0;         // max length / distance over the sampled pairs
  double graph_factor = 1.0;  // max d' / d over the scanned pairs
  Json json;
};

QuasiconvexStage run_quasiconvexity(const PathMetricSpace& pms,
                                    const QuasiconvexConstants& constants,
                                    const PipelineConfig& config);

Json quasicircle_json(const QuasicircleResult& result);
Json domain_json(const Domain& domain);
Json verification_json(const DomainReport& report);

enum class ReportStatus { kPass, kFailures, kRefused };

struct PipelineReport {
  Json json;
  ReportStatus status = ReportStatus::kPass;
  bool partial = false;
  std::optional<QuasicircleResult> quasicircle;
  std::optional<Domain> domain;
  std::optional<DomainReport> verification;

  int exit_code() const { return status == ReportStatus::kPass ? 0 : 2; }
};

// invariants, quasiconvexity spot checks, chord_arc_pipeline, extract_domain,
// verify_domain. Without a chart the loop stages are skipped and the report is
// partial. A scale-guard violation yields a refused report, not an exception.
PipelineReport run_pipeline(std::shared_ptr<const FiniteMetricSpace> space,
                            const PipelineConfig& config);

// ---- rendering -------------------------------------------------------------

struct SvgOverlays {
  std::vector<PointId> loop;
  std::vector<std::vector<PointId>> bands;
  std::optional<PointId> center;
  bool points = true;
  double width = 800.0;
};

// Throws InvalidInput without a chart.
std::string render_svg(const FiniteMetricSpace& space, const SvgOverlays& overlays);

}  // namespace quasidisk

#endif  // QUASIDISK_CLI_IO_HPP_
