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

// Command-line front end. Exit status: 0 pass, 2 failed checks or refusal,
// 1 error.

#include <fstream>
#include <iostream>
#include <memory>
#include <string>

#include "CLI11.hpp"
#include "quasidisk/cli_io.hpp"

using namespace quasidisk;

namespace {

struct SpaceArgs {
  std::string input;
  std::string format = "auto";
  std::string fixture;
  FixtureSpec spec;
  CLI::Option* seed = nullptr;
  std::uint64_t seed_value = 1;
};

struct Common {
  std::string config_path;
  std::string window;
  std::string out;
  CLI::Option* center = nullptr;
  PointId center_value = 0;
  CLI::Option* scale = nullptr;
  double scale_value = 0.0;
  bool guard_off = false;
};

void add_space(CLI::App* cmd, SpaceArgs& a) {
  cmd->add_option("--input", a.input, "Input file (csv, qdmx, off, obj)");
  cmd->add_option("--format", a.format, "auto, csv, matrix, off or obj");
  cmd->add_option("--fixture", a.fixture, "Generate a fixture instead of reading a file");
  cmd->add_option("--n", a.spec.n, "Fixture point count where applicable");
  cmd->add_option("--spacing", a.spec.spacing, "Fixture lattice pitch");
  cmd->add_option("--radius", a.spec.radius, "Fixture radius");
  cmd->add_option("--inner", a.spec.inner, "Annulus inner radius");
  cmd->add_option("--width", a.spec.width, "Strip or neck width");
  cmd->add_option("--length", a.spec.length, "Strip length, neck height or grid side");
  cmd->add_option("--gap", a.spec.gap, "Dumbbell gap");
  cmd->add_option("--alpha", a.spec.alpha, "Snowflake exponent");
  cmd->add_option("--cone-angle", a.spec.cone_angle, "Cone total angle");
  cmd->add_option("--jitter", a.spec.jitter, "Lattice jitter, fraction of the pitch");
  a.seed = cmd->add_option("--seed", a.seed_value, "Seed for fixtures and sampling");
}

void add_common(CLI::App* cmd, Common& c, bool scale) {
  cmd->add_option("--config", c.config_path, "TOML or JSON configuration");
  cmd->add_option("--window", c.window, "Scale window lo:hi");
  cmd->add_option("--out", c.out, "Report path (default stdout)");
  if (scale) {
    c.center = cmd->add_option("--center", c.center_value, "Centre point id");
    c.scale = cmd->add_option("--scale", c.scale_value, "Loop scale R");
    cmd->add_flag("--guard-off", c.guard_off, "Run above the scale guard");
  }
}

PipelineConfig make_config(const Common& c, const SpaceArgs& a) {
  PipelineConfig cfg = c.config_path.empty() ? PipelineConfig{} : load_config(c.config_path);
  if (!c.window.empty()) cfg.window = parse_window(c.window);
  if (c.center && c.center->count()) cfg.center = c.center_value;
  if (c.scale && c.scale->count()) {
    if (!(c.scale_value > 0)) throw InvalidInput("--scale must be positive");
    cfg.scale = c.scale_value;
  }
  if (c.guard_off) cfg.guard_off = true;
  if (a.seed->count()) cfg.seed = a.seed_value;
  if (!a.fixture.empty()) {
    FixtureSpec s = a.spec;
    s.kind = parse_fixture_kind(a.fixture);
    s.seed = cfg.seed;
    cfg.fixture = s;
  }
  return cfg;
}

// Reads the input file or generates the fixture; a fixture supplies the
// default centre.
std::shared_ptr<const FiniteMetricSpace> load_space(const SpaceArgs& a, PipelineConfig& cfg) {
  if (!a.input.empty() && !a.fixture.empty()) {
    throw InvalidInput("give either --input or --fixture");
  }
  if (!a.input.empty()) {
    cfg.fixture.reset();
    return std::make_shared<const FiniteMetricSpace>(
        ingest(a.input, parse_input_format(a.format)));
  }
  if (!cfg.fixture) throw InvalidInput("no input: give --input, --fixture or a config fixture");
  Fixture fx = generate(*cfg.fixture);
  if (!cfg.center) cfg.center = fx.center;
  return std::make_shared<const FiniteMetricSpace>(std::move(fx.space));
}

void emit(const std::string& path, const std::string& text) {
  if (path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InvalidInput("cannot write " + path);
  out << text;
}

std::vector<PointId> report_loop(const Json& report) {
  for (const char* ptr : {"/stages/quasicircle/minimized/loop/points",
                          "/quasicircle/minimized/loop/points"}) {
    Json::json_pointer p(ptr);
    if (report.contains(p)) return report.at(p).get<std::vector<PointId>>();
  }
  throw InvalidInput("report holds no loop");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Certified discrete quasicircles in finite metric spaces"};
  app.require_subcommand(1);
  SpaceArgs sa;
  Common co;

  auto* gen = app.add_subcommand("generate", "Write a fixture as CSV or QDMX, or the manifest");
  std::string manifest;
  gen->add_option("--fixture", sa.fixture, "Fixture kind");
  gen->add_option("--out", co.out, "Output file (.csv or .qdmx)");
  gen->add_option("--manifest", manifest, "Write the expected-constants manifest");
  gen->add_option("--n", sa.spec.n, "Point count where applicable");
  gen->add_option("--spacing", sa.spec.spacing, "Lattice pitch");
  gen->add_option("--radius", sa.spec.radius, "Radius");
  gen->add_option("--inner", sa.spec.inner, "Annulus inner radius");
  gen->add_option("--width", sa.spec.width, "Strip or neck width");
  gen->add_option("--length", sa.spec.length, "Strip length, neck height or grid side");
  gen->add_option("--gap", sa.spec.gap, "Dumbbell gap");
  gen->add_option("--alpha", sa.spec.alpha, "Snowflake exponent");
  gen->add_option("--cone-angle", sa.spec.cone_angle, "Cone total angle");
  gen->add_option("--jitter", sa.spec.jitter, "Lattice jitter");
  sa.seed = gen->add_option("--seed", sa.seed_value, "Seed");

  auto* ing = app.add_subcommand("ingest", "Read a file and summarise the space");
  SpaceArgs ia;
  Common ic;
  add_space(ing, ia);
  add_common(ing, ic, false);

  auto* inv = app.add_subcommand("invariants", "Estimate the regularity constants");
  SpaceArgs va;
  Common vc;
  add_space(inv, va);
  add_common(inv, vc, false);

  auto* qcv = app.add_subcommand("quasiconvex", "Quasiconvex paths between sampled pairs");
  SpaceArgs qa;
  Common qc;
  std::size_t pairs = 6;
  add_space(qcv, qa);
  add_common(qcv, qc, false);
  auto* pairs_opt = qcv->add_option("--pairs", pairs, "Number of sampled pairs");

  auto* qci = app.add_subcommand("quasicircle", "Minimise sigma and certify the loop");
  SpaceArgs ca;
  Common cc;
  std::string svg;
  add_space(qci, ca);
  add_common(qci, cc, true);
  qci->add_option("--svg", svg, "Also render the loop");

  auto* pip = app.add_subcommand("pipeline", "Run every stage and write the full report");
  SpaceArgs pa;
  Common pc;
  std::string pipe_svg;
  add_space(pip, pa);
  add_common(pip, pc, true);
  pip->add_option("--svg", pipe_svg, "Also render the loop");

  auto* ren = app.add_subcommand("render", "Draw the space with a report's loop");
  SpaceArgs ra;
  Common rc;
  std::string report_path;
  double bands = 0.0;
  add_space(ren, ra);
  add_common(ren, rc, false);
  ren->add_option("--report", report_path, "Report holding a loop");
  ren->add_option("--bands", bands, "Draw distance bands from the centre up to this radius");
  auto* ren_center = ren->add_option("--center", rc.center_value, "Centre point id");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 1;
  }

  try {
    if (gen->parsed()) {
      if (!manifest.empty()) emit(manifest, dump_report(fixture_manifest()));
      if (sa.fixture.empty()) {
        if (manifest.empty()) throw InvalidInput("give --fixture or --manifest");
        return 0;
      }
      FixtureSpec spec = sa.spec;
      spec.kind = parse_fixture_kind(sa.fixture);
      spec.seed = sa.seed_value;
      Fixture fx = generate(spec);
      if (!co.out.empty()) {
        std::ofstream out(co.out, std::ios::binary);
        if (!out) throw InvalidInput("cannot write " + co.out);
        if (std::filesystem::path(co.out).extension() == ".csv") {
          write_csv(out, fx.space);
        } else {
          write_matrix(out, fx.space);
        }
      }
      Json summary{{"schema_version", kSchemaVersion},
                   {"command", "generate"},
                   {"fixture", fixture_spec_json(spec)},
                   {"space", space_json(fx.space)},
                   {"center", fx.center}};
      Json expected = Json::array();
      for (const auto& e : fx.expected) {
        expected.push_back({{"name", e.name}, {"lo", e.lo}, {"hi", e.hi}, {"basis", e.basis}});
      }
      summary["expected"] = expected;
      std::cout << dump_report(summary);
      return 0;
    }

    if (ing->parsed()) {
      PipelineConfig cfg = make_config(ic, ia);
      auto space = load_space(ia, cfg);
      Json rep = report_envelope("ingest", cfg);
      rep["space"] = space_json(*space);
      emit(ic.out, dump_report(rep));
      return 0;
    }

    if (inv->parsed()) {
      PipelineConfig cfg = make_config(vc, va);
      auto space = load_space(va, cfg);
      PathMetricSpace pms(space);
      auto st = run_invariants(pms, cfg);
      Json rep = report_envelope("invariants", cfg);
      rep["space"] = space_json(*space);
      rep["invariants"] = st.json;
      bool bad = st.estimate.regularity.degenerate || st.estimate.assouad.refused;
      rep["status"] = bad ? "failures" : "pass";
      emit(vc.out, dump_report(rep));
      return bad ? 2 : 0;
    }

    if (qcv->parsed()) {
      PipelineConfig cfg = make_config(qc, qa);
      if (pairs_opt->count()) cfg.quasiconvex_pairs = pairs;
      auto space = load_space(qa, cfg);
      PathMetricSpace pms(space);
      auto st = run_invariants(pms, cfg);
      auto q = run_quasiconvexity(pms, st.estimate.constants, cfg);
      Json rep = report_envelope("quasiconvex", cfg);
      rep["space"] = space_json(*space);
      rep["constants"] = st.json["constants"];
      rep["quasiconvexity"] = q.json;
      bool bad = !q.json["diagnostics"].empty();
      rep["status"] = bad ? "failures" : "pass";
      emit(qc.out, dump_report(rep));
      return bad ? 2 : 0;
    }

    if (qci->parsed()) {
      PipelineConfig cfg = make_config(cc, ca);
      auto space = load_space(ca, cfg);
      PathMetricSpace pms(space);
      PointId z = cfg.center ? *cfg.center : default_center(*space);
      if (z >= space->size()) throw InvalidInput("center out of range");
      double r = cfg.scale ? *cfg.scale : default_scale(*space);
      QuasicircleOptions opt;
      opt.guard_off = cfg.guard_off;
      opt.b0_multiplier = cfg.b0_multiplier;
      opt.constants = cfg.constants;
      opt.window = cfg.window;
      opt.budget = cfg.budget;
      opt.sheets = cfg.sheets;
      Json rep = report_envelope("quasicircle", cfg);
      rep["space"] = space_json(*space);
      rep["center"] = z;
      rep["scale"] = r;
      int code = 0;
      try {
        auto res = chord_arc_pipeline(pms, z, r, opt);
        rep["quasicircle"] = quasicircle_json(res);
        bool ok = res.certificate.winding && std::abs(*res.certificate.winding) == 1 &&
                  res.certificate.lambda <= res.lambda_ceiling && res.c2 <= res.c2_ceiling;
        code = ok ? 0 : 2;
        rep["status"] = ok ? "pass" : "failures";
        if (!svg.empty()) {
          SvgOverlays ov;
          ov.loop = res.minimized.loop.points;
          ov.center = z;
          emit(svg, render_svg(*space, ov));
        }
      } catch (const Refusal& e) {
        rep["quasicircle"] = {{"refused", e.what()}};
        rep["status"] = "refused";
        code = 2;
      }
      emit(cc.out, dump_report(rep));
      return code;
    }

    if (pip->parsed()) {
      PipelineConfig cfg = make_config(pc, pa);
      auto space = load_space(pa, cfg);
      PipelineReport rep = run_pipeline(space, cfg);
      emit(pc.out, dump_report(rep.json));
      if (!pipe_svg.empty() && rep.quasicircle) {
        SvgOverlays ov;
        ov.loop = rep.quasicircle->minimized.loop.points;
        ov.center = rep.json["center"].get<PointId>();
        emit(pipe_svg, render_svg(*space, ov));
      }
      return rep.exit_code();
    }

    if (ren->parsed()) {
      PipelineConfig cfg = make_config(rc, ra);
      if (ren_center->count()) cfg.center = rc.center_value;
      auto space = load_space(ra, cfg);
      SvgOverlays ov;
      if (!report_path.empty()) {
        std::ifstream in(report_path);
        if (!in) throw InvalidInput("cannot open " + report_path);
        Json report = Json::parse(in);
        ov.loop = report_loop(report);
        if (!cfg.center && report.contains("center")) cfg.center = report["center"].get<PointId>();
      }
      PointId z = cfg.center ? *cfg.center : default_center(*space);
      if (z >= space->size()) throw InvalidInput("center out of range");
      ov.center = z;
      if (bands > 0) {
        PathMetricSpace pms(space);
        ov.bands = level_sets(pms, {z}, bands).bands;
      }
      emit(rc.out, render_svg(*space, ov));
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
