#include <cmath>
#include <filesystem>
#include <fstream>
#include <memory>
#include <sstream>

#include "doctest.h"
#include "quasidisk/cli_io.hpp"
#include "quasidisk/invariants.hpp"

using namespace quasidisk;

namespace {

std::size_t count_of(const std::string& text, const std::string& needle) {
  std::size_t n = 0;
  for (auto at = text.find(needle); at != std::string::npos; at = text.find(needle, at + 1)) ++n;
  return n;
}

// 3 x 3 vertex grid of unit squares in the plane z = 0.
const char* kQuadOff =
    "OFF\n"
    "# two by two squares\n"
    "9 4 0\n"
    "0 0 0\n1 0 0\n2 0 0\n"
    "0 1 0\n1 1 0\n2 1 0\n"
    "0 2 0\n1 2 0\n2 2 0\n"
    "4 0 1 4 3\n4 1 2 5 4\n4 3 4 7 6\n4 4 5 8 7\n";

const char* kQuadObj =
    "# same grid, slash indices and a relative face\n"
    "v 0 0 0\nv 1 0 0\nv 2 0 0\n"
    "v 0 1 0\nv 1 1 0\nv 2 1 0\n"
    "v 0 2 0\nv 1 2 0\nv 2 2 0\n"
    "vn 0 0 1\n"
    "f 1/1/1 2/2/1 5/5/1 4/4/1\nf 2 3 6 5\nf 4 5 8 7\nf -5 -4 -1 -2\n";

std::shared_ptr<const FiniteMetricSpace> disk(double spacing, double radius, PointId* center) {
  FixtureSpec s;
  s.spacing = spacing;
  s.radius = radius;
  Fixture fx = generate(s);
  *center = fx.center;
  return std::make_shared<const FiniteMetricSpace>(std::move(fx.space));
}

}  // namespace

TEST_CASE("csv with a header, permuted ids and weights") {
  std::istringstream in("# comment\nid, x, y, w\n2,0,1,0.5\n0,0,0,0.25\n1,1,0,0.25\n");
  auto s = read_csv(in);
  REQUIRE(s.size() == 3);
  CHECK(s.has_chart());
  CHECK(s.chart_at(2).v == 1.0);
  CHECK(s.weight2(2) == 0.5);
  CHECK(s.dist(1, 2) == doctest::Approx(std::sqrt(2.0)));
}

TEST_CASE("csv without a header") {
  std::istringstream planar("0,0,0\n1,3,4\n2,6,8\n");
  auto s = read_csv(planar);
  CHECK(s.dist(0, 1) == 5.0);
  CHECK_FALSE(s.has_weights());

  std::istringstream spatial("0,0,0,0\n1,1,2,2\n");
  auto t = read_csv(spatial);
  CHECK(t.dist(0, 1) == 3.0);
  CHECK_FALSE(t.has_chart());
}

TEST_CASE("malformed csv is rejected") {
  auto fails = [](const std::string& text) {
    std::istringstream in(text);
    CHECK_THROWS_AS(read_csv(in), InvalidInput);
  };
  fails("");
  fails("# only a comment\n\n");
  fails("id,x,y\n");
  fails("0,0,0\n1,1\n");
  fails("0,0,0\n1,abc,0\n");
  fails("0,0,0\n0,1,0\n");
  fails("0,0,0\n5,1,0\n");
  fails("id,x,q\n0,0,0\n");
  fails("1,2,3,4,5\n");
  std::istringstream in("0,0,0\n1,x,0\n");
  try {
    read_csv(in);
    FAIL("no throw");
  } catch (const InvalidInput& e) {
    CHECK(std::string(e.what()).find("line 2") != std::string::npos);
  }
}

TEST_CASE("csv round trip keeps coordinates exactly") {
  FixtureSpec spec;
  spec.kind = FixtureKind::kFlatDisk;
  spec.spacing = 0.1;
  spec.jitter = 0.3;
  spec.seed = 9;
  Fixture fx = generate(spec);
  std::stringstream buf;
  write_csv(buf, fx.space);
  auto back = read_csv(buf);
  REQUIRE(back.size() == fx.space.size());
  for (PointId p = 0; p < back.size(); ++p) {
    CHECK(back.chart_at(p).u == fx.space.chart_at(p).u);
    CHECK(back.chart_at(p).v == fx.space.chart_at(p).v);
    CHECK(back.weight2(p) == fx.space.weight2(p));
  }
  CHECK(back.dist(0, PointId(back.size() - 1)) == fx.space.dist(0, PointId(back.size() - 1)));

  FixtureSpec cone;
  cone.kind = FixtureKind::kCone;
  cone.spacing = 0.1;
  cone.radius = 0.3;
  std::stringstream sink;
  CHECK_THROWS_AS(write_csv(sink, generate(cone).space), InvalidInput);
}

TEST_CASE("matrix text and binary forms") {
  std::istringstream text("3\n0 3 4\n3 0 5\n4 5 0\n");
  auto s = read_matrix(text);
  CHECK(s.size() == 3);
  CHECK(s.dist(1, 2) == 5.0);

  FixtureSpec cone;
  cone.kind = FixtureKind::kCone;
  cone.spacing = 0.1;
  cone.radius = 0.3;
  Fixture fx = generate(cone);
  std::stringstream bin;
  write_matrix(bin, fx.space);
  CHECK(bin.str().substr(0, 4) == "QDMX");
  CHECK(bin.str().size() == 12 + 8 * fx.space.size() * fx.space.size());
  auto back = read_matrix(bin);
  for (PointId a = 0; a < back.size(); ++a) {
    for (PointId b = 0; b < back.size(); ++b) {
      if (a != b) CHECK(back.dist(a, b) == fx.space.dist(a, b));
    }
  }

  std::istringstream short_text("2\n0 1\n1\n");
  CHECK_THROWS_AS(read_matrix(short_text), InvalidInput);
  std::istringstream empty("");
  CHECK_THROWS_AS(read_matrix(empty), InvalidInput);
  std::string truncated = bin.str().substr(0, 40);
  std::istringstream cut(truncated);
  CHECK_THROWS_AS(read_matrix(cut), InvalidInput);
}

TEST_CASE("OFF mesh gives the edge-graph metric") {
  std::istringstream in(kQuadOff);
  auto s = read_off(in);
  REQUIRE(s.size() == 9);
  CHECK(s.has_chart());
  // Opposite corners: four unit edges, against a straight line of 2 sqrt 2.
  CHECK(s.dist(0, 8) == doctest::Approx(4.0));
  CHECK(s.dist(0, 4) == doctest::Approx(2.0));
  CHECK(s.dist(3, 5) == doctest::Approx(2.0));
  for (PointId a = 0; a < 9; ++a) {
    for (PointId b = a + 1; b < 9; ++b) {
      double euclid = std::hypot(s.chart_at(a).u - s.chart_at(b).u, s.chart_at(a).v - s.chart_at(b).v);
      CHECK(s.dist(a, b) >= euclid - 1e-12);
    }
  }
}

TEST_CASE("OBJ mesh matches the OFF mesh") {
  std::istringstream off(kQuadOff), obj(kQuadObj);
  auto a = read_off(off);
  auto b = read_obj(obj);
  REQUIRE(a.size() == b.size());
  for (PointId p = 0; p < a.size(); ++p) {
    for (PointId q = p + 1; q < a.size(); ++q) CHECK(a.dist(p, q) == b.dist(p, q));
  }
}

TEST_CASE("non-planar meshes have no chart and malformed meshes fail") {
  std::istringstream tet(
      "OFF\n4 4 0\n0 0 0\n1 0 0\n0 1 0\n0 0 1\n3 0 1 2\n3 0 1 3\n3 0 2 3\n3 1 2 3\n");
  auto s = read_off(tet);
  CHECK_FALSE(s.has_chart());
  CHECK(s.dist(1, 3) == doctest::Approx(std::sqrt(2.0)));

  std::istringstream bad_index("OFF\n3 1 0\n0 0 0\n1 0 0\n0 1 0\n3 0 1 7\n");
  CHECK_THROWS_AS(read_off(bad_index), InvalidInput);
  std::istringstream no_header("3 1 0\n0 0 0\n");
  CHECK_THROWS_AS(read_off(no_header), InvalidInput);
  std::istringstream empty_obj("# nothing\n");
  CHECK_THROWS_AS(read_obj(empty_obj), InvalidInput);
  std::istringstream isolated("v 0 0 0\nv 1 0 0\nv 5 5 0\nl 1 2\n");
  CHECK_THROWS(read_obj(isolated));
}

TEST_CASE("ingest picks the format from the extension") {
  auto dir = std::filesystem::temp_directory_path() / "quasidisk_cli_io_test";
  std::filesystem::create_directories(dir);
  {
    std::ofstream(dir / "m.off") << kQuadOff;
    std::ofstream(dir / "p.csv") << "x,y\n0,0\n1,0\n";
    std::ofstream(dir / "e.csv");
    std::ofstream(dir / "u.xyz") << "1 2 3\n";
  }
  CHECK(ingest(dir / "m.off").size() == 9);
  CHECK(ingest(dir / "p.csv").size() == 2);
  CHECK(ingest(dir / "m.off", InputFormat::kOff).size() == 9);
  CHECK_THROWS_AS(ingest(dir / "e.csv"), InvalidInput);
  CHECK_THROWS_AS(ingest(dir / "u.xyz"), InvalidInput);
  CHECK_THROWS_AS(ingest(dir / "absent.csv"), InvalidInput);
  CHECK(parse_input_format("OBJ") == InputFormat::kObj);
  CHECK_THROWS_AS(parse_input_format("ply"), InvalidInput);
  std::filesystem::remove_all(dir);
}

TEST_CASE("config from JSON and TOML agree") {
  auto dir = std::filesystem::temp_directory_path() / "quasidisk_config_test";
  std::filesystem::create_directories(dir);
  {
    std::ofstream(dir / "c.json") << R"({"scale": 0.1, "center": 7, "guard_off": true,
      "window": "0.05:0.4", "budget": {"centers": 10, "seed": 3}, "sheets": 6,
      "constants": {"lambda": 1.5, "l": 1.1},
      "fixture": {"kind": "cone", "spacing": 0.02, "cone_angle": 3.0}})";
    std::ofstream(dir / "c.toml") << "scale = 0.1\ncenter = 7\nguard_off = true\n"
                                     "window = [0.05, 0.4]\nsheets = 6\n"
                                     "[budget]\ncenters = 10\nseed = 3\n"
                                     "[constants]\nlambda = 1.5\nl = 1.1\n"
                                     "[fixture]\nkind = \"cone\"\nspacing = 0.02\n"
                                     "cone_angle = 3.0\n";
    std::ofstream(dir / "bad.toml") << "scale = 0.1\nsclae = 2\n";
    std::ofstream(dir / "broken.toml") << "scale = = 1\n";
  }
  auto a = load_config(dir / "c.json");
  auto b = load_config(dir / "c.toml");
  CHECK(config_json(a) == config_json(b));
  CHECK(a.budget.centers == 10);
  CHECK(b.budget.seed == 3);
  CHECK(*a.scale == 0.1);
  CHECK(a.window.lo == 0.05);
  CHECK(a.window.hi == 0.4);
  CHECK(a.fixture->kind == FixtureKind::kCone);
  CHECK(b.constants->lambda == 1.5);
  CHECK(b.constants->q == 2.0);
  CHECK_THROWS_AS(load_config(dir / "bad.toml"), InvalidInput);
  CHECK_THROWS_AS(load_config(dir / "broken.toml"), InvalidInput);
  CHECK_THROWS_AS(parse_config(Json{{"budget", {{"centres", 3}}}}), InvalidInput);
  CHECK_THROWS_AS(parse_config(Json{{"scale", "big"}}), InvalidInput);
  CHECK_THROWS_AS(parse_config(Json{{"scale", -1.0}}), InvalidInput);
  std::filesystem::remove_all(dir);
}

TEST_CASE("scale windows parse from lo:hi") {
  CHECK(parse_window("0.1:2").lo == 0.1);
  CHECK(parse_window("0.1:2").hi == 2.0);
  CHECK(parse_window(":3").lo == 0.0);
  CHECK(std::isinf(parse_window("0.5:").hi));
  CHECK_THROWS_AS(parse_window("2"), InvalidInput);
  CHECK_THROWS_AS(parse_window("3:1"), InvalidInput);
  CHECK_THROWS_AS(parse_window("a:1"), InvalidInput);
}

TEST_CASE("fixtures are deterministic for a fixed seed") {
  FixtureSpec spec;
  spec.spacing = 0.1;
  spec.jitter = 0.25;
  spec.seed = 4;
  auto a = generate(spec), b = generate(spec);
  spec.seed = 5;
  auto c = generate(spec);
  REQUIRE(a.space.size() == b.space.size());
  bool same = true, differs = false;
  for (PointId p = 0; p < a.space.size(); ++p) {
    same = same && a.space.chart_at(p).u == b.space.chart_at(p).u &&
           a.space.chart_at(p).v == b.space.chart_at(p).v;
    if (p < c.space.size()) differs = differs || a.space.chart_at(p).u != c.space.chart_at(p).u;
  }
  CHECK(same);
  CHECK(differs);
}

TEST_CASE("grid fixture of 100 by 100 points") {
  FixtureSpec spec;
  spec.kind = FixtureKind::kGrid;
  spec.n = 100;
  spec.spacing = 0.01;
  auto fx = generate(spec);
  REQUIRE(fx.space.size() == 10000);
  for (PointId p = 0; p < fx.space.size(); p += 97) {
    CHECK(fx.space.weight2(p) == doctest::Approx(1e-4).epsilon(1e-12));
  }
}

TEST_CASE("snowflake fixture has dimension near 1 / alpha") {
  FixtureSpec spec;
  spec.kind = FixtureKind::kSnowflake;
  spec.alpha = 0.5;
  spec.n = 1025;
  auto fx = generate(spec);
  auto a = assouad_estimate(fx.space, all_points(fx.space), default_window(fx.space));
  CHECK(a.q >= 1.7);
  CHECK(a.q <= 2.3);
}

TEST_CASE("manifest lists every fixture with expectations") {
  Json m = fixture_manifest();
  CHECK(m["schema_version"] == kSchemaVersion);
  REQUIRE(m["fixtures"].size() == 9);
  for (const auto& f : m["fixtures"]) {
    CHECK(f["points"].get<std::size_t>() > 0);
    CHECK_FALSE(f["expected"].empty());
    for (const auto& e : f["expected"]) {
      CHECK_FALSE(e["basis"].get<std::string>().empty());
      CHECK(e["lo"].get<double>() <= (e["hi"].is_null() ? 1e300 : e["hi"].get<double>()));
    }
  }
}

TEST_CASE("pipeline on the flat disk passes and embeds its configuration") {
  PointId z = 0;
  auto space = disk(0.02, 1.0, &z);
  PipelineConfig cfg;
  cfg.center = z;
  cfg.scale = 0.1;
  cfg.guard_off = true;
  cfg.seed = 11;
  auto rep = run_pipeline(space, cfg);
  const Json& j = rep.json;
  CHECK(rep.status == ReportStatus::kPass);
  CHECK(rep.exit_code() == 0);
  CHECK_FALSE(rep.partial);
  CHECK(j["schema_version"] == kSchemaVersion);
  CHECK(j["seed"] == 11);
  CHECK(j["config"]["guard_off"] == true);
  CHECK(j["budgets"]["centers"] == cfg.budget.centers);
  CHECK(j["status"] == "pass");
  for (const auto& [name, ok] : j["checks"].items()) CHECK_MESSAGE(ok.get<bool>(), name);
  CHECK(j["checks"].size() == 10);
  const Json& q = j["stages"]["quasicircle"];
  CHECK(std::abs(q["certificate"]["winding"].get<int>()) == 1);
  CHECK(q["minimized"]["loop"]["points"].size() == rep.quasicircle->minimized.loop.size());
  CHECK(j["stages"]["verification"]["porosity"].get<double>() <= 4.0);
  CHECK(j["stages"]["quasiconvexity"]["l_hat"].get<double>() <= 1.5);
}

TEST_CASE("pipeline reports are byte-stable") {
  PointId z = 0;
  auto space = disk(0.05, 1.0, &z);
  PipelineConfig cfg;
  cfg.center = z;
  cfg.scale = 0.25;
  cfg.guard_off = true;
  std::string a = dump_report(run_pipeline(space, cfg).json);
  std::string b = dump_report(run_pipeline(space, cfg).json);
  CHECK(a == b);

  // The same space rebuilt from a file gives the same bytes.
  std::stringstream csv;
  write_csv(csv, *space);
  auto again = std::make_shared<const FiniteMetricSpace>(read_csv(csv));
  CHECK(dump_report(run_pipeline(again, cfg).json) == a);

  std::ifstream golden(std::filesystem::path(QUASIDISK_SOURCE_DIR) / "tests/golden/pipeline_flat.json");
  REQUIRE(golden);
  std::stringstream want;
  want << golden.rdbuf();
  CHECK(want.str() == a);
}

TEST_CASE("pipeline without a chart is partial") {
  FixtureSpec spec;
  spec.kind = FixtureKind::kSphere;
  spec.n = 400;
  auto fx = generate(spec);
  auto space = std::make_shared<const FiniteMetricSpace>(std::move(fx.space));
  auto rep = run_pipeline(space, PipelineConfig{});
  CHECK(rep.partial);
  CHECK(rep.json["partial"] == true);
  CHECK_FALSE(rep.quasicircle);
  for (const char* s : {"quasicircle", "domain", "verification"}) {
    CHECK(rep.json["stages"][s].contains("skipped"));
  }
  CHECK(rep.json["stages"].contains("invariants"));
  CHECK(rep.json["stages"].contains("quasiconvexity"));
}

TEST_CASE("pipeline above the scale guard is refused") {
  PointId z = 0;
  auto space = disk(0.05, 1.0, &z);
  PipelineConfig cfg;
  cfg.center = z;
  cfg.scale = 0.25;
  auto rep = run_pipeline(space, cfg);
  CHECK(rep.status == ReportStatus::kRefused);
  CHECK(rep.exit_code() == 2);
  CHECK(rep.json["status"] == "refused");
  CHECK(rep.json["stages"]["quasicircle"].contains("refused"));
  CHECK(rep.json["stages"]["domain"].contains("skipped"));

  cfg.center = PointId(space->size());
  CHECK_THROWS_AS(run_pipeline(space, cfg), InvalidInput);
}

TEST_CASE("svg overlays") {
  PointId z = 0;
  auto space = disk(0.1, 1.0, &z);
  SvgOverlays ov;
  ov.loop = {0, 1, 2, 3, 4};
  ov.center = z;
  ov.bands = {{5, 6}, {7}, {8, 9, 10}};
  std::string svg = render_svg(*space, ov);
  CHECK(count_of(svg, "<line class=\"loop\"") == 5);
  CHECK(count_of(svg, "<circle class=\"pt\"") == space->size());
  CHECK(count_of(svg, "class=\"band-0\" cx") == 2);
  CHECK(count_of(svg, "class=\"band-1\" cx") == 1);
  CHECK(count_of(svg, "class=\"band-2\" cx") == 3);
  CHECK(count_of(svg, "class=\"center\" cx") == 1);
  CHECK(render_svg(*space, ov) == svg);

  ov.loop.push_back(PointId(space->size()));
  CHECK_THROWS_AS(render_svg(*space, ov), InvalidInput);

  FixtureSpec sphere;
  sphere.kind = FixtureKind::kSphere;
  sphere.n = 100;
  CHECK_THROWS_AS(render_svg(generate(sphere).space, SvgOverlays{}), InvalidInput);
}
