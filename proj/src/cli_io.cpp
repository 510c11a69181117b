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

#include "quasidisk/cli_io.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <istream>
#include <limits>
#include <map>
#include <ostream>
#include <set>
#include <sstream>

#include "quasidisk/winding.hpp"
#include "toml.hpp"

namespace quasidisk {
namespace {

constexpr char kMatrixMagic[4] = {'Q', 'D', 'M', 'X'};

std::string trim(std::string_view s) {
  auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

std::string lower(std::string s) {
  for (char& c : s) c = char(std::tolower(static_cast<unsigned char>(c)));
  return s;
}

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream in(line);
  while (std::getline(in, cur, sep)) out.push_back(trim(cur));
  if (!line.empty() && line.back() == sep) out.emplace_back();
  return out;
}

std::optional<double> to_number(const std::string& s) {
  if (s.empty()) return std::nullopt;
  char* end = nullptr;
  double v = std::strtod(s.c_str(), &end);
  if (end != s.c_str() + s.size() || !std::isfinite(v)) return std::nullopt;
  return v;
}

std::string where(std::size_t line) { return "line " + std::to_string(line) + ": "; }

// Reads whitespace-separated tokens, skipping '#' comments.
class Tokens {
 public:
  explicit Tokens(std::istream& in) : in_(in) {}

  bool next_line(std::vector<std::string>& out) {
    std::string line;
    while (std::getline(in_, line)) {
      ++line_;
      if (auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
      std::istringstream ls(line);
      out.clear();
      for (std::string t; ls >> t;) out.push_back(t);
      if (!out.empty()) return true;
    }
    return false;
  }
  std::size_t line() const { return line_; }

 private:
  std::istream& in_;
  std::size_t line_ = 0;
};

double parse_or_throw(const std::string& s, std::size_t line) {
  auto v = to_number(s);
  if (!v) throw InvalidInput(where(line) + "not a number: '" + s + "'");
  return *v;
}

struct Mesh {
  std::vector<double> xyz;
  std::set<std::pair<PointId, PointId>> edges;
};

void add_face(Mesh& mesh, const std::vector<long>& idx, bool closed, std::size_t line) {
  const long n = long(mesh.xyz.size() / 3);
  for (long i : idx) {
    if (i < 0 || i >= n) throw InvalidInput(where(line) + "vertex index out of range");
  }
  std::size_t k = idx.size();
  for (std::size_t i = 0; i + (closed ? 0 : 1) < k; ++i) {
    auto a = PointId(idx[i]), b = PointId(idx[(i + 1) % k]);
    if (a != b) mesh.edges.insert({std::min(a, b), std::max(a, b)});
  }
}

FiniteMetricSpace mesh_space(const Mesh& mesh, const SpaceOptions& options) {
  const std::size_t n = mesh.xyz.size() / 3;
  if (n == 0) throw InvalidInput("mesh has no vertices");
  std::vector<WeightedEdge> edges;
  for (auto [a, b] : mesh.edges) {
    double dx = mesh.xyz[3 * a] - mesh.xyz[3 * b];
    double dy = mesh.xyz[3 * a + 1] - mesh.xyz[3 * b + 1];
    double dz = mesh.xyz[3 * a + 2] - mesh.xyz[3 * b + 2];
    edges.push_back({a, b, std::sqrt(dx * dx + dy * dy + dz * dz)});
  }
  std::vector<Vec2> chart;
  bool flat = true;
  for (std::size_t i = 1; i < n && flat; ++i) flat = mesh.xyz[3 * i + 2] == mesh.xyz[2];
  if (flat) {
    for (std::size_t i = 0; i < n; ++i) chart.push_back({mesh.xyz[3 * i], mesh.xyz[3 * i + 1]});
  }
  return build_space(edge_list_source(n, edges), std::move(chart), {}, options);
}

template <typename T>
T read_le(std::istream& in) {
  std::array<char, sizeof(T)> buf;
  if (!in.read(buf.data(), buf.size())) throw InvalidInput("truncated binary matrix");
  if constexpr (std::endian::native == std::endian::big) std::reverse(buf.begin(), buf.end());
  T v;
  std::memcpy(&v, buf.data(), sizeof(T));
  return v;
}

template <typename T>
void write_le(std::ostream& out, T v) {
  std::array<char, sizeof(T)> buf;
  std::memcpy(buf.data(), &v, sizeof(T));
  if constexpr (std::endian::native == std::endian::big) std::reverse(buf.begin(), buf.end());
  out.write(buf.data(), buf.size());
}

void check_keys(const Json& j, std::initializer_list<const char*> allowed, const char* what) {
  if (!j.is_object()) throw InvalidInput(std::string(what) + " must be a table");
  for (const auto& [key, value] : j.items()) {
    if (std::find_if(allowed.begin(), allowed.end(),
                     [&](const char* a) { return key == a; }) == allowed.end()) {
      throw InvalidInput(std::string("unknown key in ") + what + ": " + key);
    }
  }
}

template <typename T>
void take(const Json& j, const char* key, T& out) {
  if (!j.contains(key)) return;
  try {
    out = j.at(key).get<T>();
  } catch (const nlohmann::json::exception&) {
    throw InvalidInput(std::string("bad value for ") + key);
  }
}

Json toml_to_json(const toml::node& node) {
  if (auto t = node.as_table()) {
    Json j = Json::object();
    for (const auto& [k, v] : *t) j[std::string(k.str())] = toml_to_json(v);
    return j;
  }
  if (auto a = node.as_array()) {
    Json j = Json::array();
    for (const auto& v : *a) j.push_back(toml_to_json(v));
    return j;
  }
  if (auto v = node.as_string()) return v->get();
  if (auto v = node.as_integer()) return v->get();
  if (auto v = node.as_floating_point()) return v->get();
  if (auto v = node.as_boolean()) return v->get();
  throw InvalidInput("unsupported TOML value (dates are not configuration)");
}

Json window_json(ScaleWindow w) { return Json::array({w.lo, w.hi}); }

Json point_or_null(PointId p) { return p == kNoPoint ? Json(nullptr) : Json(p); }

ScaleWindow resolve_window(const FiniteMetricSpace& space, ScaleWindow w) {
  ScaleWindow d = default_window(space);
  if (w.lo > 0) d.lo = w.lo;
  if (std::isfinite(w.hi)) d.hi = w.hi;
  if (!(d.hi > d.lo)) throw InvalidInput("empty scale window");
  return d;
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

}  // namespace

// ---- ingestion -------------------------------------------------------------

InputFormat parse_input_format(const std::string& name) {
  std::string n = lower(name);
  if (n == "auto") return InputFormat::kAuto;
  if (n == "csv") return InputFormat::kCsv;
  if (n == "matrix" || n == "qdmx") return InputFormat::kMatrix;
  if (n == "off") return InputFormat::kOff;
  if (n == "obj") return InputFormat::kObj;
  throw InvalidInput("unknown input format: " + name);
}

FiniteMetricSpace read_csv(std::istream& in, const SpaceOptions& options) {
  std::string line;
  std::size_t line_no = 0;
  // Column slots: id, x, y, z, w; -1 when absent.
  std::array<int, 5> col{-1, -1, -1, -1, -1};
  std::size_t width = 0;
  bool have_layout = false;
  std::vector<std::array<double, 5>> rows;
  while (std::getline(in, line)) {
    ++line_no;
    std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    auto fields = split(t, ',');
    if (!have_layout) {
      have_layout = true;
      width = fields.size();
      bool header = std::any_of(fields.begin(), fields.end(),
                                [](const std::string& f) { return !to_number(f); });
      if (header) {
        const std::array<const char*, 5> names{"id", "x", "y", "z", "w"};
        for (std::size_t i = 0; i < fields.size(); ++i) {
          auto it = std::find(names.begin(), names.end(), lower(fields[i]));
          if (it == names.end()) throw InvalidInput(where(line_no) + "unknown column " + fields[i]);
          auto slot = std::size_t(it - names.begin());
          if (col[slot] >= 0) throw InvalidInput(where(line_no) + "repeated column " + fields[i]);
          col[slot] = int(i);
        }
        if (col[1] < 0 || col[2] < 0) throw InvalidInput("header needs x and y columns");
        continue;
      }
      if (width == 2) {
        col = {-1, 0, 1, -1, -1};
      } else if (width == 3) {
        col = {0, 1, 2, -1, -1};
      } else if (width == 4) {
        col = {0, 1, 2, 3, -1};
      } else {
        throw InvalidInput(where(line_no) + "expected x,y or id,x,y[,z] without a header");
      }
    }
    if (fields.size() != width) {
      throw InvalidInput(where(line_no) + "expected " + std::to_string(width) + " fields");
    }
    std::array<double, 5> row{0, 0, 0, 0, 0};
    for (std::size_t s = 0; s < 5; ++s) {
      if (col[s] >= 0) row[s] = parse_or_throw(fields[std::size_t(col[s])], line_no);
    }
    rows.push_back(row);
  }
  if (rows.empty()) throw InvalidInput("empty input: no points");

  const std::size_t n = rows.size();
  std::vector<std::size_t> slot(n);
  if (col[0] >= 0) {
    std::vector<char> seen(n, 0);
    for (std::size_t i = 0; i < n; ++i) {
      double id = rows[i][0];
      if (id < 0 || id >= double(n) || id != std::floor(id) || seen[std::size_t(id)]) {
        throw InvalidInput("ids must be a permutation of 0..n-1");
      }
      seen[std::size_t(id)] = 1;
      slot[i] = std::size_t(id);
    }
  } else {
    for (std::size_t i = 0; i < n; ++i) slot[i] = i;
  }
  const bool planar = col[3] < 0;
  const int dim = planar ? 2 : 3;
  std::vector<double> coords(n * std::size_t(dim));
  std::vector<Vec2> chart;
  std::vector<double> weights;
  if (planar) chart.resize(n);
  if (col[4] >= 0) weights.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    std::size_t k = slot[i];
    for (int d = 0; d < dim; ++d) coords[k * std::size_t(dim) + std::size_t(d)] = rows[i][1 + std::size_t(d)];
    if (planar) chart[k] = {rows[i][1], rows[i][2]};
    if (col[4] >= 0) {
      if (!(rows[i][4] >= 0)) throw InvalidInput("weights must be non-negative");
      weights[k] = rows[i][4];
    }
  }
  return build_space(coordinate_source(dim, std::move(coords)), std::move(chart),
                     std::move(weights), options);
}

FiniteMetricSpace read_matrix(std::istream& in, const SpaceOptions& options) {
  char magic[4] = {0, 0, 0, 0};
  in.read(magic, 4);
  if (in.gcount() == 4 && std::memcmp(magic, kMatrixMagic, 4) == 0) {
    auto n = read_le<std::uint64_t>(in);
    if (n == 0) throw InvalidInput("empty input: no points");
    if (n > 100000) throw InvalidInput("matrix too large");
    std::vector<double> m(n * n);
    for (double& v : m) v = read_le<double>(in);
    if (in.peek() != std::char_traits<char>::eof()) throw InvalidInput("trailing bytes after matrix");
    return build_space(matrix_source(std::size_t(n), std::move(m)), {}, {}, options);
  }
  in.clear();
  in.seekg(0);
  Tokens tok(in);
  std::vector<std::string> fields;
  std::vector<double> values;
  while (tok.next_line(fields)) {
    for (const auto& f : fields) values.push_back(parse_or_throw(f, tok.line()));
  }
  if (values.empty()) throw InvalidInput("empty input: no points");
  double nd = values[0];
  if (nd < 1 || nd != std::floor(nd)) throw InvalidInput("matrix size must be a positive integer");
  auto n = std::size_t(nd);
  if (values.size() != 1 + n * n) {
    throw InvalidInput("expected " + std::to_string(n * n) + " distances, found " +
                       std::to_string(values.size() - 1));
  }
  values.erase(values.begin());
  return build_space(matrix_source(n, std::move(values)), {}, {}, options);
}

FiniteMetricSpace read_off(std::istream& in, const SpaceOptions& options) {
  Tokens tok(in);
  std::vector<std::string> f;
  if (!tok.next_line(f)) throw InvalidInput("empty input: no points");
  if (f[0].rfind("OFF", 0) != 0) throw InvalidInput("missing OFF header");
  f.erase(f.begin());
  if (f.empty() && !tok.next_line(f)) throw InvalidInput("missing OFF counts");
  if (f.size() < 2) throw InvalidInput(where(tok.line()) + "expected vertex and face counts");
  auto nv = std::size_t(parse_or_throw(f[0], tok.line()));
  auto nf = std::size_t(parse_or_throw(f[1], tok.line()));
  if (nv == 0) throw InvalidInput("empty input: no points");
  Mesh mesh;
  for (std::size_t i = 0; i < nv; ++i) {
    if (!tok.next_line(f) || f.size() < 3) throw InvalidInput("truncated OFF vertex list");
    for (int d = 0; d < 3; ++d) mesh.xyz.push_back(parse_or_throw(f[std::size_t(d)], tok.line()));
  }
  for (std::size_t i = 0; i < nf; ++i) {
    if (!tok.next_line(f)) throw InvalidInput("truncated OFF face list");
    auto k = std::size_t(parse_or_throw(f[0], tok.line()));
    if (f.size() < k + 1 || k < 2) throw InvalidInput(where(tok.line()) + "malformed face");
    std::vector<long> idx;
    for (std::size_t j = 1; j <= k; ++j) idx.push_back(long(parse_or_throw(f[j], tok.line())));
    add_face(mesh, idx, k > 2, tok.line());
  }
  return mesh_space(mesh, options);
}

FiniteMetricSpace read_obj(std::istream& in, const SpaceOptions& options) {
  Tokens tok(in);
  std::vector<std::string> f;
  Mesh mesh;
  std::vector<std::pair<std::vector<long>, std::pair<bool, std::size_t>>> faces;
  while (tok.next_line(f)) {
    if (f[0] == "v") {
      if (f.size() < 4) throw InvalidInput(where(tok.line()) + "vertex needs x y z");
      for (int d = 1; d <= 3; ++d) mesh.xyz.push_back(parse_or_throw(f[std::size_t(d)], tok.line()));
    } else if (f[0] == "f" || f[0] == "l") {
      std::vector<long> idx;
      for (std::size_t j = 1; j < f.size(); ++j) {
        std::string head = f[j].substr(0, f[j].find('/'));
        double v = parse_or_throw(head, tok.line());
        if (v == 0 || v != std::floor(v)) throw InvalidInput(where(tok.line()) + "bad index");
        // Negative indices count back from the latest vertex.
        long nv = long(mesh.xyz.size() / 3);
        idx.push_back(v > 0 ? long(v) - 1 : nv + long(v));
      }
      if (idx.size() < 2) throw InvalidInput(where(tok.line()) + "element needs two vertices");
      faces.push_back({idx, {f[0] == "f", tok.line()}});
    }
  }
  if (mesh.xyz.empty()) throw InvalidInput("empty input: no points");
  for (const auto& [idx, info] : faces) add_face(mesh, idx, info.first, info.second);
  return mesh_space(mesh, options);
}

FiniteMetricSpace ingest(const std::filesystem::path& path, InputFormat format,
                         const SpaceOptions& options) {
  if (format == InputFormat::kAuto) {
    std::string ext = lower(path.extension().string());
    if (ext == ".csv" || ext == ".txt") {
      format = InputFormat::kCsv;
    } else if (ext == ".qdmx" || ext == ".mat" || ext == ".dist") {
      format = InputFormat::kMatrix;
    } else if (ext == ".off") {
      format = InputFormat::kOff;
    } else if (ext == ".obj") {
      format = InputFormat::kObj;
    } else {
      throw InvalidInput("cannot infer the format of " + path.string());
    }
  }
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InvalidInput("cannot open " + path.string());
  switch (format) {
    case InputFormat::kCsv: return read_csv(in, options);
    case InputFormat::kMatrix: return read_matrix(in, options);
    case InputFormat::kOff: return read_off(in, options);
    case InputFormat::kObj: return read_obj(in, options);
    case InputFormat::kAuto: break;
  }
  throw InvalidInput("unreachable input format");
}

void write_csv(std::ostream& out, const FiniteMetricSpace& space) {
  const auto& src = space.source();
  if (src.kind != MetricKind::kEuclidean || (src.dim != 2 && src.dim != 3) ||
      space.scale() != 1.0) {
    throw InvalidInput("CSV holds unscaled Euclidean coordinates only; use a matrix");
  }
  const bool w = space.has_weights();
  out << "id,x,y" << (src.dim == 3 ? ",z" : "") << (w ? ",w" : "") << '\n';
  out.precision(std::numeric_limits<double>::max_digits10);
  for (PointId p = 0; p < space.size(); ++p) {
    out << p;
    for (int d = 0; d < src.dim; ++d) out << ',' << src.coords[std::size_t(p) * std::size_t(src.dim) + std::size_t(d)];
    if (w) out << ',' << space.weight2(p);
    out << '\n';
  }
}

void write_matrix(std::ostream& out, const FiniteMetricSpace& space) {
  out.write(kMatrixMagic, 4);
  write_le<std::uint64_t>(out, space.size());
  for (PointId a = 0; a < space.size(); ++a) {
    for (PointId b = 0; b < space.size(); ++b) write_le<double>(out, a == b ? 0.0 : space.dist(a, b));
  }
}

// ---- configuration ---------------------------------------------------------

ScaleWindow parse_window(const std::string& text) {
  auto colon = text.find(':');
  if (colon == std::string::npos) throw InvalidInput("window must be lo:hi");
  ScaleWindow w{0.0, kInf};
  std::string lo = trim(text.substr(0, colon)), hi = trim(text.substr(colon + 1));
  if (!lo.empty()) {
    auto v = to_number(lo);
    if (!v || *v < 0) throw InvalidInput("bad window lower end: " + lo);
    w.lo = *v;
  }
  if (!hi.empty()) {
    auto v = to_number(hi);
    if (!v || !(*v > w.lo)) throw InvalidInput("bad window upper end: " + hi);
    w.hi = *v;
  }
  return w;
}

Json fixture_spec_json(const FixtureSpec& s) {
  return Json{{"kind", fixture_name(s.kind)},
              {"n", s.n},
              {"spacing", s.spacing},
              {"radius", s.radius},
              {"inner", s.inner},
              {"width", s.width},
              {"length", s.length},
              {"gap", s.gap},
              {"alpha", s.alpha},
              {"cone_angle", s.cone_angle},
              {"jitter", s.jitter},
              {"seed", s.seed}};
}

FixtureSpec parse_fixture_spec(const Json& j) {
  check_keys(j, {"kind", "n", "spacing", "radius", "inner", "width", "length", "gap", "alpha",
                 "cone_angle", "jitter", "seed"},
             "fixture");
  FixtureSpec s;
  std::string kind = fixture_name(s.kind);
  take(j, "kind", kind);
  s.kind = parse_fixture_kind(kind);
  take(j, "n", s.n);
  take(j, "spacing", s.spacing);
  take(j, "radius", s.radius);
  take(j, "inner", s.inner);
  take(j, "width", s.width);
  take(j, "length", s.length);
  take(j, "gap", s.gap);
  take(j, "alpha", s.alpha);
  take(j, "cone_angle", s.cone_angle);
  take(j, "jitter", s.jitter);
  take(j, "seed", s.seed);
  return s;
}

PipelineConfig parse_config(const Json& j) {
  check_keys(j, {"center", "scale", "guard_off", "b0_multiplier", "sheets", "window", "budget",
                 "quasiconvex_pairs", "seed", "constants", "fixture"},
             "config");
  PipelineConfig c;
  if (j.contains("center")) {
    PointId z = 0;
    take(j, "center", z);
    c.center = z;
  }
  if (j.contains("scale")) {
    double r = 0;
    take(j, "scale", r);
    if (!(r > 0)) throw InvalidInput("scale must be positive");
    c.scale = r;
  }
  take(j, "guard_off", c.guard_off);
  take(j, "b0_multiplier", c.b0_multiplier);
  take(j, "sheets", c.sheets);
  take(j, "quasiconvex_pairs", c.quasiconvex_pairs);
  take(j, "seed", c.seed);
  if (j.contains("window")) {
    const Json& w = j.at("window");
    if (w.is_string()) {
      c.window = parse_window(w.get<std::string>());
    } else if (w.is_array() && w.size() == 2) {
      c.window = {w[0].get<double>(), w[1].is_null() ? kInf : w[1].get<double>()};
    } else {
      throw InvalidInput("window must be \"lo:hi\" or [lo, hi]");
    }
  }
  if (j.contains("budget")) {
    const Json& b = j.at("budget");
    check_keys(b, {"centers", "radii_per_octave", "seed"}, "budget");
    take(b, "centers", c.budget.centers);
    take(b, "radii_per_octave", c.budget.radii_per_octave);
    take(b, "seed", c.budget.seed);
  }
  if (j.contains("constants")) {
    const Json& k = j.at("constants");
    check_keys(k, {"lambda", "l", "d", "q", "c"}, "constants");
    LoopConstants lc;
    take(k, "lambda", lc.lambda);
    take(k, "l", lc.l);
    take(k, "d", lc.d);
    take(k, "q", lc.q);
    take(k, "c", lc.c);
    c.constants = lc;
  }
  if (j.contains("fixture")) c.fixture = parse_fixture_spec(j.at("fixture"));
  if (c.sheets < 2) throw InvalidInput("sheets must be at least 2");
  if (!(c.b0_multiplier > 0)) throw InvalidInput("b0_multiplier must be positive");
  return c;
}

PipelineConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InvalidInput("cannot open config " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  std::string text = buf.str();
  if (lower(path.extension().string()) == ".toml") {
    try {
      return parse_config(toml_to_json(toml::parse(text, path.string())));
    } catch (const toml::parse_error& e) {
      throw InvalidInput("config: " + std::string(e.description()));
    }
  }
  try {
    return parse_config(Json::parse(text));
  } catch (const nlohmann::json::parse_error& e) {
    throw InvalidInput(std::string("config: ") + e.what());
  }
}

Json config_json(const PipelineConfig& c) {
  Json j{{"guard_off", c.guard_off},
         {"b0_multiplier", c.b0_multiplier},
         {"sheets", c.sheets},
         {"window", window_json(c.window)},
         {"quasiconvex_pairs", c.quasiconvex_pairs},
         {"center", c.center ? Json(*c.center) : Json(nullptr)},
         {"scale", c.scale ? Json(*c.scale) : Json(nullptr)}};
  if (c.constants) {
    const auto& k = *c.constants;
    j["constants"] = {{"lambda", k.lambda}, {"l", k.l}, {"d", k.d}, {"q", k.q}, {"c", k.c}};
  }
  if (c.fixture) j["fixture"] = fixture_spec_json(*c.fixture);
  return j;
}

Json fixture_manifest() {
  auto spec = [](FixtureKind kind) {
    FixtureSpec s;
    s.kind = kind;
    s.spacing = 0.05;
    return s;
  };
  std::vector<FixtureSpec> specs;
  for (FixtureKind k : {FixtureKind::kFlatDisk, FixtureKind::kGrid, FixtureKind::kSphere,
                        FixtureKind::kCone, FixtureKind::kDumbbell, FixtureKind::kSnowflake,
                        FixtureKind::kCircleLoop, FixtureKind::kStrip, FixtureKind::kAnnulus}) {
    specs.push_back(spec(k));
  }
  specs[1].length = 1.0;           // grid
  specs[2].n = 500;                // sphere
  specs[5].n = 257;                // snowflake
  specs[7].width = 0.2;            // strip
  Json out = Json::array();
  for (const auto& s : specs) {
    Fixture fx = generate(s);
    Json expected = Json::array();
    for (const auto& e : fx.expected) {
      expected.push_back({{"name", e.name}, {"lo", e.lo}, {"hi", e.hi}, {"basis", e.basis}});
    }
    out.push_back({{"kind", fixture_name(s.kind)},
                   {"spec", fixture_spec_json(s)},
                   {"points", fx.space.size()},
                   {"has_chart", fx.space.has_chart()},
                   {"has_weights", fx.space.has_weights()},
                   {"center", fx.center},
                   {"expected", expected}});
  }
  return Json{{"schema_version", kSchemaVersion}, {"fixtures", out}};
}

// ---- reports ---------------------------------------------------------------

Json report_envelope(const std::string& command, const PipelineConfig& config) {
  return Json{{"schema_version", kSchemaVersion},
              {"command", command},
              {"config", config_json(config)},
              {"seed", config.seed},
              {"budgets",
               {{"centers", config.budget.centers},
                {"radii_per_octave", config.budget.radii_per_octave},
                {"seed", config.budget.seed},
                {"quasiconvex_pairs", config.quasiconvex_pairs}}}};
}

Json space_json(const FiniteMetricSpace& space) {
  static const std::map<MetricKind, const char*> names{
      {MetricKind::kEuclidean, "euclidean"}, {MetricKind::kManhattan, "manhattan"},
      {MetricKind::kSnowflake, "snowflake"}, {MetricKind::kCone, "cone"},
      {MetricKind::kMatrix, "matrix"}};
  return Json{{"points", space.size()},
              {"metric", names.at(space.kind())},
              {"scale", space.scale()},
              {"has_chart", space.has_chart()},
              {"has_weights", space.has_weights()},
              {"spacing", space.spacing()},
              {"connect_radius", space.connect_radius()},
              {"diameter", space.diameter_estimate()}};
}

Json diagnostics_json(const Diagnostics& diagnostics) {
  Json out = Json::array();
  for (const auto& d : diagnostics) {
    out.push_back({{"check", d.check}, {"detail", d.detail}, {"measured", d.measured},
                   {"bound", d.bound}});
  }
  return out;
}

std::string dump_report(const Json& report) { return report.dump(2) + "\n"; }

PointId default_center(const FiniteMetricSpace& space) {
  if (space.size() == 0) throw InvalidInput("empty space");
  if (!space.has_chart()) return space.canonical_order().front();
  double u = 0, v = 0;
  for (const Vec2& c : space.chart()) {
    u += c.u;
    v += c.v;
  }
  u /= double(space.size());
  v /= double(space.size());
  PointId best = kNoPoint;
  double best_d = kInf;
  for (PointId p : space.canonical_order()) {
    Vec2 c = space.chart_at(p);
    double d = std::hypot(c.u - u, c.v - v);
    if (d < best_d) {
      best_d = d;
      best = p;
    }
  }
  return best;
}

double default_scale(const FiniteMetricSpace& space) { return space.diameter_estimate() / 20.0; }

InvariantsStage run_invariants(const PathMetricSpace& pms, const PipelineConfig& config) {
  InvariantsStage st;
  ScaleWindow window = resolve_window(pms.base(), config.window);
  st.estimate = estimate_constants(pms, window, config.budget);
  const auto& e = st.estimate;
  const auto& k = e.constants;
  st.json = {
      {"window", window_json(window)},
      {"constants",
       {{"c", k.c}, {"lambda", k.lambda}, {"m", k.m}, {"n", k.n}, {"omega", k.omega},
        {"q", k.q}, {"assouad_constant", k.assouad_constant}, {"turning", k.turning}}},
      {"assouad",
       {{"q", e.assouad.q}, {"d", e.assouad.d}, {"refused", e.assouad.refused},
        {"reason", e.assouad.reason}, {"samples", e.assouad.samples.size()}}},
      {"ahlfors",
       {{"c", e.regularity.c_ahlfors},
        {"exponent", e.regularity.exponent},
        {"tail_exponent", e.regularity.tail_exponent},
        {"degenerate", e.regularity.degenerate},
        {"failure_scale", e.regularity.failure_scale ? Json(*e.regularity.failure_scale)
                                                     : Json(nullptr)},
        {"note", e.regularity.note},
        {"worst_center", point_or_null(e.regularity.worst_center)},
        {"worst_radius", e.regularity.worst_radius}}},
      {"llc",
       {{"lambda1", e.llc.lambda1}, {"lambda2", e.llc.lambda2}, {"balls1", e.llc.balls1},
        {"balls2", e.llc.balls2}}},
      {"turning",
       {{"lambda", e.turning.lambda}, {"upper", e.turning.upper}, {"pairs", e.turning.pairs}}},
      {"omega", {{"omega", e.omega.omega}, {"band", e.omega.band}, {"ratios", e.omega.ratios}}},
      {"quasiarcs", e.quasiarcs},
      {"caveat", e.caveat}};
  return st;
}

QuasiconvexStage run_quasiconvexity(const PathMetricSpace& pms,
                                    const QuasiconvexConstants& constants,
                                    const PipelineConfig& config) {
  QuasiconvexStage st;
  const FiniteMetricSpace& space = pms.base();
  st.graph_factor = pms.quasiconvexity(64, config.seed).factor;
  auto ends = sample_centers(space, all_points(space), 2 * config.quasiconvex_pairs, config.seed);
  Json pairs = Json::array();
  Diagnostics diags;
  for (std::size_t i = 0; i + 1 < ends.size(); i += 2) {
    PointId x = ends[i], y = ends[i + 1];
    if (!(space.dist(x, y) > 2.0 * pms.h())) continue;
    QuasiconvexPath path = quasiconvex_path(pms, x, y, constants);
    st.l_hat = std::max(st.l_hat, path.ratio);
    pairs.push_back({{"x", x}, {"y", y}, {"ratio", path.ratio}, {"depth", path.depth},
                     {"band_pieces", path.band_pieces}, {"floor_pieces", path.floor_pieces}});
    diags.insert(diags.end(), path.diagnostics.begin(), path.diagnostics.end());
  }
  st.json = {{"l_hat", st.l_hat}, {"graph_factor", st.graph_factor}, {"pairs", pairs},
             {"diagnostics", diagnostics_json(diags)}};
  return st;
}

namespace {

Json loop_json(const DiscreteLoop& loop) {
  return Json{{"points", loop.points}, {"length", loop.length}, {"size", loop.size()}};
}

}  // namespace

Json quasicircle_json(const QuasicircleResult& r) {
  const auto& k = r.constants;
  const auto& ip = r.initial;
  const auto& m = r.minimized;
  const auto& c = r.certificate;
  return Json{
      {"scale", r.r},
      {"r0", r.r0},
      {"c0", r.c0},
      {"c1", r.c1},
      {"guard_ok", r.guard_ok},
      {"region_radius", r.region_radius},
      {"c2", r.c2},
      {"c2_ceiling", r.c2_ceiling},
      {"lambda_ceiling", r.lambda_ceiling},
      {"dist_prime", r.dist_prime},
      {"constants", {{"lambda", k.lambda}, {"l", k.l}, {"d", k.d}, {"q", k.q}, {"c", k.c}}},
      {"initial",
       {{"loop", loop_json(ip.loop)},
        {"eps", ip.eps},
        {"chart_radius", ip.chart_radius},
        {"net_size", ip.net_size},
        {"winding", ip.winding},
        {"dist_min", ip.dist_min},
        {"dist_max", ip.dist_max}}},
      {"minimized",
       {{"loop", loop_json(m.loop)},
        {"sigma", m.sigma},
        {"warm_sigma", m.warm_sigma},
        {"winding", m.winding},
        {"region_size", m.region_size},
        {"sources", m.sources},
        {"dist_min", m.dist_min},
        {"dist_max", m.dist_max},
        {"warm_kept", m.warm_kept}}},
      {"certificate",
       {{"lambda", c.lambda},
        {"worst", {point_or_null(c.worst_a), point_or_null(c.worst_b)}},
        {"dist", c.dist},
        {"diam", c.diam},
        {"winding", c.winding ? Json(*c.winding) : Json(nullptr)}}},
      {"diagnostics", diagnostics_json(r.diagnostics)}};
}

Json domain_json(const Domain& d) {
  return Json{{"interior", d.interior.size()},
              {"on_edge", d.on_edge.size()},
              {"closure", d.closure.size()},
              {"inner_radius", d.inner_radius},
              {"outer_radius", d.outer_radius},
              {"inner_ok", d.inner_ok},
              {"outer_ok", d.outer_ok},
              {"reach", d.reach},
              {"diagnostics", diagnostics_json(d.diagnostics)}};
}

Json verification_json(const DomainReport& r) {
  return Json{{"vacuous", r.vacuous},
              {"points", r.points},
              {"lambda_prime", r.lambda_prime},
              {"lambda_prime_bound", r.lambda_prime_bound},
              {"llc_ok", r.llc_ok},
              {"ahlfors", r.ahlfors},
              {"ahlfors_bound", r.ahlfors_bound},
              {"ahlfors_ok", r.ahlfors_ok},
              {"porosity", r.porosity},
              {"porosity_bound", r.porosity_bound},
              {"porosity_ok", r.porosity_ok},
              {"diagnostics", diagnostics_json(r.diagnostics)}};
}

PipelineReport run_pipeline(std::shared_ptr<const FiniteMetricSpace> space,
                            const PipelineConfig& config) {
  PipelineReport rep;
  Json& j = rep.json;
  j = report_envelope("pipeline", config);
  j["space"] = space_json(*space);
  const PointId z = config.center ? *config.center : default_center(*space);
  if (z >= space->size()) throw InvalidInput("center out of range");
  const double r = config.scale ? *config.scale : default_scale(*space);
  j["center"] = z;
  j["scale"] = r;

  PathMetricSpace pms(space);
  Json stages;
  Json checks = Json::object();
  InvariantsStage inv = run_invariants(pms, config);
  stages["invariants"] = inv.json;
  checks["ahlfors_regular"] = !inv.estimate.regularity.degenerate;
  QuasiconvexStage qc = run_quasiconvexity(pms, inv.estimate.constants, config);
  stages["quasiconvexity"] = qc.json;

  LoopConstants loop_k;
  if (config.constants) {
    loop_k = *config.constants;
  } else {
    const auto& k = inv.estimate.constants;
    loop_k = LoopConstants{k.lambda, std::max(1.0, qc.graph_factor), inv.estimate.assouad.d,
                           inv.estimate.assouad.q, k.c};
  }

  auto finish = [&] {
    j["stages"] = stages;
    j["checks"] = checks;
    j["partial"] = rep.partial;
    bool all = std::all_of(checks.begin(), checks.end(), [](const Json& v) { return v.get<bool>(); });
    if (rep.status != ReportStatus::kRefused) {
      rep.status = all ? ReportStatus::kPass : ReportStatus::kFailures;
    }
    static const char* names[] = {"pass", "failures", "refused"};
    j["status"] = names[int(rep.status)];
    return rep;
  };

  if (!space->has_chart()) {
    rep.partial = true;
    for (const char* s : {"quasicircle", "domain", "verification"}) {
      stages[s] = {{"skipped", "no planar chart"}};
    }
    return finish();
  }

  QuasicircleOptions opt;
  opt.guard_off = config.guard_off;
  opt.b0_multiplier = config.b0_multiplier;
  opt.constants = loop_k;
  opt.window = config.window;
  opt.budget = config.budget;
  opt.sheets = config.sheets;
  try {
    rep.quasicircle = chord_arc_pipeline(pms, z, r, opt);
  } catch (const Refusal& e) {
    rep.status = ReportStatus::kRefused;
    stages["quasicircle"] = {{"refused", e.what()}};
    for (const char* s : {"domain", "verification"}) stages[s] = {{"skipped", "refused upstream"}};
    return finish();
  }
  const auto& q = *rep.quasicircle;
  stages["quasicircle"] = quasicircle_json(q);
  checks["winding_unit"] = q.certificate.winding && std::abs(*q.certificate.winding) == 1;
  checks["lambda_within_ceiling"] = q.certificate.lambda <= q.lambda_ceiling;
  checks["c2_within_ceiling"] = q.c2 <= q.c2_ceiling;
  checks["sigma_not_above_warm"] = q.minimized.sigma <= q.minimized.warm_sigma;

  try {
    rep.domain = extract_domain(*space, q.minimized.loop, z, r, loop_k.lambda, q.c2);
  } catch (const Refusal& e) {
    rep.status = ReportStatus::kRefused;
    stages["domain"] = {{"refused", e.what()}};
    stages["verification"] = {{"skipped", "refused upstream"}};
    return finish();
  }
  stages["domain"] = domain_json(*rep.domain);
  checks["domain_inner"] = rep.domain->inner_ok;
  checks["domain_outer"] = rep.domain->outer_ok;

  rep.verification = verify_domain(pms, *rep.domain, q.minimized.loop, loop_k,
                                   q.certificate.lambda, config.budget);
  stages["verification"] = verification_json(*rep.verification);
  checks["domain_llc"] = rep.verification->llc_ok;
  checks["domain_ahlfors"] = rep.verification->ahlfors_ok;
  checks["loop_porosity"] = rep.verification->porosity_ok;
  return finish();
}

// ---- rendering -------------------------------------------------------------

std::string render_svg(const FiniteMetricSpace& space, const SvgOverlays& ov) {
  if (!space.has_chart()) throw InvalidInput("rendering needs a planar chart");
  if (space.size() == 0) throw InvalidInput("empty space");
  double u0 = kInf, u1 = -kInf, v0 = kInf, v1 = -kInf;
  for (const Vec2& c : space.chart()) {
    u0 = std::min(u0, c.u);
    u1 = std::max(u1, c.u);
    v0 = std::min(v0, c.v);
    v1 = std::max(v1, c.v);
  }
  const double margin = 10.0;
  const double span = std::max({u1 - u0, v1 - v0, 1e-300});
  const double s = (ov.width - 2.0 * margin) / span;
  const double height = 2.0 * margin + (v1 - v0) * s;
  auto x = [&](PointId p) { return fmt(margin + (space.chart_at(p).u - u0) * s); };
  auto y = [&](PointId p) { return fmt(height - margin - (space.chart_at(p).v - v0) * s); };
  auto check = [&](PointId p) {
    if (p >= space.size()) throw InvalidInput("overlay point out of range");
  };

  static const char* palette[] = {"#1b9e77", "#d95f02", "#7570b3", "#e7298a",
                                  "#66a61e", "#e6ab02", "#a6761d", "#666666"};
  std::ostringstream out;
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << fmt(ov.width)
      << "\" height=\"" << fmt(height) << "\">\n<style>\n"
      << ".pt{fill:#bbbbbb}\n.loop{stroke:#c00000;stroke-width:2}\n.center{fill:#000000}\n";
  for (int k = 0; k < 8; ++k) out << ".band-" << k << "{fill:" << palette[k] << "}\n";
  out << "</style>\n";
  if (ov.points) {
    out << "<g id=\"points\">\n";
    for (PointId p = 0; p < space.size(); ++p) {
      out << "<circle class=\"pt\" cx=\"" << x(p) << "\" cy=\"" << y(p) << "\" r=\"1\"/>\n";
    }
    out << "</g>\n";
  }
  if (!ov.bands.empty()) {
    out << "<g id=\"bands\">\n";
    for (std::size_t j = 0; j < ov.bands.size(); ++j) {
      for (PointId p : ov.bands[j]) {
        check(p);
        out << "<circle class=\"band-" << j % 8 << "\" cx=\"" << x(p) << "\" cy=\"" << y(p)
            << "\" r=\"1.5\"/>\n";
      }
    }
    out << "</g>\n";
  }
  if (!ov.loop.empty()) {
    out << "<g id=\"loop\">\n";
    const std::size_t n = ov.loop.size();
    for (std::size_t i = 0; i < n && n > 1; ++i) {
      PointId a = ov.loop[i], b = ov.loop[(i + 1) % n];
      check(a);
      check(b);
      out << "<line class=\"loop\" x1=\"" << x(a) << "\" y1=\"" << y(a) << "\" x2=\"" << x(b)
          << "\" y2=\"" << y(b) << "\"/>\n";
    }
    out << "</g>\n";
  }
  if (ov.center) {
    check(*ov.center);
    out << "<circle class=\"center\" cx=\"" << x(*ov.center) << "\" cy=\"" << y(*ov.center)
        << "\" r=\"3\"/>\n";
  }
  out << "</svg>\n";
  return out.str();
}

}  // namespace quasidisk
