#include "losplan/cli_io.hpp"

#include <cstdio>
#include <fstream>
#include <iterator>
#include <map>
#include <ostream>
#include <sstream>

namespace losplan {

using nlohmann::json;

namespace {

std::string located(const std::string& detail, std::size_t line, std::size_t column, const std::string& source) {
  std::string loc = source;
  if (line) loc += (loc.empty() ? "" : ":") + std::to_string(line) + ":" + std::to_string(column);
  return loc.empty() ? detail : loc + ": " + detail;
}

}  // namespace

FormatError::FormatError(const std::string& detail, std::size_t line, std::size_t column, const std::string& source)
    : std::runtime_error(located(detail, line, column, source)), detail_(detail), line_(line), column_(column) {}

void PlannerConfig::validate() const {
  range.validate();
  if (alpha_gap && !(*alpha_gap > 0.0 && *alpha_gap < 1.0)) throw std::invalid_argument("alpha_gap must lie in (0, 1)");
  if (R_override && !(*R_override > 0.0)) throw std::invalid_argument("R must be positive");
  if (pitch && !(*pitch > 0.0)) throw std::invalid_argument("pitch must be positive");
}

namespace {

// Character iterator that counts how far the parser has read.
class CountingIterator {
 public:
  using iterator_category = std::input_iterator_tag;
  using value_type = char;
  using difference_type = std::ptrdiff_t;
  using pointer = const char*;
  using reference = const char&;

  CountingIterator(const char* p, std::size_t* count) : p_(p), count_(count) {}
  reference operator*() const { return *p_; }
  CountingIterator& operator++() {
    ++p_;
    ++*count_;
    return *this;
  }
  CountingIterator operator++(int) {
    CountingIterator old = *this;
    ++*this;
    return old;
  }
  bool operator==(const CountingIterator& o) const { return p_ == o.p_; }
  bool operator!=(const CountingIterator& o) const { return p_ != o.p_; }

 private:
  const char* p_;
  std::size_t* count_;
};

// Records the offset of every value by JSON pointer.
class PositionIndex : public nlohmann::json_sax<json> {
 public:
  explicit PositionIndex(const std::size_t* count) : count_(count) {}

  bool null() override { return scalar(); }
  bool boolean(bool) override { return scalar(); }
  bool number_integer(number_integer_t) override { return scalar(); }
  bool number_unsigned(number_unsigned_t) override { return scalar(); }
  bool number_float(number_float_t, const string_t&) override { return scalar(); }
  bool string(string_t&) override { return scalar(); }
  bool binary(binary_t&) override { return scalar(); }
  bool start_object(std::size_t) override {
    begin();
    stack_.push_back({false, 0, {}});
    return true;
  }
  bool key(string_t& k) override {
    stack_.back().key = k;
    return true;
  }
  bool end_object() override {
    stack_.pop_back();
    end();
    return true;
  }
  bool start_array(std::size_t) override {
    begin();
    stack_.push_back({true, 0, {}});
    return true;
  }
  bool end_array() override {
    stack_.pop_back();
    end();
    return true;
  }
  bool parse_error(std::size_t, const std::string&, const nlohmann::detail::exception&) override { return false; }

  std::map<std::string, std::size_t> offsets;

 private:
  struct Frame {
    bool array;
    std::size_t index;
    std::string key;
  };

  bool scalar() {
    begin();
    end();
    return true;
  }
  void begin() { offsets[pointer()] = *count_; }
  void end() {
    if (!stack_.empty() && stack_.back().array) ++stack_.back().index;
  }
  std::string pointer() const {
    std::string out;
    for (const Frame& f : stack_) {
      out += '/';
      out += f.array ? std::to_string(f.index) : escape(f.key);
    }
    return out;
  }
  static std::string escape(const std::string& k) {
    std::string out;
    for (char c : k) {
      if (c == '~') {
        out += "~0";
      } else if (c == '/') {
        out += "~1";
      } else {
        out += c;
      }
    }
    return out;
  }

  const std::size_t* count_;
  std::vector<Frame> stack_;
};

std::pair<std::size_t, std::size_t> line_column(std::string_view text, std::size_t offset) {
  offset = std::min(offset, text.size());
  std::size_t line = 1, col = 1;
  for (std::size_t i = 0; i < offset; ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return {line, col};
}

class SchemaReader {
 public:
  SchemaReader(std::string_view text, std::map<std::string, std::size_t> offsets)
      : text_(text), offsets_(std::move(offsets)) {}

  [[noreturn]] void fail(const std::string& ptr, const std::string& msg) const {
    std::string p = ptr;
    for (;;) {
      const auto it = offsets_.find(p);
      if (it != offsets_.end()) {
        const auto [line, col] = line_column(text_, it->second);
        throw FormatError(msg + " at " + (ptr.empty() ? "/" : ptr), line, col);
      }
      if (p.empty()) break;
      p.erase(p.rfind('/'));
    }
    throw FormatError(msg + " at " + (ptr.empty() ? "/" : ptr));
  }

  double number(const json& j, const std::string& ptr) const {
    if (!j.is_number()) fail(ptr, "expected a number");
    const double v = j.get<double>();
    if (!std::isfinite(v)) fail(ptr, "non-finite number");
    return v;
  }

  Point2 point(const json& j, const std::string& ptr) const {
    if (!j.is_array() || j.size() != 2) fail(ptr, "expected a point [x, y]");
    return {number(j[0], ptr + "/0"), number(j[1], ptr + "/1")};
  }

  Ring ring(const json& j, const std::string& ptr) const {
    if (!j.is_array()) fail(ptr, "expected a ring (array of points)");
    if (j.size() < 3) fail(ptr, "a ring needs at least 3 vertices");
    std::vector<Point2> pts;
    for (std::size_t i = 0; i < j.size(); ++i) pts.push_back(point(j[i], ptr + "/" + std::to_string(i)));
    try {
      return Ring(std::move(pts));
    } catch (const GeometryError& e) {
      fail(ptr, e.what());
    }
  }

  void only_keys(const json& j, const std::string& ptr, std::initializer_list<const char*> keys) const {
    for (const auto& [k, v] : j.items()) {
      bool known = false;
      for (const char* key : keys) known = known || k == key;
      if (!known) fail(ptr + "/" + k, "unknown key \"" + k + "\"");
    }
  }

 private:
  std::string_view text_;
  std::map<std::string, std::size_t> offsets_;
};

json point_json(Point2 p) { return json::array({p.x, p.y}); }

json ring_json(const Ring& r) {
  json out = json::array();
  for (const Point2& p : r.vertices()) out.push_back(point_json(p));
  return out;
}

json optional_json(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

}  // namespace

EnvironmentSpec parse_environment(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    const auto [line, col] = line_column(text, e.byte ? e.byte - 1 : 0);
    std::string msg = e.what();
    // Drop the library prefix up to the detail message.
    if (const auto k = msg.find(": "); k != std::string::npos) msg = msg.substr(k + 2);
    throw FormatError("syntax error: " + msg, line, col);
  }
  std::size_t count = 0;
  PositionIndex index(&count);
  json::sax_parse(CountingIterator(text.data(), &count), CountingIterator(text.data() + text.size(), &count), &index);
  const SchemaReader rd(text, std::move(index.offsets));

  if (!doc.is_object()) rd.fail("", "expected an object");
  rd.only_keys(doc, "", {"name", "units", "outer", "fixed_obstacles", "stochastic_obstacles"});
  EnvironmentSpec spec;
  if (doc.contains("units")) {
    if (!doc["units"].is_string() || doc["units"].get<std::string>() != "meters") rd.fail("/units", "units must be \"meters\"");
  }
  if (doc.contains("name") && !doc["name"].is_string()) rd.fail("/name", "name must be a string");
  if (!doc.contains("outer")) rd.fail("", "missing required key \"outer\"");
  spec.outer = rd.ring(doc["outer"], "/outer");
  if (doc.contains("fixed_obstacles")) {
    const json& f = doc["fixed_obstacles"];
    if (!f.is_array()) rd.fail("/fixed_obstacles", "expected an array of rings");
    for (std::size_t i = 0; i < f.size(); ++i) spec.fixed_obstacles.push_back(rd.ring(f[i], "/fixed_obstacles/" + std::to_string(i)));
  }
  if (doc.contains("stochastic_obstacles")) {
    const json& s = doc["stochastic_obstacles"];
    if (!s.is_array()) rd.fail("/stochastic_obstacles", "expected an array of objects");
    for (std::size_t i = 0; i < s.size(); ++i) {
      const std::string ptr = "/stochastic_obstacles/" + std::to_string(i);
      const json& o = s[i];
      if (!o.is_object()) rd.fail(ptr, "expected an object with \"shape\" and \"placements\"");
      rd.only_keys(o, ptr, {"shape", "placements"});
      if (!o.contains("shape")) rd.fail(ptr, "missing required key \"shape\"");
      if (!o.contains("placements")) rd.fail(ptr, "missing required key \"placements\"");
      StochasticObstacle so;
      so.shape = rd.ring(o["shape"], ptr + "/shape");
      const json& pl = o["placements"];
      if (!pl.is_array() || pl.empty()) rd.fail(ptr + "/placements", "expected a non-empty array of points");
      for (std::size_t k = 0; k < pl.size(); ++k) so.placements.push_back(rd.point(pl[k], ptr + "/placements/" + std::to_string(k)));
      spec.stochastic_obstacles.push_back(std::move(so));
    }
  }
  return spec;
}

EnvironmentSpec load_environment_spec(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError("cannot read file", 0, 0, path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  try {
    return parse_environment(ss.str());
  } catch (const FormatError& e) {
    throw FormatError(e.detail(), e.line(), e.column(), path.string());
  }
}

Environment load_environment(const std::filesystem::path& path) { return Environment::expand(load_environment_spec(path)); }

json environment_to_json(const EnvironmentSpec& spec) {
  json j;
  j["units"] = spec.units;
  j["outer"] = ring_json(spec.outer);
  j["fixed_obstacles"] = json::array();
  for (const Ring& r : spec.fixed_obstacles) j["fixed_obstacles"].push_back(ring_json(r));
  j["stochastic_obstacles"] = json::array();
  for (const StochasticObstacle& so : spec.stochastic_obstacles) {
    json o;
    o["shape"] = ring_json(so.shape);
    o["placements"] = json::array();
    for (const Point2& p : so.placements) o["placements"].push_back(point_json(p));
    j["stochastic_obstacles"].push_back(std::move(o));
  }
  return j;
}

void save_environment(const EnvironmentSpec& spec, const std::filesystem::path& path) {
  write_json(environment_to_json(spec), path);
}

void write_json(const json& j, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << j.dump(2) << '\n';
  if (!out) throw std::runtime_error("write failed: " + path.string());
}

json bounds_to_json(const BoundsReport& b, const RangeSpec& range, double R_used) {
  json j;
  j["r"] = range.is_bounded() ? json(*range.r) : json("unbounded");
  j["r_effective"] = b.r;
  j["disk_sides"] = range.disk_sides;
  j["deltas"] = b.deltas;
  j["delta_min"] = optional_json(b.delta_min);
  j["small_obstacle_regime"] = b.small_obstacle_regime;
  j["x_star"] = optional_json(b.x_star);
  j["R_upper"] = b.R_upper;
  j["R_default"] = b.R_default;
  j["R"] = R_used;
  return j;
}

json graph_to_json(const PVGraph& g, double R) {
  const GraphStats s = graph_stats(g);
  json j;
  j["R"] = R;
  j["nodes"] = s.nodes;
  j["edges"] = s.edges;
  j["density"] = s.density;
  j["per_realization"] = s.per_realization;
  j["degree_histogram"] = json::array();
  for (const auto& [deg, n] : s.degree_histogram) j["degree_histogram"].push_back({deg, n});
  return j;
}

json plan_to_json(const PVGraph& g, const Plan& plan) {
  json j;
  j["mode"] = plan.mode == PlanMode::Full ? "full" : "gap";
  j["alpha_gap"] = plan.mode == PlanMode::Gap ? json(plan.alpha_gap) : json(nullptr);
  j["threshold"] = plan.threshold == GapThreshold::Inclusive ? "inclusive" : "strict";
  j["g"] = plan.g();
  j["lower_bound"] = {{"h", plan.lower_bound_h}, {"exact", plan.lower_bound_exact}};
  j["clusters"] = json::array();
  for (std::size_t c = 0; c < plan.clusters.size(); ++c) {
    const CliqueCluster& cl = plan.clusters[c];
    json members = json::array();
    for (std::size_t m : cl.members) members.push_back({g.node(m).t + 1, g.node(m).i + 1});
    j["clusters"].push_back({{"id", c + 1},
                             {"ap", point_json(cl.ap_point)},
                             {"members", std::move(members)},
                             {"joint_visibility_area", cl.joint_visibility.area()}});
  }
  j["uncovered"] = json::array();
  j["gap_count_fraction"] = json::array();
  for (std::size_t t = 0; t < plan.uncovered.size(); ++t) {
    json ids = json::array();
    for (std::size_t u : plan.uncovered[t]) ids.push_back(g.node(u).i + 1);
    j["uncovered"].push_back({{"t", t + 1}, {"nodes", std::move(ids)}});
    const int M = g.per_realization()[t];
    j["gap_count_fraction"].push_back(M ? static_cast<double>(plan.uncovered[t].size()) / M : 0.0);
  }
  j["gap_area_fraction"] = plan.gap_area_fraction;
  return j;
}

json coverage_to_json(const CoverageReport& rep, std::uint64_t seed) {
  json j;
  j["pitch"] = rep.pitch;
  j["seed"] = seed;
  j["min_coverage_fraction"] = rep.min_coverage_fraction;
  j["worst_realization"] = rep.worst_realization + 1;
  j["per_realization"] = json::array();
  for (const RealizationCoverage& rc : rep.per_realization) {
    j["per_realization"].push_back({{"t", rc.t + 1},
                                    {"sampled", rc.sampled},
                                    {"covered", rc.covered},
                                    {"flagged", rc.flagged},
                                    {"coverage_fraction", rc.coverage_fraction},
                                    {"gap_area_estimate", rc.gap_area_estimate}});
  }
  return j;
}

json triangulation_to_json(const Environment& env, double R) {
  json j;
  j["R"] = R;
  j["realizations"] = json::array();
  for (const Realization& real : env.realizations()) {
    json tris = json::array();
    for (const TriangleNode& n : hyper_triangulate(real, R)) {
      tris.push_back({{"i", n.i + 1}, {"v", {point_json(n.v[0]), point_json(n.v[1]), point_json(n.v[2])}}});
    }
    j["realizations"].push_back({{"t", real.index() + 1}, {"count", tris.size()}, {"triangles", std::move(tris)}});
  }
  return j;
}

std::vector<Point2> load_ap_points(const std::filesystem::path& plan_path) {
  std::ifstream in(plan_path, std::ios::binary);
  if (!in) throw FormatError("cannot read " + plan_path.string());
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw FormatError(plan_path.string() + ": " + e.what());
  }
  if (!doc.is_object() || !doc.contains("clusters") || !doc["clusters"].is_array()) {
    throw FormatError(plan_path.string() + ": expected a plan with a \"clusters\" array");
  }
  std::vector<Point2> aps;
  for (const json& c : doc["clusters"]) {
    const json& a = c.value("ap", json());
    if (!a.is_array() || a.size() != 2 || !a[0].is_number() || !a[1].is_number()) {
      throw FormatError(plan_path.string() + ": cluster without a valid \"ap\" point");
    }
    aps.push_back({a[0].get<double>(), a[1].get<double>()});
  }
  return aps;
}

namespace {

std::string num(double v) {
  if (v == 0.0) v = 0.0;
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

// SVG y grows downwards.
std::string ring_path(const Ring& r) {
  std::string d;
  for (std::size_t i = 0; i < r.size(); ++i) {
    d += (i ? " L" : "M") + num(r[i].x) + " " + num(-r[i].y);
  }
  return d + " Z";
}

}  // namespace

void emit_svg(const Environment& env, std::size_t t, const SvgLayers& layers, std::ostream& out) {
  const Realization& real = env.realization(t);
  const BBox box = real.outer().bbox();
  const double diam = real.diameter();
  const double m = 0.03 * diam;
  const double sw = 0.002 * diam;
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"" << num(box.min_x - m) << ' ' << num(-box.max_y - m) << ' '
      << num(box.width() + 2 * m) << ' ' << num(box.height() + 2 * m) << "\">\n";
  out << "<title>realization " << t + 1 << "</title>\n";
  out << "<path class=\"boundary\" d=\"" << ring_path(real.outer()) << "\" fill=\"#ffffff\" stroke=\"#000000\" stroke-width=\""
      << num(sw) << "\"/>\n";
  for (const Region& reg : layers.regions) {
    std::string d;
    for (const Polygon& p : reg.polygons()) {
      d += ring_path(p.outer);
      for (const Ring& h : p.holes) d += " " + ring_path(h);
    }
    if (!d.empty()) {
      out << "<path class=\"region\" d=\"" << d << "\" fill=\"#1f77b4\" fill-opacity=\"0.15\" fill-rule=\"evenodd\" stroke=\"none\"/>\n";
    }
  }
  for (std::size_t i = 0; i < real.obstacles().size(); ++i) {
    out << "<path class=\"" << (real.obstacle_is_stochastic(i) ? "stochastic" : "fixed") << "\" d=\""
        << ring_path(real.obstacles()[i]) << "\" fill=\"#808080\" stroke=\"#404040\" stroke-width=\"" << num(sw) << "\"/>\n";
  }
  for (const StochasticObstacle& so : env.spec().stochastic_obstacles) {
    for (const Point2& p : so.placements) {
      out << "<path class=\"placement\" d=\"" << ring_path(so.shape.translated(p)) << "\" fill=\"none\" stroke=\"#404040\" stroke-width=\""
          << num(sw) << "\" stroke-dasharray=\"" << num(4 * sw) << ' ' << num(3 * sw) << "\"/>\n";
    }
  }
  if (layers.coverage) {
    for (const Point2& x : layers.coverage->uncovered_samples) {
      out << "<circle class=\"uncovered\" cx=\"" << num(x.x) << "\" cy=\"" << num(-x.y) << "\" r=\"" << num(1.5 * sw)
          << "\" fill=\"#d62728\"/>\n";
    }
  }
  if (layers.plan) {
    const double s = 0.015 * diam;
    for (std::size_t c = 0; c < layers.plan->clusters.size(); ++c) {
      const Point2 a = layers.plan->clusters[c].ap_point;
      out << "<polygon class=\"ap\" data-id=\"" << c + 1 << "\" data-x=\"" << num(a.x) << "\" data-y=\"" << num(a.y)
          << "\" points=\"" << num(a.x) << ',' << num(-(a.y + s)) << ' ' << num(a.x - 0.866 * s) << ','
          << num(-(a.y - 0.5 * s)) << ' ' << num(a.x + 0.866 * s) << ',' << num(-(a.y - 0.5 * s))
          << "\" fill=\"#2ca02c\" stroke=\"#000000\" stroke-width=\"" << num(0.5 * sw) << "\"/>\n";
    }
  }
  out << "</svg>\n";
}

void emit_svg(const Environment& env, std::size_t t, const SvgLayers& layers, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  emit_svg(env, t, layers, out);
  if (!out) throw std::runtime_error("write failed: " + path.string());
}

double choose_R(const BoundsReport& b, const PlannerConfig& config) {
  if (!config.R_override) return b.R_default;
  if (*config.R_override > b.R_upper) {
    throw std::invalid_argument("R = " + num(*config.R_override) + " exceeds the upper bound " + num(b.R_upper));
  }
  return *config.R_override;
}

PipelineResult run_pipeline(const Environment& env, const PlannerConfig& config, const std::filesystem::path& out_dir,
                            std::ostream& log) {
  PipelineResult res;
  std::string stage = "config";
  try {
    config.validate();
    std::filesystem::create_directories(out_dir);

    stage = "bounds";
    const double r_eff = config.range.radius(env.diameter());
    res.bounds = environment_bounds(env.spec(), r_eff);
    std::vector<TriangleNode> plain;
    if (config.refine) {
      res.R = choose_R(res.bounds, config);
    } else {
      for (const Realization& real : env.realizations()) {
        for (const TriangleNode& n : triangulate(real)) {
          res.R = std::max(res.R, n.longest_side());
          plain.push_back(n);
        }
      }
      log << "warning: unrefined triangulation, longest side " << num(res.R) << " vs R_upper " << num(res.bounds.R_upper)
          << "; coverage is not guaranteed\n";
    }
    write_json(bounds_to_json(res.bounds, config.range, res.R), out_dir / "bounds.json");
    log << "bounds: R_upper " << num(res.bounds.R_upper) << ", R " << num(res.R) << '\n';

    stage = "graph";
    GraphOptions gopts;
    gopts.threads = config.threads;
    const PVGraph g = config.refine ? build_pv_graph(env, config.range, res.R, gopts)
                                    : build_graph_from_nodes(env, std::move(plain), config.range, gopts);
    res.graph = graph_stats(g);
    write_json(graph_to_json(g, res.R), out_dir / "graph.json");
    log << "graph: " << res.graph.nodes << " nodes, " << res.graph.edges << " edges\n";

    stage = "plan";
    res.plan = config.alpha_gap ? mcp(g, *config.alpha_gap, config.threshold, config.exact_threshold)
                                : mcc(g, config.exact_threshold);
    std::vector<double> free_area;
    for (const Realization& real : env.realizations()) free_area.push_back(real.area());
    measure_gap_area(g, free_area, res.plan);
    for (std::string& v : validate_plan(g, res.plan)) res.violations.push_back(std::move(v));
    write_json(plan_to_json(g, res.plan), out_dir / "plan.json");
    log << "plan: g = " << res.plan.g() << ", independence bound h = " << res.plan.lower_bound_h
        << (res.plan.lower_bound_exact ? " (exact)" : " (greedy)") << '\n';
    for (std::size_t t = 0; t < res.plan.gap_area_fraction.size(); ++t) {
      if (config.alpha_gap && res.plan.gap_area_fraction[t] > *config.alpha_gap) {
        log << "warning: realization " << t + 1 << " gap area fraction " << num(res.plan.gap_area_fraction[t])
            << " exceeds alpha_gap\n";
      }
    }

    stage = "verify";
    CoverageOptions copts;
    copts.pitch = config.pitch.value_or(config.refine ? res.R / 4 : env.diameter() / 100);
    copts.R = res.R;
    copts.seed = config.seed;
    copts.threads = config.threads;
    std::vector<Point2> aps;
    for (const CliqueCluster& c : res.plan.clusters) aps.push_back(c.ap_point);
    res.coverage = verify_plan(env, aps, config.range, copts);
    write_json(coverage_to_json(res.coverage, config.seed), out_dir / "coverage.json");
    log << "verify: min coverage " << num(res.coverage.min_coverage_fraction) << " (realization "
        << res.coverage.worst_realization + 1 << ")\n";
    for (const RealizationCoverage& rc : res.coverage.per_realization) {
      const double need = res.plan.mode == PlanMode::Full ? 1.0 : 1.0 - res.plan.gap_area_fraction[rc.t] - 0.01;
      if (config.refine && rc.coverage_fraction < need) {
        res.violations.push_back("realization " + std::to_string(rc.t + 1) + " coverage " + num(rc.coverage_fraction) +
                                 " below " + num(need));
      }
    }

    stage = "svg";
    std::vector<Region> joint;
    for (const CliqueCluster& c : res.plan.clusters) joint.push_back(c.joint_visibility);
    for (std::size_t t = 0; t < env.size(); ++t) {
      SvgLayers layers;
      layers.plan = &res.plan;
      layers.regions = joint;
      layers.coverage = &res.coverage.per_realization[t];
      emit_svg(env, t, layers, out_dir / ("realization_" + std::to_string(t + 1) + ".svg"));
    }
  } catch (const std::exception& e) {
    res.exit_code = 1;
    res.failed_stage = stage;
    log << "error in stage " << stage << ": " << e.what() << '\n';
    return res;
  }
  if (!res.violations.empty()) {
    res.exit_code = 2;
    res.failed_stage = "contract";
    for (const std::string& v : res.violations) log << "violation: " << v << '\n';
  }
  return res;
}

}  // namespace losplan
