#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <fstream>
#include <sstream>

#include "losplan/cli_io.hpp"
#include "test_support.hpp"

using namespace losplan;
using losplan::testing::rect_ring;
using losplan::testing::room_spec;

namespace {

std::filesystem::path scratch(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / "losplan_cli_io_test" / name;
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

bool same_spec(const EnvironmentSpec& a, const EnvironmentSpec& b) {
  if (!(a.outer == b.outer) || a.fixed_obstacles != b.fixed_obstacles) return false;
  if (a.stochastic_obstacles.size() != b.stochastic_obstacles.size()) return false;
  for (std::size_t i = 0; i < a.stochastic_obstacles.size(); ++i) {
    if (!(a.stochastic_obstacles[i].shape == b.stochastic_obstacles[i].shape)) return false;
    if (a.stochastic_obstacles[i].placements != b.stochastic_obstacles[i].placements) return false;
  }
  return a.units == b.units;
}

FormatError format_error_of(const std::string& text) {
  try {
    parse_environment(text);
  } catch (const FormatError& e) {
    return e;
  }
  FAIL("no FormatError for: " << text);
  return FormatError("");
}

std::size_t count_of(const std::string& s, const std::string& needle) {
  std::size_t n = 0;
  for (auto k = s.find(needle); k != std::string::npos; k = s.find(needle, k + 1)) ++n;
  return n;
}

}  // namespace

TEST_CASE("empty square loads as one realization") {
  const Environment env = Environment::expand(parse_environment(R"({"outer": [[0,0],[1,0],[1,1],[0,1]]})"));
  CHECK(env.size() == 1);
  CHECK(env.realization(0).area() == doctest::Approx(1.0));
}

TEST_CASE("realization counts") {
  const std::string twelve = R"({
    "outer": [[0,0],[40,0],[40,40],[0,40]],
    "stochastic_obstacles": [{"shape": [[0,0],[1,0],[1,1],[0,1]],
      "placements": [[2,2],[5,2],[8,2],[11,2],[14,2],[17,2],[20,2],[23,2],[26,2],[29,2],[32,2],[35,2]]}]
  })";
  CHECK(Environment::expand(parse_environment(twelve)).size() == 12);
  const std::string product = R"({
    "outer": [[0,0],[40,0],[40,40],[0,40]],
    "stochastic_obstacles": [
      {"shape": [[0,0],[1,0],[1,1],[0,1]], "placements": [[2,2],[5,2],[8,2]]},
      {"shape": [[0,0],[1,0],[0,1]], "placements": [[2,20],[5,20],[8,20],[11,20]]}]
  })";
  CHECK(Environment::expand(parse_environment(product)).size() == 12);
}

TEST_CASE("syntax errors carry line and column") {
  const FormatError e = format_error_of("{\n  \"outer\": [[0,0],[1,0]\n");
  CHECK(e.line() == 3);
  const FormatError f = format_error_of("{\n  \"outer\": [[0,0] [1,0]]}");
  CHECK(f.line() == 2);
  CHECK(f.column() >= 18);
  CHECK(f.column() <= 20);
}

TEST_CASE("schema errors point at the offending value") {
  const FormatError e = format_error_of(
      "{\n"
      "  \"outer\": [[0,0],[1,0],[1,1],[0,1]],\n"
      "  \"stochastic_obstacles\": [\n"
      "    {\"shape\": [[0,0],[0.1,0],[0.1,0.1]], \"placements\": [[0.2, \"x\"]]}\n"
      "  ]\n"
      "}\n");
  CHECK(e.line() == 4);
  CHECK(std::string(e.what()).find("/stochastic_obstacles/0/placements/0/1") != std::string::npos);
  CHECK(format_error_of("{\n\"outer\": [[0,0],[1,0],[1,1],[0,1]],\n\"fixd_obstacles\": []}").line() == 3);
  CHECK(std::string(format_error_of("{}").what()).find("outer") != std::string::npos);
  CHECK(format_error_of("{\"outer\": [[0,0],[1,0]]}").line() == 1);
  CHECK(std::string(format_error_of("{\"outer\": [[0,0],[1,0],[2,0]]}").what()).find("/outer") != std::string::npos);
  CHECK(std::string(format_error_of("{\"outer\": [[0,0],[1,0],[1,1]], \"units\": \"feet\"}").what()).find("units") !=
        std::string::npos);
  format_error_of(R"({"outer": [[0,0],[1,0],[1,1]], "stochastic_obstacles": [{"shape": [[0,0],[1,0],[1,1]]}]})");
  format_error_of(R"({"outer": [[0,0],[1,0],[1,1]], "stochastic_obstacles": [{"shape": [[0,0],[1,0],[1,1]], "placements": []}]})");
  format_error_of("[1, 2]");
}

TEST_CASE("invalid layouts name the realization") {
  const std::string overlap = R"({
    "outer": [[0,0],[10,0],[10,10],[0,10]],
    "fixed_obstacles": [[[4,4],[6,4],[6,6],[4,6]]],
    "stochastic_obstacles": [{"shape": [[0,0],[1,0],[1,1],[0,1]], "placements": [[1,1],[4.5,4.5]]}]
  })";
  try {
    Environment::expand(parse_environment(overlap));
    FAIL("overlap accepted");
  } catch (const EnvironmentError& e) {
    CHECK(e.realization() == 1);
    CHECK(std::string(e.what()).find("realization 2") != std::string::npos);
  }
  const std::string outside = R"({
    "outer": [[0,0],[10,0],[10,10],[0,10]],
    "stochastic_obstacles": [{"shape": [[0,0],[1,0],[1,1],[0,1]], "placements": [[1,1],[9.5,1]]}]
  })";
  CHECK_THROWS_AS(Environment::expand(parse_environment(outside)), EnvironmentError);
}

TEST_CASE("environment round trip") {
  EnvironmentSpec s = room_spec(5, 4, {rect_ring(1, 1, 2, 2)});
  s.stochastic_obstacles.push_back({Ring({{0, 0}, {0.5, 0}, {0.25, 0.4}}), {{3, 1}, {3.5, 2.5}, {0.1 / 3, 3}}});
  const auto dir = scratch("roundtrip");
  save_environment(s, dir / "a.json");
  const EnvironmentSpec once = load_environment_spec(dir / "a.json");
  CHECK(same_spec(once, s));
  save_environment(once, dir / "b.json");
  const EnvironmentSpec twice = load_environment_spec(dir / "b.json");
  CHECK(same_spec(twice, once));
  CHECK(slurp(dir / "a.json") == slurp(dir / "b.json"));
  CHECK(load_environment(dir / "a.json").size() == 3);
}

TEST_CASE("unreadable environment file") {
  CHECK_THROWS_AS(load_environment_spec("/nonexistent/env.json"), FormatError);
}

TEST_CASE("svg output") {
  const Environment env = Environment::expand(room_spec(1, 1));
  std::ostringstream empty;
  emit_svg(env, 0, {}, empty);
  CHECK(empty.str().find("class=\"ap\"") == std::string::npos);
  CHECK(empty.str().find("class=\"boundary\"") != std::string::npos);

  Plan plan;
  plan.clusters.push_back({{}, Region(rect_ring(0.4, 0.4, 0.6, 0.6)), {0.5, 0.5}});
  SvgLayers layers;
  layers.plan = &plan;
  std::ostringstream one, again;
  emit_svg(env, 0, layers, one);
  emit_svg(env, 0, layers, again);
  CHECK(count_of(one.str(), "class=\"ap\"") == 1);
  CHECK(one.str().find("data-x=\"0.5\" data-y=\"0.5\"") != std::string::npos);
  CHECK(one.str() == again.str());
  CHECK_THROWS(emit_svg(env, 0, layers, std::filesystem::path("/nonexistent/dir/x.svg")));
}

TEST_CASE("svg shows stochastic placements dashed") {
  EnvironmentSpec s = room_spec(6, 2);
  s.stochastic_obstacles.push_back({rect_ring(0, 0, 0.5, 0.5), {{1, 0.5}, {3, 0.5}, {4.5, 0.5}}});
  const Environment env = Environment::expand(s);
  std::ostringstream os;
  emit_svg(env, 1, {}, os);
  CHECK(count_of(os.str(), "class=\"placement\"") == 3);
  CHECK(count_of(os.str(), "class=\"stochastic\"") == 1);
}

TEST_CASE("pipeline on the square room") {
  const Environment env = Environment::expand(room_spec(1, 1));
  PlannerConfig c;
  c.range = RangeSpec::bounded(0.72);
  const auto dir = scratch("square");
  std::ostringstream log;
  const PipelineResult r = run_pipeline(env, c, dir, log);
  INFO(log.str());
  CHECK(r.exit_code == 0);
  CHECK(r.plan.g() == 1);
  CHECK(r.coverage.min_coverage_fraction == 1.0);
  for (const char* f : {"bounds.json", "graph.json", "plan.json", "coverage.json", "realization_1.svg"}) {
    CHECK(std::filesystem::exists(dir / f));
  }
  const std::vector<Point2> aps = load_ap_points(dir / "plan.json");
  REQUIRE(aps.size() == 1);
  CHECK(aps[0].x == r.plan.clusters[0].ap_point.x);
  CHECK(aps[0].y == r.plan.clusters[0].ap_point.y);

  const auto dir2 = scratch("square2");
  run_pipeline(env, c, dir2, log);
  for (const char* f : {"bounds.json", "graph.json", "plan.json", "coverage.json", "realization_1.svg"}) {
    CHECK(slurp(dir / f) == slurp(dir2 / f));
  }
}

TEST_CASE("pipeline rejects R above the bound before building the graph") {
  EnvironmentSpec s = room_spec(4, 4, {rect_ring(1, 1, 1.5, 1.5)});
  const Environment env = Environment::expand(s);
  PlannerConfig c;
  c.range = RangeSpec::bounded(2.0);
  c.R_override = 100.0;
  const auto dir = scratch("reject");
  std::ostringstream log;
  const PipelineResult r = run_pipeline(env, c, dir, log);
  CHECK(r.exit_code != 0);
  CHECK(r.failed_stage == "bounds");
  CHECK_FALSE(std::filesystem::exists(dir / "graph.json"));
  CHECK(log.str().find("bounds") != std::string::npos);
}

TEST_CASE("gap pipeline") {
  EnvironmentSpec s = room_spec(4, 3, {rect_ring(1.5, 1, 2.5, 2)});
  s.stochastic_obstacles.push_back({rect_ring(0, 0, 0.6, 0.6), {{0.4, 0.4}, {3.0, 2.0}}});
  const Environment env = Environment::expand(s);
  PlannerConfig c;
  c.range = RangeSpec::bounded(3.0);
  c.alpha_gap = 0.25;
  const auto dir = scratch("gap");
  std::ostringstream log;
  const PipelineResult r = run_pipeline(env, c, dir, log);
  INFO(log.str());
  CHECK(r.exit_code == 0);
  CHECK(r.plan.mode == PlanMode::Gap);
  CHECK(std::filesystem::exists(dir / "realization_2.svg"));
}

TEST_CASE("unrefined pipeline on the two-placement fixture") {
  const Environment env = load_environment(std::filesystem::path(LOSPLAN_DATA_DIR) / "two_placement_fixture.json");
  PlannerConfig c;
  c.alpha_gap = 0.25;
  c.refine = false;
  const auto dir = scratch("two_placement");
  std::ostringstream log;
  const PipelineResult r = run_pipeline(env, c, dir, log);
  INFO(log.str());
  CHECK(r.exit_code == 0);
  CHECK(r.graph.nodes == 16);
  CHECK(r.graph.edges == 109);
  CHECK(r.plan.g() == 2);
  REQUIRE(r.plan.uncovered.size() == 2);
  CHECK(r.plan.uncovered[0].size() == 2);
  CHECK(r.plan.uncovered[1].size() == 2);
  CHECK(log.str().find("warning") != std::string::npos);
}

TEST_CASE("config validation") {
  PlannerConfig c;
  c.alpha_gap = 1.5;
  CHECK_THROWS(c.validate());
  c.alpha_gap.reset();
  c.pitch = -1.0;
  CHECK_THROWS(c.validate());
  c.pitch.reset();
  c.range = RangeSpec::bounded(1.0, 8);
  CHECK_THROWS(c.validate());
}
