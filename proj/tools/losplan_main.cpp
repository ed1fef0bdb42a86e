// losplan: access point planning for layouts with stochastic obstacles.

#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "losplan/cli_io.hpp"

using namespace losplan;

namespace {

struct Options {
  std::string env_path;
  std::string range = "unbounded";
  int disk_sides = 64;
  double R = 0.0;
  double alpha = 0.0;
  bool strict = false;
  double pitch = 0.0;
  std::uint64_t seed = 1;
  std::size_t exact_threshold = 64;
  unsigned threads = 0;
  std::string out;
  std::string plan_path;
  std::string edges_path;
  bool no_refine = false;
};

void add_common(CLI::App* sub, Options& o) {
  sub->add_option("-e,--env", o.env_path, "Environment JSON file")->required()->check(CLI::ExistingFile);
  sub->add_option("-r,--range", o.range, "AP range in meters, or \"unbounded\"")->capture_default_str();
  sub->add_option("-k,--disk-sides", o.disk_sides, "Sides of the inscribed range polygon")->capture_default_str();
  sub->add_option("-R,--R", o.R, "Hyper-triangulation side bound (default: ucal R_default)");
  sub->add_option("-j,--threads", o.threads, "Worker threads (0 = all cores)")->capture_default_str();
  sub->add_option("-o,--out", o.out, "Output directory (default: print JSON to stdout)");
}

PlannerConfig to_config(const Options& o) {
  PlannerConfig c;
  if (o.range == "unbounded" || o.range == "inf") {
    c.range = RangeSpec::unbounded(o.disk_sides);
  } else {
    try {
      c.range = RangeSpec::bounded(std::stod(o.range), o.disk_sides);
    } catch (const std::logic_error&) {
      throw CLI::ValidationError("--range", "expected a number or \"unbounded\"");
    }
  }
  if (o.R > 0.0) c.R_override = o.R;
  if (o.alpha > 0.0) c.alpha_gap = o.alpha;
  if (o.pitch > 0.0) c.pitch = o.pitch;
  c.threshold = o.strict ? GapThreshold::Strict : GapThreshold::Inclusive;
  c.seed = o.seed;
  c.exact_threshold = o.exact_threshold;
  c.threads = o.threads;
  c.refine = !o.no_refine;
  c.validate();
  return c;
}

void emit(const nlohmann::json& j, const Options& o, const std::string& name) {
  if (o.out.empty()) {
    std::cout << j.dump(2) << '\n';
    return;
  }
  std::filesystem::create_directories(o.out);
  write_json(j, std::filesystem::path(o.out) / name);
  std::cerr << "wrote " << (std::filesystem::path(o.out) / name).string() << '\n';
}

struct Prepared {
  Environment env;
  PlannerConfig config;
  BoundsReport bounds;
  double R;
};

Prepared prepare(const Options& o) {
  PlannerConfig config = to_config(o);
  Environment env = load_environment(o.env_path);
  BoundsReport b = environment_bounds(env.spec(), config.range.radius(env.diameter()));
  const double R = choose_R(b, config);
  return {std::move(env), config, b, R};
}

PVGraph graph_of(const Prepared& p) {
  GraphOptions g;
  g.threads = p.config.threads;
  return build_pv_graph(p.env, p.config.range, p.R, g);
}

int plan(const Options& o, bool gap) {
  const Prepared p = prepare(o);
  const PVGraph g = graph_of(p);
  Plan plan = gap ? mcp(g, *p.config.alpha_gap, p.config.threshold, p.config.exact_threshold)
                  : mcc(g, p.config.exact_threshold);
  std::vector<double> area;
  for (const Realization& r : p.env.realizations()) area.push_back(r.area());
  measure_gap_area(g, area, plan);
  emit(plan_to_json(g, plan), o, "plan.json");
  const auto bad = validate_plan(g, plan);
  for (const auto& v : bad) std::cerr << "violation: " << v << '\n';
  return bad.empty() ? 0 : 2;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Access point placement with guaranteed line-of-sight coverage over obstacle realizations"};
  app.require_subcommand(1);
  Options o;

  auto* bounds = app.add_subcommand("bounds", "Obstacle inradii and the bound on R");
  add_common(bounds, o);
  auto* tri = app.add_subcommand("triangulate", "Hyper-triangulation of every realization");
  add_common(tri, o);
  auto* graph = app.add_subcommand("graph", "Partition-based visibility graph statistics");
  add_common(graph, o);
  graph->add_option("--edges", o.edges_path, "Also write the edge list (1-based \"t i t' i'\" lines)");
  auto* full = app.add_subcommand("plan-full", "Clique cover plan with full coverage");
  add_common(full, o);
  full->add_option("--exact-threshold", o.exact_threshold, "Largest graph solved exactly for the independence bound")
      ->capture_default_str();
  auto* gap = app.add_subcommand("plan-gap", "Clique packing plan with a tolerated coverage gap");
  add_common(gap, o);
  gap->add_option("-a,--alpha", o.alpha, "Tolerated gap fraction in (0,1)")->required();
  gap->add_flag("--strict", o.strict, "Drop nodes only below alpha * M, not at it");
  gap->add_option("--exact-threshold", o.exact_threshold)->capture_default_str();
  auto* verify = app.add_subcommand("verify", "Sample coverage of a plan in every realization");
  add_common(verify, o);
  verify->add_option("-p,--plan", o.plan_path, "plan.json to verify")->required()->check(CLI::ExistingFile);
  verify->add_option("--pitch", o.pitch, "Sampling pitch (default R/4)");
  verify->add_option("--seed", o.seed, "Jitter seed")->capture_default_str();
  auto* run = app.add_subcommand("run", "Bounds, graph, plan, verification and SVGs into --out");
  add_common(run, o);
  run->add_option("-a,--alpha", o.alpha, "Tolerated gap fraction; omit for a full plan");
  run->add_flag("--strict", o.strict, "Drop nodes only below alpha * M, not at it");
  run->add_option("--pitch", o.pitch, "Sampling pitch (default R/4)");
  run->add_option("--seed", o.seed, "Jitter seed")->capture_default_str();
  run->add_option("--exact-threshold", o.exact_threshold)->capture_default_str();
  run->add_flag("--no-refine", o.no_refine, "Plain triangulation, ignoring the bound on R (illustration only)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (bounds->parsed()) {
      const Prepared p = prepare(o);
      emit(bounds_to_json(p.bounds, p.config.range, p.R), o, "bounds.json");
    } else if (tri->parsed()) {
      const Prepared p = prepare(o);
      emit(triangulation_to_json(p.env, p.R), o, "triangulation.json");
    } else if (graph->parsed()) {
      const Prepared p = prepare(o);
      const PVGraph g = graph_of(p);
      emit(graph_to_json(g, p.R), o, "graph.json");
      if (!o.edges_path.empty()) {
        std::ofstream edges(o.edges_path);
        if (!edges) throw std::runtime_error("cannot write " + o.edges_path);
        write_edge_list(g, edges);
      }
    } else if (full->parsed()) {
      return plan(o, false);
    } else if (gap->parsed()) {
      return plan(o, true);
    } else if (verify->parsed()) {
      const Prepared p = prepare(o);
      CoverageOptions c;
      c.pitch = p.config.pitch.value_or(p.R / 4);
      c.R = p.R;
      c.seed = o.seed;
      c.threads = o.threads;
      const std::vector<Point2> aps = load_ap_points(o.plan_path);
      emit(coverage_to_json(verify_plan(p.env, aps, p.config.range, c), o.seed), o, "coverage.json");
    } else if (run->parsed()) {
      if (o.out.empty()) o.out = "out";
      const PlannerConfig config = to_config(o);
      const Environment env = load_environment(o.env_path);
      const PipelineResult r = run_pipeline(env, config, o.out, std::cerr);
      return r.exit_code;
    }
  } catch (const FormatError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 3;
  } catch (const EnvironmentError& e) {
    std::cerr << "invalid environment: " << e.what() << '\n';
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
