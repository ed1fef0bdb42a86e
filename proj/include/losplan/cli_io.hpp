#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

#include "json.hpp"
#include "losplan/bounds.hpp"
#include "losplan/clique_solvers.hpp"
#include "losplan/coverage_oracle.hpp"
#include "losplan/environment.hpp"
#include "losplan/pv_graph.hpp"

namespace losplan {

/// Malformed input file. line and column are 1-based; 0 when unknown.
class FormatError : public std::runtime_error {
 public:
  FormatError(const std::string& detail, std::size_t line = 0, std::size_t column = 0, const std::string& source = "");
  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }
  /// Message without the location prefix.
  const std::string& detail() const { return detail_; }

 private:
  std::string detail_;
  std::size_t line_;
  std::size_t column_;
};

struct PlannerConfig {
  RangeSpec range = RangeSpec::unbounded();
  /// Set for gap plans.
  std::optional<double> alpha_gap;
  GapThreshold threshold = GapThreshold::Inclusive;
  std::optional<double> R_override;
  /// Defaults to R/4.
  std::optional<double> pitch;
  std::uint64_t seed = 1;
  std::size_t exact_threshold = 64;
  unsigned threads = 0;
  /// False: plain triangulation without refinement or R bound (illustrative
  /// layouts only; the full-coverage guarantee does not apply).
  bool refine = true;

  void validate() const;
};

/// Parses and schema-checks an environment document.
EnvironmentSpec parse_environment(std::string_view text);
EnvironmentSpec load_environment_spec(const std::filesystem::path& path);
/// load_environment_spec followed by expansion of every realization.
Environment load_environment(const std::filesystem::path& path);

nlohmann::json environment_to_json(const EnvironmentSpec& spec);
void save_environment(const EnvironmentSpec& spec, const std::filesystem::path& path);

nlohmann::json bounds_to_json(const BoundsReport& b, const RangeSpec& range, double R_used);
nlohmann::json graph_to_json(const PVGraph& g, double R);
nlohmann::json plan_to_json(const PVGraph& g, const Plan& plan);
nlohmann::json coverage_to_json(const CoverageReport& rep, std::uint64_t seed);
/// Per-realization triangle lists (1-based indices).
nlohmann::json triangulation_to_json(const Environment& env, double R);

/// AP points of a plan document.
std::vector<Point2> load_ap_points(const std::filesystem::path& plan_path);

/// Writes json with two-space indent and a trailing newline.
void write_json(const nlohmann::json& j, const std::filesystem::path& path);

struct SvgLayers {
  const Plan* plan = nullptr;
  /// Translucent fills, e.g. joint visibility regions.
  std::span<const Region> regions;
  const RealizationCoverage* coverage = nullptr;
};

/// Layout of one realization with optional overlays. Output is a pure
/// function of the inputs.
void emit_svg(const Environment& env, std::size_t t, const SvgLayers& layers, std::ostream& out);
void emit_svg(const Environment& env, std::size_t t, const SvgLayers& layers, const std::filesystem::path& path);

/// R for a run: the override when given (rejected above R_upper), R_default
/// otherwise.
double choose_R(const BoundsReport& b, const PlannerConfig& config);

struct PipelineResult {
  int exit_code = 0;
  /// Stage that failed, empty on success.
  std::string failed_stage;
  std::vector<std::string> violations;
  BoundsReport bounds;
  double R = 0.0;
  GraphStats graph;
  Plan plan;
  CoverageReport coverage;
};

/// bounds -> graph -> plan -> verify, writing bounds.json, graph.json,
/// plan.json, coverage.json and realization_<t>.svg into out_dir. exit_code
/// is 0 iff every contract check held.
PipelineResult run_pipeline(const Environment& env, const PlannerConfig& config, const std::filesystem::path& out_dir,
                            std::ostream& log);

}  // namespace losplan
