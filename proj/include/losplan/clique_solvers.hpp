#pragma once

#include <string>
#include <vector>

#include "losplan/geometry.hpp"
#include "losplan/pv_graph.hpp"

namespace losplan {

struct CliqueCluster {
  std::vector<std::size_t> members;
  Region joint_visibility;
  Point2 ap_point;
};

enum class PlanMode { Full, Gap };

/// How MCP compares the remaining node count of a realization against
/// alpha * M^(t).
enum class GapThreshold { Inclusive, Strict };

struct Plan {
  PlanMode mode = PlanMode::Full;
  double alpha_gap = 0.0;
  GapThreshold threshold = GapThreshold::Inclusive;
  std::vector<CliqueCluster> clusters;
  /// Node ids left uncovered, per realization (empty lists in full mode).
  std::vector<std::vector<std::size_t>> uncovered;
  /// Total area of uncovered triangles over free-space area, per realization.
  std::vector<double> gap_area_fraction;
  int lower_bound_h = 0;
  bool lower_bound_exact = false;

  std::size_t g() const { return clusters.size(); }
};

class SolverError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Minimum clique cover heuristic (ascending residual degree).
Plan mcc(const PVGraph& g, std::size_t exact_threshold = 64);

/// Maximum clique packing with tolerated gap alpha in (0,1).
Plan mcp(const PVGraph& g, double alpha_gap, GapThreshold threshold = GapThreshold::Inclusive,
         std::size_t exact_threshold = 64);

struct IndependenceBound {
  std::vector<std::size_t> set;
  bool exact = false;
  int h() const { return static_cast<int>(set.size()); }
};

/// Exact maximum independent set up to exact_threshold nodes, greedy
/// minimum-degree set beyond. Either way the set is independent.
IndependenceBound independence_lower_bound(const PVGraph& g, std::size_t exact_threshold = 64);

/// Pole of inaccessibility of the region's largest component.
Point2 choose_ap_point(const Region& region);

/// Contract violations of a plan against its graph (empty when valid).
std::vector<std::string> validate_plan(const PVGraph& g, const Plan& plan);

/// Fills gap_area_fraction from the uncovered lists. free_area[t] is the
/// free-space area of realization t.
void measure_gap_area(const PVGraph& g, std::span<const double> free_area, Plan& plan);

}  // namespace losplan
