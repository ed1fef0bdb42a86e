#pragma once

#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "losplan/geometry.hpp"

namespace losplan {

/// Obstacle whose shape is fixed but whose position is one of a finite list
/// of translations.
struct StochasticObstacle {
  Ring shape;
  std::vector<Point2> placements;
};

struct EnvironmentSpec {
  Ring outer;
  std::vector<Ring> fixed_obstacles;
  std::vector<StochasticObstacle> stochastic_obstacles;
  std::string units = "meters";

  /// Product of the placement counts (1 when nothing is stochastic).
  std::size_t realization_count() const;
  /// Every obstacle shape once, fixed ones first, stochastic ones un-translated.
  std::vector<Ring> obstacle_shapes() const;
};

/// Invalid environment. realization() is the 0-based realization the problem
/// was found in, or -1 when it is not specific to one.
class EnvironmentError : public std::runtime_error {
 public:
  EnvironmentError(const std::string& what, int realization = -1)
      : std::runtime_error(realization >= 0 ? what + " (realization " + std::to_string(realization + 1) + ")"
                                            : what),
        realization_(realization) {}
  int realization() const { return realization_; }

 private:
  int realization_;
};

/// A ring vertex with its neighbours, oriented so free space lies to the left
/// of prev -> p -> next.
struct WallVertex {
  Point2 p;
  Point2 prev;
  Point2 next;
};

/// One concrete placement of all obstacles.
class Realization {
 public:
  /// outer is made CCW; obstacles are taken as solid shapes in any orientation.
  Realization(int index, const Ring& outer, std::vector<Ring> obstacles, std::vector<bool> stochastic);

  int index() const { return index_; }
  const Region& free_space() const { return free_space_; }
  /// Boundary edges directed so that free space is on their left.
  std::span<const Segment> walls() const { return walls_; }
  std::span<const WallVertex> wall_vertices() const { return wall_vertices_; }
  /// Placed obstacles, CCW.
  std::span<const Ring> obstacles() const { return obstacles_; }
  bool obstacle_is_stochastic(std::size_t i) const { return stochastic_[i]; }
  const Ring& outer() const { return free_space_.polygons()[0].outer; }

  double diameter() const { return diameter_; }
  /// Coincidence tolerance for this layout.
  double eps() const { return eps_; }
  double area() const { return free_space_.area(); }

  /// Closed free-space membership.
  bool contains(Point2 p) const { return point_in_region(p, free_space_, eps_); }
  /// Distance to the nearest wall.
  double clearance(Point2 p) const;

 private:
  int index_;
  Region free_space_;
  std::vector<Segment> walls_;
  std::vector<WallVertex> wall_vertices_;
  std::vector<Ring> obstacles_;
  std::vector<bool> stochastic_;
  double diameter_ = 0.0;
  double eps_ = 0.0;
};

/// A validated spec together with all of its realizations.
class Environment {
 public:
  /// Checks every invariant (simple rings, obstacles strictly inside the
  /// boundary and pairwise disjoint in every realization) and expands the
  /// Cartesian product of stochastic placements, last obstacle fastest.
  static Environment expand(EnvironmentSpec spec);

  const EnvironmentSpec& spec() const { return spec_; }
  std::span<const Realization> realizations() const { return realizations_; }
  const Realization& realization(std::size_t t) const { return realizations_.at(t); }
  std::size_t size() const { return realizations_.size(); }
  double diameter() const { return realizations_.front().diameter(); }

 private:
  EnvironmentSpec spec_;
  std::vector<Realization> realizations_;
};

}  // namespace losplan
