#pragma once

#include <optional>
#include <span>
#include <vector>

#include "losplan/environment.hpp"
#include "losplan/geometry.hpp"

namespace losplan {

/// Radius of the largest circle inscribed in the convex hull of the ring.
double irch(const Ring& obstacle);

/// Chebyshev centre and radius of a convex CCW polygon.
struct ChebyshevBall {
  Point2 center;
  double radius = 0.0;
};
ChebyshevBall chebyshev_ball(const Ring& convex);

/// Smallest positive root of x^3 - r x^2 + d^2 x + d^2 r. Requires
/// 0 < d <= (sqrt(3)/6) r; throws std::domain_error otherwise.
double cubic_smallest_root(double r, double delta_min);

/// Value of the cubic above.
double inradius_cubic(double x, double r, double delta_min);

struct BoundsReport {
  double r = 0.0;
  std::vector<double> deltas;
  std::optional<double> delta_min;
  bool small_obstacle_regime = false;
  std::optional<double> x_star;
  double R_upper = 0.0;
  /// min(R_upper, 2 delta_min) with obstacles, R_upper otherwise.
  double R_default = 0.0;
};

/// Upper bound on the hyper-triangulation side length.
BoundsReport ucal(double r, std::span<const double> deltas);

/// ucal over every obstacle shape of the environment (fixed and stochastic).
BoundsReport environment_bounds(const EnvironmentSpec& spec, double r);

}  // namespace losplan
