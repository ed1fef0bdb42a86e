#pragma once

// Test-only helpers and oracles. Nothing here calls into the code under test
// beyond plain data types.

#include <cmath>
#include <numbers>
#include <algorithm>
#include <random>
#include <span>
#include <vector>

#include "losplan/environment.hpp"
#include "losplan/geometry.hpp"

namespace losplan::testing {

/// Winding number of ring around p via summed signed angles.
inline int winding_number(Point2 p, std::span<const Point2> ring) {
  double total = 0.0;
  const std::size_t n = ring.size();
  for (std::size_t i = 0; i < n; ++i) {
    const Point2 a = ring[i] - p;
    const Point2 b = ring[(i + 1) % n] - p;
    total += std::atan2(a.x * b.y - a.y * b.x, a.x * b.x + a.y * b.y);
  }
  return static_cast<int>(std::lround(total / (2.0 * std::numbers::pi)));
}

/// Random simple CCW polygon, star-shaped around center.
inline Ring random_star_polygon(std::mt19937_64& rng, Point2 center, double radius, int n, double min_frac = 0.35) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<double> angles;
  for (int i = 0; i < n; ++i) angles.push_back(2.0 * std::numbers::pi * (i + 0.15 + 0.7 * u(rng)) / n);
  std::vector<Point2> pts;
  for (double a : angles) {
    const double r = radius * (min_frac + (1.0 - min_frac) * u(rng));
    pts.push_back(center + Point2{std::cos(a), std::sin(a)} * r);
  }
  return Ring(std::move(pts));
}

inline Ring rect_ring(double x0, double y0, double x1, double y1) {
  return Ring({{x0, y0}, {x1, y0}, {x1, y1}, {x0, y1}});
}

/// Rectangular room with optional fixed obstacles.
inline EnvironmentSpec room_spec(double w, double h, std::vector<Ring> fixed = {}) {
  EnvironmentSpec s;
  s.outer = rect_ring(0, 0, w, h);
  s.fixed_obstacles = std::move(fixed);
  return s;
}

/// Whether p lies inside the closed triangle abc (orientation agnostic).
inline bool in_triangle(Point2 p, Point2 a, Point2 b, Point2 c, double tol = 0.0) {
  const double d1 = (b.x - a.x) * (p.y - a.y) - (b.y - a.y) * (p.x - a.x);
  const double d2 = (c.x - b.x) * (p.y - b.y) - (c.y - b.y) * (p.x - b.x);
  const double d3 = (a.x - c.x) * (p.y - c.y) - (a.y - c.y) * (p.x - c.x);
  const bool neg = d1 < -tol || d2 < -tol || d3 < -tol;
  const bool pos = d1 > tol || d2 > tol || d3 > tol;
  return !(neg && pos);
}

/// Free-space membership by winding numbers only.
inline bool in_free_space_oracle(Point2 p, const Ring& outer, std::span<const Ring> obstacles) {
  if (winding_number(p, outer.vertices()) == 0) return false;
  for (const Ring& o : obstacles) {
    if (winding_number(p, o.vertices()) != 0) return false;
  }
  return true;
}

/// Random layout: a star-shaped boundary of 6-10 vertices, one stochastic
/// obstacle with 2-4 placements and optionally one fixed obstacle. Retries
/// until the layout validates.
inline Environment random_environment(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (;;) {
    EnvironmentSpec s;
    const double rb = 4.0 + 4.0 * u(rng);
    s.outer = random_star_polygon(rng, {0, 0}, rb, 6 + static_cast<int>(u(rng) * 5));
    const double reach = 0.35 * rb;
    if (u(rng) < 0.5) {
      const Point2 c{(2 * u(rng) - 1) * reach, (2 * u(rng) - 1) * reach};
      s.fixed_obstacles.push_back(random_star_polygon(rng, c, 0.6 + 0.8 * u(rng), 3 + static_cast<int>(u(rng) * 4), 0.6));
    }
    StochasticObstacle so;
    so.shape = random_star_polygon(rng, {0, 0}, 0.6 + 0.8 * u(rng), 3 + static_cast<int>(u(rng) * 4), 0.6);
    const int n = 2 + static_cast<int>(u(rng) * 3);
    for (int i = 0; i < n; ++i) so.placements.push_back({(2 * u(rng) - 1) * reach, (2 * u(rng) - 1) * reach});
    s.stochastic_obstacles.push_back(std::move(so));
    try {
      return Environment::expand(std::move(s));
    } catch (const EnvironmentError&) {
    }
  }
}

/// Exact LoS oracle: splits ab at every contact with a wall and requires each
/// piece's midpoint to be free space (winding numbers) or on a wall.
inline bool los_oracle(Point2 a, Point2 b, const Realization& r) {
  std::vector<double> ts{0.0, 1.0};
  const Point2 d = b - a;
  const double len2 = d.x * d.x + d.y * d.y;
  if (len2 == 0.0) return true;
  for (const Segment& w : r.walls()) {
    const Point2 e = w.b - w.a;
    const double den = d.x * e.y - d.y * e.x;
    if (den != 0.0) {
      const Point2 f = w.a - a;
      const double t = (f.x * e.y - f.y * e.x) / den;
      const double s = (f.x * d.y - f.y * d.x) / den;
      if (t > 0 && t < 1 && s >= -1e-12 && s <= 1 + 1e-12) ts.push_back(t);
    }
    for (Point2 q : {w.a, w.b}) {
      const double t = ((q.x - a.x) * d.x + (q.y - a.y) * d.y) / len2;
      if (t > 0 && t < 1) ts.push_back(t);
    }
  }
  std::sort(ts.begin(), ts.end());
  for (std::size_t i = 0; i + 1 < ts.size(); ++i) {
    if (ts[i + 1] - ts[i] < 1e-12) continue;
    const Point2 m = a + d * (0.5 * (ts[i] + ts[i + 1]));
    bool on_wall = false;
    for (const Segment& w : r.walls()) {
      if (point_segment_distance(m, w.a, w.b) < 1e-9 * r.diameter()) on_wall = true;
    }
    if (!on_wall && !in_free_space_oracle(m, r.outer(), r.obstacles())) return false;
  }
  return true;
}

/// Uniform random point of free space by rejection.
inline Point2 random_free_point(std::mt19937_64& rng, const Realization& r) {
  const BBox b = r.outer().bbox();
  std::uniform_real_distribution<double> ux(b.min_x, b.max_x), uy(b.min_y, b.max_y);
  for (;;) {
    const Point2 p{ux(rng), uy(rng)};
    if (in_free_space_oracle(p, r.outer(), r.obstacles())) return p;
  }
}

/// Uniform random point inside triangle abc.
inline Point2 random_in_triangle(std::mt19937_64& rng, Point2 a, Point2 b, Point2 c) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  double s = u(rng), t = u(rng);
  if (s + t > 1.0) {
    s = 1.0 - s;
    t = 1.0 - t;
  }
  return a + (b - a) * s + (c - a) * t;
}

}  // namespace losplan::testing
