#include "losplan/environment.hpp"

#include <limits>

namespace losplan {

std::size_t EnvironmentSpec::realization_count() const {
  std::size_t t = 1;
  for (const StochasticObstacle& s : stochastic_obstacles) t *= s.placements.size();
  return t;
}

std::vector<Ring> EnvironmentSpec::obstacle_shapes() const {
  std::vector<Ring> out = fixed_obstacles;
  for (const StochasticObstacle& s : stochastic_obstacles) out.push_back(s.shape);
  return out;
}

namespace {

double ring_diameter(const Ring& r) {
  double d = 0.0;
  for (std::size_t i = 0; i < r.size(); ++i) {
    for (std::size_t j = i + 1; j < r.size(); ++j) d = std::max(d, distance(r[i], r[j]));
  }
  return d;
}

void append_walls(const Ring& ring, std::vector<Segment>& walls, std::vector<WallVertex>& verts) {
  const std::size_t n = ring.size();
  for (std::size_t i = 0; i < n; ++i) {
    walls.push_back({ring[i], ring[(i + 1) % n]});
    verts.push_back({ring[i], ring[(i + n - 1) % n], ring[(i + 1) % n]});
  }
}

bool rings_touch(const Ring& a, const Ring& b, double eps) {
  for (std::size_t i = 0; i < a.size(); ++i) {
    const Segment sa{a[i], a[(i + 1) % a.size()]};
    for (std::size_t j = 0; j < b.size(); ++j) {
      if (segment_distance(sa, {b[j], b[(j + 1) % b.size()]}) <= eps) return true;
    }
  }
  return false;
}

}  // namespace

Realization::Realization(int index, const Ring& outer, std::vector<Ring> obstacles, std::vector<bool> stochastic)
    : index_(index), stochastic_(std::move(stochastic)) {
  Polygon poly{outer.with_orientation(true), {}};
  for (Ring& o : obstacles) {
    o = o.with_orientation(true);
    poly.holes.push_back(o.reversed());
  }
  obstacles_ = std::move(obstacles);
  append_walls(poly.outer, walls_, wall_vertices_);
  for (const Ring& h : poly.holes) append_walls(h, walls_, wall_vertices_);
  diameter_ = ring_diameter(poly.outer);
  eps_ = kEpsGeomRelative * std::max(diameter_, 1e-300);
  free_space_ = Region(std::move(poly));
}

double Realization::clearance(Point2 p) const {
  double best = std::numeric_limits<double>::infinity();
  for (const Segment& w : walls_) best = std::min(best, point_segment_distance(p, w.a, w.b));
  return best;
}

Environment Environment::expand(EnvironmentSpec spec) {
  const Ring outer = spec.outer.with_orientation(true);
  const double eps = kEpsGeomRelative * ring_diameter(outer);
  if (!outer.is_simple(eps)) throw EnvironmentError("outer boundary is not a simple polygon");
  for (std::size_t i = 0; i < spec.fixed_obstacles.size(); ++i) {
    if (!spec.fixed_obstacles[i].is_simple(eps)) {
      throw EnvironmentError("fixed obstacle " + std::to_string(i) + " is not a simple polygon");
    }
  }
  for (std::size_t i = 0; i < spec.stochastic_obstacles.size(); ++i) {
    const StochasticObstacle& s = spec.stochastic_obstacles[i];
    if (!s.shape.is_simple(eps)) {
      throw EnvironmentError("stochastic obstacle " + std::to_string(i) + " is not a simple polygon");
    }
    if (s.placements.empty()) {
      throw EnvironmentError("stochastic obstacle " + std::to_string(i) + " has no placements");
    }
    for (const Point2& p : s.placements) {
      if (!is_finite(p)) throw EnvironmentError("stochastic obstacle " + std::to_string(i) + " has a non-finite placement");
    }
  }

  Environment env;
  const std::size_t total = spec.realization_count();
  const std::size_t k = spec.stochastic_obstacles.size();
  std::vector<std::size_t> digit(k, 0);
  for (std::size_t t = 0; t < total; ++t) {
    const int ti = static_cast<int>(t);
    std::vector<Ring> obstacles = spec.fixed_obstacles;
    std::vector<bool> stochastic(obstacles.size(), false);
    for (std::size_t s = 0; s < k; ++s) {
      const StochasticObstacle& so = spec.stochastic_obstacles[s];
      obstacles.push_back(so.shape.translated(so.placements[digit[s]]));
      stochastic.push_back(true);
    }
    for (std::size_t i = 0; i < obstacles.size(); ++i) {
      const Ring& o = obstacles[i];
      for (const Point2& p : o.vertices()) {
        if (!point_in_ring_interior(p, outer.vertices())) {
          throw EnvironmentError("obstacle " + std::to_string(i) + " lies outside the boundary", ti);
        }
      }
      if (rings_touch(o, outer, eps)) {
        throw EnvironmentError("obstacle " + std::to_string(i) + " touches or crosses the boundary", ti);
      }
      for (std::size_t j = 0; j < i; ++j) {
        const Ring& q = obstacles[j];
        if (rings_touch(o, q, eps) || point_in_ring_interior(o[0], q.vertices()) ||
            point_in_ring_interior(q[0], o.vertices())) {
          throw EnvironmentError("obstacles " + std::to_string(j) + " and " + std::to_string(i) + " overlap", ti);
        }
      }
    }
    env.realizations_.emplace_back(ti, outer, std::move(obstacles), std::move(stochastic));
    // Odometer over placements, last obstacle fastest.
    for (std::size_t s = k; s-- > 0;) {
      if (++digit[s] < spec.stochastic_obstacles[s].placements.size()) break;
      digit[s] = 0;
    }
  }
  spec.outer = outer;
  env.spec_ = std::move(spec);
  return env;
}

}  // namespace losplan
