#include "losplan/visibility.hpp"

#include <numbers>

namespace losplan {

void RangeSpec::validate() const {
  if (r && !(*r > 0.0 && std::isfinite(*r))) throw GeometryError("range r must be positive");
  if (disk_sides < 16) throw GeometryError("disk_sides must be at least 16");
}

namespace {

constexpr double kAngleTol = 1e-9;

// Signed distance of q from the line through a with unit direction u (left positive).
double side(Point2 a, Point2 u, Point2 q) { return cross(u, q - a); }

bool strictly_crosses(Point2 a, Point2 b, Point2 c, Point2 d, double eps) {
  const double lab = distance(a, b);
  const double lcd = distance(c, d);
  if (lab <= eps || lcd <= eps) return false;
  const double s1 = orient(a, b, c) / lab;
  const double s2 = orient(a, b, d) / lab;
  const double s3 = orient(c, d, a) / lcd;
  const double s4 = orient(c, d, b) / lcd;
  return ((s1 > eps && s2 < -eps) || (s1 < -eps && s2 > eps)) && ((s3 > eps && s4 < -eps) || (s3 < -eps && s4 > eps));
}

}  // namespace

bool segment_clear(Point2 a, Point2 b, const Realization& real) {
  const double eps = real.eps();
  if (distance(a, b) <= eps) return true;
  for (const Segment& w : real.walls()) {
    if (strictly_crosses(a, b, w.a, w.b, eps)) return false;
  }
  for (const WallVertex& v : real.wall_vertices()) {
    if (point_segment_distance(v.p, a, b) > eps) continue;
    const bool at_a = distance(v.p, a) <= eps;
    const bool at_b = distance(v.p, b) <= eps;
    if (at_a) {
      if (!direction_in_wedge(v.prev, v.p, v.next, b - a, kAngleTol, true)) return false;
    } else if (at_b) {
      if (!direction_in_wedge(v.prev, v.p, v.next, a - b, kAngleTol, true)) return false;
    } else {
      if (!direction_in_wedge(v.prev, v.p, v.next, a - v.p, kAngleTol, true)) return false;
      if (!direction_in_wedge(v.prev, v.p, v.next, b - v.p, kAngleTol, true)) return false;
    }
  }
  // An endpoint resting on a wall must leave towards the free side.
  for (const Segment& w : real.walls()) {
    const double lw = distance(w.a, w.b);
    const Point2 uw = (w.b - w.a) * (1.0 / lw);
    for (int k = 0; k < 2; ++k) {
      const Point2 p = k == 0 ? a : b;
      const Point2 q = k == 0 ? b : a;
      if (point_segment_distance(p, w.a, w.b) > eps) continue;
      if (distance(p, w.a) <= eps || distance(p, w.b) <= eps) continue;
      const Point2 d = (q - p) * (1.0 / distance(p, q));
      if (cross(uw, d) < -kAngleTol) return false;
    }
  }
  return true;
}

bool los_clear(Point2 a, Point2 b, const Realization& real) {
  if (!real.contains(a) || !real.contains(b)) throw GeometryError("los_clear: endpoint outside free space");
  return segment_clear(a, b, real);
}

Ring visibility_polygon(Point2 P, const Realization& real) {
  const double eps = real.eps();
  if (!real.contains(P)) throw GeometryError("visibility: point outside free space");

  // Where P sits on the boundary, only the free wedge around it is swept.
  bool on_boundary = false;
  Point2 w_out, w_in;
  for (const WallVertex& v : real.wall_vertices()) {
    if (distance(v.p, P) <= eps) {
      P = v.p;
      on_boundary = true;
      w_out = v.next - P;
      w_in = v.prev - P;
      break;
    }
  }
  if (!on_boundary) {
    for (const Segment& w : real.walls()) {
      if (point_segment_distance(P, w.a, w.b) <= eps) {
        on_boundary = true;
        w_out = w.b - w.a;
        w_in = w.a - w.b;
        break;
      }
    }
  }
  auto incident = [&](const Segment& w) {
    return on_boundary && (point_segment_distance(P, w.a, w.b) <= eps);
  };

  struct Dir {
    double angle;
    Point2 u;
  };
  std::vector<Dir> dirs;
  const double two_pi = 2.0 * std::numbers::pi;
  double wedge = two_pi;
  Point2 ref{1.0, 0.0};
  if (on_boundary) {
    ref = w_out * (1.0 / norm(w_out));
    const Point2 in = w_in * (1.0 / norm(w_in));
    wedge = std::atan2(cross(ref, in), dot(ref, in));
    if (wedge <= 0.0) wedge += two_pi;
  }
  auto angle_of = [&](Point2 u) {
    double a = std::atan2(cross(ref, u), dot(ref, u));
    if (a < 0.0) a += two_pi;
    if (on_boundary && a > two_pi - kAngleTol) a = 0.0;
    return a;
  };
  if (on_boundary) {
    dirs.push_back({0.0, ref});
    dirs.push_back({wedge, w_in * (1.0 / norm(w_in))});
  }
  for (const WallVertex& v : real.wall_vertices()) {
    const double l = distance(v.p, P);
    if (l <= eps) continue;
    const Point2 u = (v.p - P) * (1.0 / l);
    const double a = angle_of(u);
    if (on_boundary && a > wedge + kAngleTol) continue;
    dirs.push_back({std::min(a, wedge), u});
  }
  std::sort(dirs.begin(), dirs.end(), [](const Dir& x, const Dir& y) { return x.angle < y.angle; });
  std::vector<Dir> merged;
  for (const Dir& d : dirs) {
    if (!merged.empty() && d.angle - merged.back().angle <= kAngleTol) continue;
    merged.push_back(d);
  }

  std::vector<Point2> pts;
  if (on_boundary) pts.push_back(P);
  const double inf = std::numeric_limits<double>::infinity();
  for (std::size_t di = 0; di < merged.size(); ++di) {
    const Point2 u = merged[di].u;
    double t_minus = inf;
    double t_plus = inf;
    for (const Segment& w : real.walls()) {
      if (incident(w)) continue;
      const double sc = side(P, u, w.a);
      const double sd = side(P, u, w.b);
      const bool c_on = std::abs(sc) <= eps;
      const bool d_on = std::abs(sd) <= eps;
      if (c_on && d_on) continue;
      if (c_on || d_on) {
        const Point2 e = c_on ? w.a : w.b;
        const double other = c_on ? sd : sc;
        const double t = dot(u, e - P);
        if (t <= eps) continue;
        if (other > 0.0) {
          t_plus = std::min(t_plus, t);
        } else {
          t_minus = std::min(t_minus, t);
        }
        continue;
      }
      if ((sc > 0.0) == (sd > 0.0)) continue;
      const double f = sc / (sc - sd);
      const Point2 x = w.a + (w.b - w.a) * f;
      const double t = dot(u, x - P);
      if (t <= eps) continue;
      t_minus = std::min(t_minus, t);
      t_plus = std::min(t_plus, t);
    }
    if (on_boundary && di == 0) t_minus = 0.0;
    if (on_boundary && di + 1 == merged.size()) t_plus = 0.0;
    if (!std::isfinite(t_minus)) t_minus = 0.0;
    if (!std::isfinite(t_plus)) t_plus = 0.0;
    pts.push_back(P + u * t_minus);
    if (std::abs(t_plus - t_minus) > eps) pts.push_back(P + u * t_plus);
  }
  pts = simplify_chain(std::move(pts), eps);
  if (pts.size() < 3 || std::abs(ring_signed_area(pts)) <= kEpsArea * 1e-3) return Ring();
  return Ring::unchecked(std::move(pts));
}

Region visibility_of_point(Point2 P, const Realization& real, const RangeSpec& range) {
  range.validate();
  Ring poly = visibility_polygon(P, real);
  if (poly.size() < 3) return Region();
  Region vis(std::move(poly));
  if (!range.is_bounded()) return vis;
  const Region disk(regular_polygon(P, *range.r, range.disk_sides));
  return region_intersection(vis, disk, real.eps());
}

Region visibility_of_triangle(const TriangleNode& p, const Realization& real, const RangeSpec& range) {
  const Region a = visibility_of_point(p.v[0], real, range);
  const Region b = visibility_of_point(p.v[1], real, range);
  const Region c = visibility_of_point(p.v[2], real, range);
  const Region* all[] = {&a, &b, &c};
  return visibility_of_set(all);
}

Region visibility_of_set(std::span<const Region* const> regions) {
  if (regions.empty()) return Region();
  Region acc = *regions[0];
  for (std::size_t i = 1; i < regions.size(); ++i) {
    if (region_is_empty(acc)) return Region();
    acc = region_intersection(acc, *regions[i]);
  }
  if (region_is_empty(acc)) return Region();
  return acc;
}

VisibilityCache::VisibilityCache(const Environment& env, RangeSpec range) : env_(&env), range_(range) {
  range_.validate();
  for (std::size_t t = 0; t < env.size(); ++t) shards_.push_back(std::make_unique<Shard>());
}

const Region& VisibilityCache::point(int t, Point2 p) {
  Shard& s = *shards_.at(static_cast<std::size_t>(t));
  {
    std::lock_guard lock(s.mu);
    auto it = s.regions.find(p);
    if (it != s.regions.end()) return *it->second;
  }
  auto fresh = std::make_unique<Region>(visibility_of_point(p, env_->realization(static_cast<std::size_t>(t)), range_));
  std::lock_guard lock(s.mu);
  auto [it, inserted] = s.regions.try_emplace(p, std::move(fresh));
  return *it->second;
}

Region VisibilityCache::triangle(const TriangleNode& p) {
  const Region* all[] = {&point(p.t, p.v[0]), &point(p.t, p.v[1]), &point(p.t, p.v[2])};
  return visibility_of_set(all);
}

}  // namespace losplan
