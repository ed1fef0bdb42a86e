#include "losplan/geometry.hpp"

#include <cstdint>
#include <numbers>
#include <queue>
#include <unordered_map>
#include <utility>

namespace losplan {

double point_segment_distance(Point2 p, Point2 a, Point2 b) {
  const Point2 ab = b - a;
  const double len2 = dot(ab, ab);
  if (len2 == 0.0) return distance(p, a);
  const double t = std::clamp(dot(p - a, ab) / len2, 0.0, 1.0);
  return distance(p, a + ab * t);
}

bool direction_in_wedge(Point2 prev, Point2 p, Point2 next, Point2 d, double tol, bool closed) {
  const double ld = norm(d);
  if (ld == 0.0) return closed;
  const Point2 u = (next - p) * (1.0 / norm(next - p));
  const Point2 w = (prev - p) * (1.0 / norm(prev - p));
  d = d * (1.0 / ld);
  const double turn = cross(u, w);
  if (std::abs(turn) <= tol && dot(u, w) < 0.0) {
    return closed ? cross(u, d) >= -tol : cross(u, d) > tol;
  }
  if (turn > 0.0) {
    return closed ? cross(u, d) >= -tol && cross(d, w) >= -tol : cross(u, d) > tol && cross(d, w) > tol;
  }
  if (closed) return !(cross(w, d) > tol && cross(d, u) > tol);
  return !(cross(w, d) >= -tol && cross(d, u) >= -tol);
}

double segment_distance(const Segment& s, const Segment& t) {
  const double d1 = orient(s.a, s.b, t.a), d2 = orient(s.a, s.b, t.b);
  const double d3 = orient(t.a, t.b, s.a), d4 = orient(t.a, t.b, s.b);
  if (((d1 > 0 && d2 < 0) || (d1 < 0 && d2 > 0)) && ((d3 > 0 && d4 < 0) || (d3 < 0 && d4 > 0))) return 0.0;
  return std::min({point_segment_distance(s.a, t.a, t.b), point_segment_distance(s.b, t.a, t.b),
                   point_segment_distance(t.a, s.a, s.b), point_segment_distance(t.b, s.a, s.b)});
}

double ring_signed_area(std::span<const Point2> v) {
  const std::size_t n = v.size();
  if (n < 3) return 0.0;
  // Shift to the first vertex to limit cancellation on large coordinates.
  const Point2 o = v[0];
  double twice = 0.0;
  for (std::size_t i = 1; i + 1 < n; ++i) twice += cross(v[i] - o, v[i + 1] - o);
  return 0.5 * twice;
}

// ---------------------------------------------------------------------------
// Ring

Ring::Ring(std::vector<Point2> vertices) : vertices_(std::move(vertices)) {
  if (vertices_.size() < 3) {
    throw GeometryError("ring needs at least 3 vertices, got " + std::to_string(vertices_.size()));
  }
  for (std::size_t i = 0; i < vertices_.size(); ++i) {
    if (!is_finite(vertices_[i])) throw GeometryError("ring vertex " + std::to_string(i) + " is not finite");
    if (vertices_[i] == vertices_[(i + 1) % vertices_.size()]) {
      throw GeometryError("ring has repeated consecutive vertex at index " + std::to_string(i));
    }
  }
  recompute();
  if (signed_area_ == 0.0) throw GeometryError("ring has zero area");
}

Ring Ring::unchecked(std::vector<Point2> vertices) {
  Ring r;
  r.vertices_ = std::move(vertices);
  r.recompute();
  return r;
}

void Ring::recompute() {
  signed_area_ = ring_signed_area(vertices_);
  bbox_ = BBox{};
  for (const Point2& p : vertices_) bbox_.expand(p);
}

const Point2& Ring::vertex_wrapped(std::ptrdiff_t i) const {
  const auto n = static_cast<std::ptrdiff_t>(vertices_.size());
  return vertices_[static_cast<std::size_t>(((i % n) + n) % n)];
}

Ring Ring::reversed() const {
  std::vector<Point2> v(vertices_.rbegin(), vertices_.rend());
  return unchecked(std::move(v));
}

Ring Ring::translated(Point2 offset) const {
  std::vector<Point2> v = vertices_;
  for (Point2& p : v) p = p + offset;
  return unchecked(std::move(v));
}

bool Ring::is_simple(double eps) const {
  const std::size_t n = vertices_.size();
  if (n < 3) return false;
  for (std::size_t i = 0; i < n; ++i) {
    const Point2 a0 = vertices_[i];
    const Point2 a1 = vertices_[(i + 1) % n];
    if (distance(a0, a1) <= eps) return false;
    for (std::size_t j = i + 1; j < n; ++j) {
      const Point2 b0 = vertices_[j];
      const Point2 b1 = vertices_[(j + 1) % n];
      const bool next = (j == i + 1);
      const bool prev = (i == 0 && j == n - 1);
      if (next) {
        // Consecutive edges share a1 == b0; they must not fold back onto each other.
        if (point_segment_distance(b1, a0, a1) <= eps || point_segment_distance(a0, b0, b1) <= eps) return false;
        continue;
      }
      if (prev) {
        if (point_segment_distance(b0, a0, a1) <= eps || point_segment_distance(a1, b0, b1) <= eps) return false;
        continue;
      }
      if (segments_properly_intersect({a0, a1}, {b0, b1}, eps)) return false;
      if (point_segment_distance(a0, b0, b1) <= eps || point_segment_distance(a1, b0, b1) <= eps ||
          point_segment_distance(b0, a0, a1) <= eps || point_segment_distance(b1, a0, a1) <= eps) {
        return false;
      }
    }
  }
  return true;
}

// ---------------------------------------------------------------------------
// Polygon / Region

double Polygon::area() const {
  double a = outer.area();
  for (const Ring& h : holes) a -= h.area();
  return a;
}

Region::Region(Ring outer) {
  if (!outer.is_ccw()) outer = outer.reversed();
  polygons_.push_back(Polygon{std::move(outer), {}});
  recompute();
}

Region::Region(Polygon polygon) {
  polygons_.push_back(std::move(polygon));
  recompute();
}

Region::Region(std::vector<Polygon> polygons) : polygons_(std::move(polygons)) { recompute(); }

void Region::recompute() {
  area_ = 0.0;
  bbox_ = BBox{};
  for (const Polygon& p : polygons_) {
    area_ += p.area();
    bbox_.expand(p.outer.bbox());
  }
  area_ = std::max(area_, 0.0);
}

std::vector<Ring> Region::rings() const {
  std::vector<Ring> out;
  for (const Polygon& p : polygons_) {
    out.push_back(p.outer);
    out.insert(out.end(), p.holes.begin(), p.holes.end());
  }
  return out;
}

std::size_t Region::ring_count() const {
  std::size_t n = 0;
  for (const Polygon& p : polygons_) n += 1 + p.holes.size();
  return n;
}

std::size_t Region::vertex_count() const {
  std::size_t n = 0;
  for (const Polygon& p : polygons_) {
    n += p.outer.size();
    for (const Ring& h : p.holes) n += h.size();
  }
  return n;
}

Region Region::largest_component() const {
  if (polygons_.empty()) return {};
  std::size_t best = 0;
  for (std::size_t i = 1; i < polygons_.size(); ++i) {
    if (polygons_[i].area() > polygons_[best].area()) best = i;
  }
  return Region(polygons_[best]);
}

bool point_in_ring_interior(Point2 x, std::span<const Point2> ring) {
  bool inside = false;
  const std::size_t n = ring.size();
  for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
    const Point2 a = ring[j];
    const Point2 b = ring[i];
    if ((a.y > x.y) != (b.y > x.y)) {
      const double xi = a.x + (x.y - a.y) * (b.x - a.x) / (b.y - a.y);
      if (x.x < xi) inside = !inside;
    }
  }
  return inside;
}

Region Region::from_rings(std::vector<Ring> rings) {
  std::vector<Polygon> polys;
  std::vector<const Ring*> holes;
  for (Ring& r : rings) {
    if (r.size() < 3 || r.signed_area() == 0.0) continue;
    if (r.signed_area() > 0.0) polys.push_back(Polygon{std::move(r), {}});
  }
  for (const Ring& r : rings) {
    if (r.size() >= 3 && r.signed_area() < 0.0) holes.push_back(&r);
  }
  for (const Ring* h : holes) {
    // A point just left of the first hole edge lies outside the hole, i.e.
    // inside whichever polygon owns it.
    const Point2 a = (*h)[0];
    const Point2 b = (*h)[1];
    const Point2 d = b - a;
    const double len = norm(d);
    const Point2 probe = (a + b) * 0.5 + Point2{-d.y, d.x} * (1e-7 / std::max(len, 1e-300) * len);
    std::ptrdiff_t owner = -1;
    for (std::size_t i = 0; i < polys.size(); ++i) {
      if (!polys[i].outer.bbox().contains(probe)) continue;
      if (!point_in_ring_interior((*h)[0], polys[i].outer.vertices()) &&
          !point_in_ring_interior(probe, polys[i].outer.vertices())) {
        continue;
      }
      if (owner < 0 || polys[i].outer.area() < polys[static_cast<std::size_t>(owner)].outer.area()) {
        owner = static_cast<std::ptrdiff_t>(i);
      }
    }
    if (owner >= 0) polys[static_cast<std::size_t>(owner)].holes.push_back(*h);
  }
  return Region(std::move(polys));
}

bool region_is_empty(const Region& a) { return a.area() < kEpsArea; }

bool point_in_region(Point2 x, const Region& a, double eps) {
  if (!a.bbox().contains(x, eps)) return false;
  for (const Polygon& poly : a.polygons()) {
    if (!poly.outer.bbox().contains(x, eps)) continue;
    auto on_ring = [&](const Ring& r) {
      for (std::size_t i = 0; i < r.size(); ++i) {
        if (point_segment_distance(x, r[i], r[(i + 1) % r.size()]) <= eps) return true;
      }
      return false;
    };
    if (on_ring(poly.outer)) return true;
    if (!point_in_ring_interior(x, poly.outer.vertices())) continue;
    bool in_hole = false;
    for (const Ring& h : poly.holes) {
      if (on_ring(h)) return true;
      if (point_in_ring_interior(x, h.vertices())) {
        in_hole = true;
        break;
      }
    }
    if (!in_hole) return true;
  }
  return false;
}

double distance_to_boundary(Point2 x, const Region& a) {
  double best = std::numeric_limits<double>::infinity();
  auto scan = [&](const Ring& r) {
    for (std::size_t i = 0; i < r.size(); ++i) {
      best = std::min(best, point_segment_distance(x, r[i], r[(i + 1) % r.size()]));
    }
  };
  for (const Polygon& p : a.polygons()) {
    scan(p.outer);
    for (const Ring& h : p.holes) scan(h);
  }
  return best;
}

Pole pole_of_inaccessibility(const Region& a, double precision) {
  if (a.has_no_rings()) throw GeometryError("pole_of_inaccessibility: empty region");
  const Region comp = a.largest_component();
  const Polygon& poly = comp.polygons()[0];
  auto signed_dist = [&](Point2 p) {
    bool inside = point_in_ring_interior(p, poly.outer.vertices());
    for (const Ring& h : poly.holes) {
      if (inside && point_in_ring_interior(p, h.vertices())) inside = false;
    }
    const double d = distance_to_boundary(p, comp);
    return inside ? d : -d;
  };
  struct Cell {
    Point2 c;
    double h;
    double d;
    double max;
  };
  auto make = [&](Point2 c, double h) {
    const double d = signed_dist(c);
    return Cell{c, h, d, d + h * std::numbers::sqrt2};
  };
  auto cmp = [](const Cell& x, const Cell& y) { return x.max < y.max; };
  std::priority_queue<Cell, std::vector<Cell>, decltype(cmp)> queue(cmp);

  const BBox& box = poly.outer.bbox();
  const double size = std::min(box.width(), box.height());
  if (!(size > 0.0)) throw GeometryError("pole_of_inaccessibility: degenerate region");
  precision = std::max(precision, 1e-12 * std::max(box.width(), box.height()));
  const double h = size / 2.0;
  for (double x = box.min_x; x < box.max_x; x += size) {
    for (double y = box.min_y; y < box.max_y; y += size) queue.push(make({x + h, y + h}, h));
  }
  // Seed with the area centroid of the outer ring and the bbox centre.
  Point2 centroid{0, 0};
  double twice = 0.0;
  const Ring& o = poly.outer;
  for (std::size_t i = 0; i < o.size(); ++i) {
    const Point2 p = o[i];
    const Point2 q = o[(i + 1) % o.size()];
    const double f = cross(p, q);
    centroid = centroid + (p + q) * f;
    twice += f;
  }
  Cell best = make({box.min_x + box.width() / 2, box.min_y + box.height() / 2}, 0.0);
  if (twice != 0.0) {
    const Cell c = make(centroid * (1.0 / (3.0 * twice)), 0.0);
    if (c.d > best.d) best = c;
  }
  while (!queue.empty()) {
    const Cell cell = queue.top();
    queue.pop();
    if (cell.d > best.d) best = cell;
    if (cell.max - best.d <= precision) continue;
    const double q = cell.h / 2.0;
    queue.push(make({cell.c.x - q, cell.c.y - q}, q));
    queue.push(make({cell.c.x + q, cell.c.y - q}, q));
    queue.push(make({cell.c.x - q, cell.c.y + q}, q));
    queue.push(make({cell.c.x + q, cell.c.y + q}, q));
  }
  if (!(best.d > 0.0)) throw GeometryError("pole_of_inaccessibility: no interior point found");
  return {best.c, best.d};
}

bool segments_properly_intersect(const Segment& a, const Segment& b, double eps) {
  auto interior_touch = [eps](Point2 p, const Segment& s) {
    return point_segment_distance(p, s.a, s.b) <= eps && distance(p, s.a) > eps && distance(p, s.b) > eps;
  };
  if (interior_touch(a.a, b) || interior_touch(a.b, b) || interior_touch(b.a, a) || interior_touch(b.b, a)) {
    return true;
  }
  const double la = distance(a.a, a.b);
  const double lb = distance(b.a, b.b);
  if (la <= eps || lb <= eps) return false;
  const double d1 = orient(a.a, a.b, b.a) / la;
  const double d2 = orient(a.a, a.b, b.b) / la;
  const double d3 = orient(b.a, b.b, a.a) / lb;
  const double d4 = orient(b.a, b.b, a.b) / lb;
  const bool straddle_a = (d1 > eps && d2 < -eps) || (d1 < -eps && d2 > eps);
  const bool straddle_b = (d3 > eps && d4 < -eps) || (d3 < -eps && d4 > eps);
  return straddle_a && straddle_b;
}

std::vector<Point2> simplify_chain(std::vector<Point2> pts, double eps) {
  bool changed = true;
  while (changed && pts.size() >= 3) {
    changed = false;
    std::vector<Point2> out;
    out.reserve(pts.size());
    for (const Point2& p : pts) {
      if (!out.empty() && distance(out.back(), p) <= eps) {
        changed = true;
        continue;
      }
      out.push_back(p);
    }
    while (out.size() >= 2 && distance(out.front(), out.back()) <= eps) {
      out.pop_back();
      changed = true;
    }
    if (out.size() < 3) return out;
    std::vector<Point2> kept;
    kept.reserve(out.size());
    const std::size_t n = out.size();
    std::vector<char> drop(n, 0);
    for (std::size_t i = 0; i < n; ++i) {
      const Point2 prev = out[(i + n - 1) % n];
      const Point2 cur = out[i];
      const Point2 next = out[(i + 1) % n];
      const double base = distance(prev, next);
      if (base <= eps || std::abs(orient(prev, cur, next)) / base <= eps) {
        drop[i] = 1;
        changed = true;
        break;  // one at a time keeps neighbouring decisions consistent
      }
    }
    for (std::size_t i = 0; i < n; ++i) {
      if (!drop[i]) kept.push_back(out[i]);
    }
    pts = std::move(kept);
  }
  return pts;
}

Ring convex_hull(std::span<const Point2> points) {
  std::vector<Point2> p(points.begin(), points.end());
  std::sort(p.begin(), p.end());
  p.erase(std::unique(p.begin(), p.end()), p.end());
  if (p.size() < 3) throw GeometryError("convex hull needs at least 3 distinct points");
  std::vector<Point2> h(2 * p.size());
  std::size_t k = 0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    while (k >= 2 && orient(h[k - 2], h[k - 1], p[i]) <= 0.0) --k;
    h[k++] = p[i];
  }
  for (std::size_t i = p.size() - 1, t = k + 1; i > 0; --i) {
    while (k >= t && orient(h[k - 2], h[k - 1], p[i - 1]) <= 0.0) --k;
    h[k++] = p[i - 1];
  }
  h.resize(k - 1);
  if (h.size() < 3 || ring_signed_area(h) <= 0.0) throw GeometryError("convex hull of collinear points");
  return Ring(std::move(h));
}

Ring regular_polygon(Point2 center, double radius, int sides) {
  if (sides < 3) throw GeometryError("regular polygon needs at least 3 sides");
  if (!(radius > 0.0)) throw GeometryError("regular polygon radius must be positive");
  std::vector<Point2> v;
  v.reserve(static_cast<std::size_t>(sides));
  for (int j = 0; j < sides; ++j) {
    const double ang = 2.0 * std::numbers::pi * j / sides;
    v.push_back(center + Point2{std::cos(ang), std::sin(ang)} * radius);
  }
  return Ring::unchecked(std::move(v));
}

// ---------------------------------------------------------------------------
// Overlay. Both operands' boundaries are cut at their mutual intersections;
// each maximal run of boundary between cuts is classified once against the
// other operand. The boundary of a ∩ b is the runs of a inside b, the runs of
// b inside a, and shared runs of equal orientation (taken from a only).

namespace {

struct FlatRings {
  std::vector<Point2> pts;
  std::vector<std::uint32_t> ring_begin;  // size rings+1
  std::vector<std::uint32_t> next;        // next vertex index within the ring

  explicit FlatRings(const Region& r) {
    ring_begin.push_back(0);
    for (const Polygon& poly : r.polygons()) {
      add(poly.outer);
      for (const Ring& h : poly.holes) add(h);
    }
  }
  void add(const Ring& ring) {
    const auto base = static_cast<std::uint32_t>(pts.size());
    const auto n = static_cast<std::uint32_t>(ring.size());
    for (std::uint32_t i = 0; i < n; ++i) {
      pts.push_back(ring[i]);
      next.push_back(i + 1 < n ? base + i + 1 : base);
    }
    ring_begin.push_back(base + n);
  }
  std::size_t size() const { return pts.size(); }
};

struct Cut {
  std::uint32_t edge;
  double t;
  Point2 p;
};

struct EdgeBox {
  double min_x, max_x, min_y, max_y;
};

EdgeBox edge_box(Point2 a, Point2 b) {
  return {std::min(a.x, b.x), std::max(a.x, b.x), std::min(a.y, b.y), std::max(a.y, b.y)};
}

enum class Side { kInside, kOutside, kSameBoundary, kOppositeBoundary };

// Classifies the piece p->q (no cut inside it) against the other operand.
Side classify_piece(Point2 p, Point2 q, const FlatRings& other, double eps) {
  const Point2 m = (p + q) * 0.5;
  const Point2 dir = q - p;
  bool inside = false;
  for (std::size_t i = 0; i < other.size(); ++i) {
    const Point2 a = other.pts[i];
    const Point2 b = other.pts[other.next[i]];
    if (m.x >= std::min(a.x, b.x) - eps && m.x <= std::max(a.x, b.x) + eps &&
        m.y >= std::min(a.y, b.y) - eps && m.y <= std::max(a.y, b.y) + eps &&
        point_segment_distance(m, a, b) <= eps) {
      const Point2 e = b - a;
      const double len = norm(e);
      if (len > 0.0 && std::abs(cross(e, p - a)) / len <= eps && std::abs(cross(e, q - a)) / len <= eps) {
        return dot(dir, e) > 0.0 ? Side::kSameBoundary : Side::kOppositeBoundary;
      }
    }
    if ((a.y > m.y) != (b.y > m.y)) {
      const double xi = a.x + (m.y - a.y) * (b.x - a.x) / (b.y - a.y);
      if (m.x < xi) inside = !inside;
    }
  }
  return inside ? Side::kInside : Side::kOutside;
}

class Snapper {
 public:
  explicit Snapper(double eps) : eps_(std::max(eps, 1e-300)), cell_(2.0 * eps_) {}

  Point2 snap(Point2 p) {
    const std::int64_t cx = static_cast<std::int64_t>(std::floor(p.x / cell_));
    const std::int64_t cy = static_cast<std::int64_t>(std::floor(p.y / cell_));
    for (std::int64_t dx = -1; dx <= 1; ++dx) {
      for (std::int64_t dy = -1; dy <= 1; ++dy) {
        auto it = cells_.find(key(cx + dx, cy + dy));
        if (it == cells_.end()) continue;
        for (const Point2& c : it->second) {
          if (distance(c, p) <= eps_) return c;
        }
      }
    }
    cells_[key(cx, cy)].push_back(p);
    return p;
  }

 private:
  static std::uint64_t key(std::int64_t x, std::int64_t y) {
    return static_cast<std::uint64_t>(x) * 0x9E3779B97F4A7C15ull ^ static_cast<std::uint64_t>(y);
  }
  double eps_;
  double cell_;
  std::unordered_map<std::uint64_t, std::vector<Point2>> cells_;
};

struct DirectedEdge {
  Point2 p;
  Point2 q;
};

class Overlay {
 public:
  Overlay(const Region& a, const Region& b, double eps) : a_(a), b_(b), eps_(eps) {
    touched_a_.assign(a_.size(), 0);
    touched_b_.assign(b_.size(), 0);
    find_cuts();
  }

  // Calls emit(p, q) for every boundary piece of a ∩ b.
  template <typename Emit>
  void emit_result(Emit&& emit) {
    emit_pieces(a_, cuts_a_, touched_a_, b_, /*from_a=*/true, emit);
    emit_pieces(b_, cuts_b_, touched_b_, a_, /*from_a=*/false, emit);
  }

 private:
  void find_cuts() {
    const std::size_t na = a_.size();
    const std::size_t nb = b_.size();
    std::vector<EdgeBox> box_a(na), box_b(nb);
    for (std::size_t i = 0; i < na; ++i) box_a[i] = edge_box(a_.pts[i], a_.pts[a_.next[i]]);
    for (std::size_t j = 0; j < nb; ++j) box_b[j] = edge_box(b_.pts[j], b_.pts[b_.next[j]]);
    std::vector<std::uint32_t> order_a(na), order_b(nb);
    for (std::uint32_t i = 0; i < na; ++i) order_a[i] = i;
    for (std::uint32_t j = 0; j < nb; ++j) order_b[j] = j;
    std::sort(order_a.begin(), order_a.end(), [&](auto x, auto y) { return box_a[x].min_x < box_a[y].min_x; });
    std::sort(order_b.begin(), order_b.end(), [&](auto x, auto y) { return box_b[x].min_x < box_b[y].min_x; });

    std::vector<std::uint32_t> active_a, active_b;
    std::size_t ia = 0, ib = 0;
    auto prune = [&](std::vector<std::uint32_t>& active, const std::vector<EdgeBox>& boxes, double x) {
      std::size_t w = 0;
      for (std::uint32_t e : active) {
        if (boxes[e].max_x >= x - eps_) active[w++] = e;
      }
      active.resize(w);
    };
    while (ia < na || ib < nb) {
      const bool take_a = ib >= nb || (ia < na && box_a[order_a[ia]].min_x <= box_b[order_b[ib]].min_x);
      if (take_a) {
        const std::uint32_t e = order_a[ia++];
        prune(active_b, box_b, box_a[e].min_x);
        for (std::uint32_t f : active_b) {
          if (box_a[e].min_y <= box_b[f].max_y + eps_ && box_b[f].min_y <= box_a[e].max_y + eps_) intersect(e, f);
        }
        active_a.push_back(e);
      } else {
        const std::uint32_t f = order_b[ib++];
        prune(active_a, box_a, box_b[f].min_x);
        for (std::uint32_t e : active_a) {
          if (box_a[e].min_y <= box_b[f].max_y + eps_ && box_b[f].min_y <= box_a[e].max_y + eps_) intersect(e, f);
        }
        active_b.push_back(f);
      }
    }
  }

  void intersect(std::uint32_t ea, std::uint32_t eb) {
    const std::uint32_t a0i = ea, a1i = a_.next[ea];
    const std::uint32_t b0i = eb, b1i = b_.next[eb];
    const Point2 a0 = a_.pts[a0i], a1 = a_.pts[a1i];
    const Point2 b0 = b_.pts[b0i], b1 = b_.pts[b1i];
    const Point2 da = a1 - a0, db = b1 - b0;
    const double la2 = dot(da, da), lb2 = dot(db, db);
    if (la2 == 0.0 || lb2 == 0.0) return;
    bool touched = false;

    // b's endpoints against segment a.
    for (int k = 0; k < 2; ++k) {
      const Point2 q = k == 0 ? b0 : b1;
      const std::uint32_t qi = k == 0 ? b0i : b1i;
      if (point_segment_distance(q, a0, a1) > eps_) continue;
      touched = true;
      touched_b_[qi] = 1;
      if (distance(q, a0) <= eps_) {
        touched_a_[a0i] = 1;
      } else if (distance(q, a1) <= eps_) {
        touched_a_[a1i] = 1;
      } else {
        cuts_a_.push_back({ea, dot(q - a0, da) / la2, q});
      }
    }
    // a's endpoints against segment b.
    for (int k = 0; k < 2; ++k) {
      const Point2 p = k == 0 ? a0 : a1;
      const std::uint32_t pi = k == 0 ? a0i : a1i;
      if (point_segment_distance(p, b0, b1) > eps_) continue;
      touched = true;
      touched_a_[pi] = 1;
      if (distance(p, b0) <= eps_) {
        touched_b_[b0i] = 1;
      } else if (distance(p, b1) <= eps_) {
        touched_b_[b1i] = 1;
      } else {
        cuts_b_.push_back({eb, dot(p - b0, db) / lb2, p});
      }
    }
    if (touched) return;

    const double la = std::sqrt(la2), lb = std::sqrt(lb2);
    const double s1 = cross(da, b0 - a0) / la;
    const double s2 = cross(da, b1 - a0) / la;
    const double s3 = cross(db, a0 - b0) / lb;
    const double s4 = cross(db, a1 - b0) / lb;
    const bool straddle_a = (s1 > eps_ && s2 < -eps_) || (s1 < -eps_ && s2 > eps_);
    const bool straddle_b = (s3 > eps_ && s4 < -eps_) || (s3 < -eps_ && s4 > eps_);
    if (!straddle_a || !straddle_b) return;
    const double t = s3 / (s3 - s4);
    const Point2 x = a0 + da * t;
    cuts_a_.push_back({ea, t, x});
    cuts_b_.push_back({eb, dot(x - b0, db) / lb2, x});
  }

  template <typename Emit>
  void emit_pieces(const FlatRings& self, std::vector<Cut>& cuts, const std::vector<char>& touched,
                   const FlatRings& other, bool from_a, Emit& emit) {
    std::sort(cuts.begin(), cuts.end(), [](const Cut& x, const Cut& y) {
      return x.edge != y.edge ? x.edge < y.edge : x.t < y.t;
    });
    struct Piece {
      Point2 p, q;
      bool breaks_before;
    };
    std::vector<Piece> pieces;
    std::size_t c = 0;
    for (std::size_t r = 0; r + 1 < self.ring_begin.size(); ++r) {
      pieces.clear();
      const std::uint32_t begin = self.ring_begin[r], end = self.ring_begin[r + 1];
      while (c < cuts.size() && cuts[c].edge < begin) ++c;
      bool any_break = false;
      bool carry = false;
      for (std::uint32_t e = begin; e < end; ++e) {
        Point2 start = self.pts[e];
        bool brk = touched[e] != 0 || carry;
        carry = false;
        while (c < cuts.size() && cuts[c].edge == e) {
          const Point2 x = cuts[c].p;
          ++c;
          if (distance(x, start) <= eps_) {
            brk = true;
            continue;
          }
          pieces.push_back({start, x, brk});
          any_break = any_break || brk;
          start = x;
          brk = true;
        }
        const Point2 end_pt = self.pts[self.next[e]];
        if (distance(start, end_pt) > eps_ || pieces.empty()) {
          pieces.push_back({start, end_pt, brk});
          any_break = any_break || brk;
        } else if (brk) {
          // Cut landed within eps of the edge end: the break moves to the next edge start.
          carry = true;
        }
      }
      if (pieces.empty()) continue;
      if (carry) {
        pieces.front().breaks_before = true;
        any_break = true;
      }
      // Rotate so the sequence begins with a break.
      std::size_t first = 0;
      if (any_break) {
        while (first < pieces.size() && !pieces[first].breaks_before) ++first;
        if (first == pieces.size()) first = 0;
      }
      std::size_t i = 0;
      const std::size_t n = pieces.size();
      while (i < n) {
        std::size_t j = i + 1;
        while (j < n && !pieces[(first + j) % n].breaks_before) ++j;
        // Run [i, j): classify by its longest piece.
        std::size_t longest = i;
        double best = -1.0;
        for (std::size_t k = i; k < j; ++k) {
          const Piece& pc = pieces[(first + k) % n];
          const double len = distance_squared(pc.p, pc.q);
          if (len > best) {
            best = len;
            longest = k;
          }
        }
        const Piece& probe = pieces[(first + longest) % n];
        const Side side = classify_piece(probe.p, probe.q, other, eps_);
        const bool keep = side == Side::kInside || (from_a && side == Side::kSameBoundary);
        if (keep) {
          for (std::size_t k = i; k < j; ++k) {
            const Piece& pc = pieces[(first + k) % n];
            emit(pc.p, pc.q);
          }
        }
        i = j;
      }
    }
  }

  FlatRings a_;
  FlatRings b_;
  double eps_;
  std::vector<Cut> cuts_a_, cuts_b_;
  std::vector<char> touched_a_, touched_b_;
};

// Links directed boundary edges into closed rings, turning as far left as
// possible at vertices with several outgoing edges so that components
// touching at a point come out as separate rings.
std::vector<Ring> link_edges(std::vector<DirectedEdge> edges, double eps) {
  // Cancel exactly opposite pairs; they bound zero area.
  {
    std::vector<std::size_t> idx(edges.size());
    for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
    auto key = [&](std::size_t i) {
      const auto& e = edges[i];
      return e.p < e.q ? std::pair{e.p, e.q} : std::pair{e.q, e.p};
    };
    std::sort(idx.begin(), idx.end(), [&](std::size_t x, std::size_t y) {
      const auto kx = key(x), ky = key(y);
      return kx != ky ? kx < ky : x < y;
    });
    std::vector<char> dead(edges.size(), 0);
    for (std::size_t s = 0; s < idx.size();) {
      std::size_t t = s;
      while (t < idx.size() && key(idx[t]) == key(idx[s])) ++t;
      std::vector<std::size_t> fwd, bwd;
      for (std::size_t u = s; u < t; ++u) {
        const auto& e = edges[idx[u]];
        (e.p < e.q ? fwd : bwd).push_back(idx[u]);
      }
      const std::size_t m = std::min(fwd.size(), bwd.size());
      for (std::size_t u = 0; u < m; ++u) dead[fwd[u]] = dead[bwd[u]] = 1;
      s = t;
    }
    std::vector<DirectedEdge> live;
    for (std::size_t i = 0; i < edges.size(); ++i) {
      if (!dead[i]) live.push_back(edges[i]);
    }
    edges = std::move(live);
  }

  std::vector<std::size_t> by_start(edges.size());
  for (std::size_t i = 0; i < by_start.size(); ++i) by_start[i] = i;
  std::sort(by_start.begin(), by_start.end(), [&](std::size_t x, std::size_t y) {
    return edges[x].p != edges[y].p ? edges[x].p < edges[y].p : x < y;
  });
  std::vector<char> used(edges.size(), 0);

  auto outgoing = [&](Point2 v) {
    auto lo = std::lower_bound(by_start.begin(), by_start.end(), v,
                               [&](std::size_t e, const Point2& key) { return edges[e].p < key; });
    auto hi = lo;
    while (hi != by_start.end() && edges[*hi].p == v) ++hi;
    return std::pair{lo, hi};
  };

  std::vector<Ring> rings;
  for (std::size_t s = 0; s < edges.size(); ++s) {
    if (used[s]) continue;
    std::vector<std::size_t> chain{s};
    used[s] = 1;
    bool closed = false;
    std::size_t cur = s;
    for (std::size_t guard = 0; guard <= edges.size(); ++guard) {
      const Point2 v = edges[cur].q;
      const Point2 back = edges[cur].p - v;
      auto [lo, hi] = outgoing(v);
      std::ptrdiff_t pick = -1;
      double best = 10.0;
      for (auto it = lo; it != hi; ++it) {
        const std::size_t e = *it;
        if (used[e] && e != s) continue;
        const Point2 d = edges[e].q - v;
        double ang = std::atan2(cross(d, back), dot(d, back));
        if (ang <= 0.0) ang += 2.0 * std::numbers::pi;
        if (ang < best) {
          best = ang;
          pick = static_cast<std::ptrdiff_t>(e);
        }
      }
      if (pick < 0) break;
      if (static_cast<std::size_t>(pick) == s) {
        closed = true;
        break;
      }
      cur = static_cast<std::size_t>(pick);
      used[cur] = 1;
      chain.push_back(cur);
    }
    if (!closed) continue;
    std::vector<Point2> pts;
    pts.reserve(chain.size());
    for (std::size_t e : chain) pts.push_back(edges[e].p);
    pts = simplify_chain(std::move(pts), eps);
    if (pts.size() < 3) continue;
    Ring ring = Ring::unchecked(std::move(pts));
    if (ring.area() <= kEpsArea * 1e-3) continue;
    rings.push_back(std::move(ring));
  }
  return rings;
}

}  // namespace

double intersection_area(const Region& a, const Region& b, double eps) {
  if (a.has_no_rings() || b.has_no_rings() || !a.bbox().overlaps(b.bbox(), eps)) return 0.0;
  Overlay overlay(a, b, eps);
  // Shift to a local origin to keep the cross products well conditioned.
  const Point2 o{a.bbox().min_x, a.bbox().min_y};
  double twice = 0.0;
  overlay.emit_result([&](Point2 p, Point2 q) { twice += cross(p - o, q - o); });
  return std::max(0.0, 0.5 * twice);
}

bool regions_overlap(const Region& a, const Region& b, double eps) {
  return intersection_area(a, b, eps) >= kEpsArea;
}

Region region_intersection(const Region& a, const Region& b, double eps) {
  if (a.has_no_rings() || b.has_no_rings() || !a.bbox().overlaps(b.bbox(), eps)) return {};
  Overlay overlay(a, b, eps);
  Snapper snapper(eps);
  for (const Region* r : {&a, &b}) {
    for (const Polygon& poly : r->polygons()) {
      for (const Point2& p : poly.outer.vertices()) snapper.snap(p);
      for (const Ring& h : poly.holes) {
        for (const Point2& p : h.vertices()) snapper.snap(p);
      }
    }
  }
  std::vector<DirectedEdge> edges;
  overlay.emit_result([&](Point2 p, Point2 q) {
    const Point2 sp = snapper.snap(p);
    const Point2 sq = snapper.snap(q);
    if (sp != sq) edges.push_back({sp, sq});
  });
  return Region::from_rings(link_edges(std::move(edges), eps));
}

}  // namespace losplan
