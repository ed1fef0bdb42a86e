#pragma once

#include <algorithm>
#include <cmath>
#include <compare>
#include <limits>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace losplan {

/// Coincidence tolerance for a layout of unit diameter. Callers working on a
/// concrete layout scale it by the layout diameter (see Realization::eps()).
inline constexpr double kEpsGeomRelative = 1e-9;
/// Regions with less area than this (m^2) are treated as empty.
inline constexpr double kEpsArea = 1e-8;

class GeometryError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct Point2 {
  double x = 0.0;
  double y = 0.0;

  friend constexpr Point2 operator+(Point2 a, Point2 b) { return {a.x + b.x, a.y + b.y}; }
  friend constexpr Point2 operator-(Point2 a, Point2 b) { return {a.x - b.x, a.y - b.y}; }
  friend constexpr Point2 operator*(Point2 a, double s) { return {a.x * s, a.y * s}; }
  friend constexpr Point2 operator*(double s, Point2 a) { return {a.x * s, a.y * s}; }
  friend constexpr bool operator==(const Point2&, const Point2&) = default;
  friend constexpr auto operator<=>(const Point2&, const Point2&) = default;
};

constexpr double dot(Point2 a, Point2 b) { return a.x * b.x + a.y * b.y; }
constexpr double cross(Point2 a, Point2 b) { return a.x * b.y - a.y * b.x; }
inline double norm(Point2 a) { return std::hypot(a.x, a.y); }
inline double distance(Point2 a, Point2 b) { return norm(a - b); }
constexpr double distance_squared(Point2 a, Point2 b) { return dot(a - b, a - b); }
/// Twice the signed area of triangle abc; positive when abc turns left.
constexpr double orient(Point2 a, Point2 b, Point2 c) { return cross(b - a, c - a); }
inline bool is_finite(Point2 p) { return std::isfinite(p.x) && std::isfinite(p.y); }

/// Distance from p to the closed segment ab.
double point_segment_distance(Point2 p, Point2 a, Point2 b);

/// Whether direction d, leaving vertex p, points into the region on the left
/// of the chain prev -> p -> next. closed accepts the two bounding rays (up to
/// an angular tolerance tol); otherwise they are excluded.
bool direction_in_wedge(Point2 prev, Point2 p, Point2 next, Point2 d, double tol, bool closed);

struct Segment {
  Point2 a;
  Point2 b;
};

/// Minimum distance between two closed segments (0 when they cross).
double segment_distance(const Segment& s, const Segment& t);

struct BBox {
  double min_x = std::numeric_limits<double>::infinity();
  double min_y = std::numeric_limits<double>::infinity();
  double max_x = -std::numeric_limits<double>::infinity();
  double max_y = -std::numeric_limits<double>::infinity();

  bool empty() const { return min_x > max_x; }
  void expand(Point2 p) {
    min_x = std::min(min_x, p.x);
    min_y = std::min(min_y, p.y);
    max_x = std::max(max_x, p.x);
    max_y = std::max(max_y, p.y);
  }
  void expand(const BBox& b) {
    if (b.empty()) return;
    expand(Point2{b.min_x, b.min_y});
    expand(Point2{b.max_x, b.max_y});
  }
  bool overlaps(const BBox& o, double pad = 0.0) const {
    return !empty() && !o.empty() && min_x <= o.max_x + pad && o.min_x <= max_x + pad &&
           min_y <= o.max_y + pad && o.min_y <= max_y + pad;
  }
  bool contains(Point2 p, double pad = 0.0) const {
    return p.x >= min_x - pad && p.x <= max_x + pad && p.y >= min_y - pad && p.y <= max_y + pad;
  }
  double width() const { return max_x - min_x; }
  double height() const { return max_y - min_y; }
};

/// Closed polygonal chain. Outer boundaries are CCW, holes CW.
class Ring {
 public:
  Ring() = default;
  /// Rejects fewer than three vertices, non-finite coordinates and zero area.
  explicit Ring(std::vector<Point2> vertices);

  /// Skips validation; used for rings produced by the kernel itself.
  static Ring unchecked(std::vector<Point2> vertices);

  std::span<const Point2> vertices() const { return vertices_; }
  std::size_t size() const { return vertices_.size(); }
  const Point2& operator[](std::size_t i) const { return vertices_[i]; }
  const Point2& vertex_wrapped(std::ptrdiff_t i) const;

  double signed_area() const { return signed_area_; }
  double area() const { return std::abs(signed_area_); }
  bool is_ccw() const { return signed_area_ > 0.0; }
  const BBox& bbox() const { return bbox_; }

  Ring reversed() const;
  Ring translated(Point2 offset) const;
  Ring with_orientation(bool ccw) const { return is_ccw() == ccw ? *this : reversed(); }

  /// True when no two non-adjacent edges touch and no consecutive vertices
  /// are closer than eps.
  bool is_simple(double eps) const;

  friend bool operator==(const Ring& a, const Ring& b) { return a.vertices_ == b.vertices_; }

 private:
  void recompute();

  std::vector<Point2> vertices_;
  double signed_area_ = 0.0;
  BBox bbox_;
};

/// Shoelace signed area; positive iff CCW.
double ring_signed_area(std::span<const Point2> vertices);

/// One connected piece of a Region: a CCW outer ring and CW holes.
struct Polygon {
  Ring outer;
  std::vector<Ring> holes;

  double area() const;
};

/// A multi-polygon with holes, closed as a point set. Immutable once built.
class Region {
 public:
  Region() = default;
  explicit Region(Ring outer);
  explicit Region(Polygon polygon);
  explicit Region(std::vector<Polygon> polygons);

  /// Assembles polygons from a flat ring list: positive rings are outers,
  /// negative rings are attached as holes to the smallest outer containing them.
  static Region from_rings(std::vector<Ring> rings);

  std::span<const Polygon> polygons() const { return polygons_; }
  std::vector<Ring> rings() const;
  std::size_t ring_count() const;
  std::size_t vertex_count() const;
  double area() const { return area_; }
  const BBox& bbox() const { return bbox_; }
  bool has_no_rings() const { return polygons_.empty(); }

  /// Largest-area connected component, as its own Region.
  Region largest_component() const;

 private:
  void recompute();

  std::vector<Polygon> polygons_;
  double area_ = 0.0;
  BBox bbox_;
};

/// True iff the interiors of a and b cross, or an endpoint of one lies
/// strictly inside the other (further than eps from its endpoints). Shared
/// endpoints and collinear touching at a vertex do not count.
bool segments_properly_intersect(const Segment& a, const Segment& b, double eps = kEpsGeomRelative);

/// Exact set intersection up to eps snapping.
Region region_intersection(const Region& a, const Region& b, double eps = kEpsGeomRelative);

/// area(a ∩ b) without assembling the result rings.
double intersection_area(const Region& a, const Region& b, double eps = kEpsGeomRelative);

/// Whether area(a ∩ b) reaches kEpsArea.
bool regions_overlap(const Region& a, const Region& b, double eps = kEpsGeomRelative);

bool region_is_empty(const Region& a);

/// Closed-set membership: boundary points (within eps) count as inside.
bool point_in_region(Point2 x, const Region& a, double eps = kEpsGeomRelative);

/// Crossing-number parity against a single ring; boundary handling is
/// left to the caller.
bool point_in_ring_interior(Point2 x, std::span<const Point2> ring);

/// Distance from x to the nearest edge of any ring of a.
double distance_to_boundary(Point2 x, const Region& a);

struct Pole {
  Point2 point;
  double clearance = 0.0;
};

/// Interior point of the largest component farthest from its boundary, to
/// within precision (cell refinement). Throws GeometryError on empty input.
Pole pole_of_inaccessibility(const Region& a, double precision);

/// CCW convex hull (Andrew's monotone chain). Collinear input is rejected.
Ring convex_hull(std::span<const Point2> points);

/// Regular k-gon inscribed in the circle of the given radius, first vertex at
/// angle 0, CCW.
Ring regular_polygon(Point2 center, double radius, int sides);

/// Drops repeated and collinear vertices (within eps); may return fewer than
/// three points when the chain degenerates.
std::vector<Point2> simplify_chain(std::vector<Point2> pts, double eps);

}  // namespace losplan
