#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <numbers>
#include <random>

#include "losplan/geometry.hpp"
#include "test_support.hpp"

using namespace losplan;
using losplan::testing::random_star_polygon;
using losplan::testing::winding_number;

namespace {

Ring square(double x0, double y0, double side) {
  return Ring({{x0, y0}, {x0 + side, y0}, {x0 + side, y0 + side}, {x0, y0 + side}});
}

Ring rect(double x0, double y0, double x1, double y1) { return Ring({{x0, y0}, {x1, y0}, {x1, y1}, {x0, y1}}); }

// Grid estimate of area(a ∩ b) using only winding numbers.
double sampled_intersection_area(const std::vector<Ring>& a, const std::vector<Ring>& b, BBox box, int n) {
  const double dx = box.width() / n, dy = box.height() / n;
  int hits = 0;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const Point2 p{box.min_x + (i + 0.5) * dx, box.min_y + (j + 0.5) * dy};
      int wa = 0, wb = 0;
      for (const Ring& r : a) wa += winding_number(p, r.vertices());
      for (const Ring& r : b) wb += winding_number(p, r.vertices());
      if (wa != 0 && wb != 0) ++hits;
    }
  }
  return hits * dx * dy;
}

}  // namespace

TEST_CASE("ring_signed_area follows the shoelace sign convention") {
  CHECK(ring_signed_area(square(0, 0, 1).vertices()) == doctest::Approx(1.0));
  CHECK(square(0, 0, 1).reversed().signed_area() == doctest::Approx(-1.0));
  CHECK(Ring({{0, 0}, {2, 0}, {0, 2}}).signed_area() == doctest::Approx(2.0));
  CHECK_THROWS_AS(Ring({{0, 0}, {1, 0}}), GeometryError);
  CHECK_THROWS_AS(Ring({{0, 0}, {1, 0}, {2, 0}}), GeometryError);
}

TEST_CASE("segments_properly_intersect") {
  CHECK(segments_properly_intersect({{0, 0}, {1, 1}}, {{1, 0}, {0, 1}}));
  CHECK_FALSE(segments_properly_intersect({{0, 0}, {1, 0}}, {{0, 1}, {1, 1}}));
  CHECK_FALSE(segments_properly_intersect({{0, 0}, {1, 0}}, {{1, 0}, {2, 1}}));
  // T-junction: an endpoint strictly inside the other segment counts.
  CHECK(segments_properly_intersect({{0, 0}, {2, 0}}, {{1, 0}, {1, 1}}));
  // Collinear overlap.
  CHECK(segments_properly_intersect({{0, 0}, {2, 0}}, {{1, 0}, {3, 0}}));
  // Collinear, touching end to end.
  CHECK_FALSE(segments_properly_intersect({{0, 0}, {1, 0}}, {{1, 0}, {3, 0}}));
}

TEST_CASE("region_intersection of axis-aligned squares") {
  const Region a(square(0, 0, 1));
  const Region b(square(0.5, 0.5, 1));
  const Region ab = region_intersection(a, b);
  CHECK(ab.area() == doctest::Approx(0.25).epsilon(1e-12));
  CHECK(ab.polygons().size() == 1);
  CHECK(intersection_area(a, b) == doctest::Approx(0.25));

  const Region far(square(3, 3, 1));
  CHECK(region_intersection(a, far).area() == 0.0);
  CHECK(region_is_empty(region_intersection(a, far)));

  CHECK(region_intersection(a, a).area() == doctest::Approx(1.0));
  CHECK(intersection_area(a, a) == doctest::Approx(1.0));
}

TEST_CASE("region_intersection handles holes, shared edges and pinched components") {
  Polygon frame{square(0, 0, 4), {square(1, 1, 2).reversed()}};
  const Region with_hole(frame);
  CHECK(with_hole.area() == doctest::Approx(12.0));

  // A bar crossing the hole is cut into two pieces.
  const Region bar(rect(-1, 1.5, 5, 2.5));
  const Region cut = region_intersection(with_hole, bar);
  CHECK(cut.area() == doctest::Approx(2.0));
  CHECK(cut.polygons().size() == 2);

  // A square fully containing the hole keeps it as a hole.
  const Region big(rect(0.5, 0.5, 3.5, 3.5));
  const Region ring_region = region_intersection(with_hole, big);
  CHECK(ring_region.area() == doctest::Approx(9.0 - 4.0));
  REQUIRE(ring_region.polygons().size() == 1);
  CHECK(ring_region.polygons()[0].holes.size() == 1);

  // Shared edge, same orientation: the common square survives intact.
  const Region left(rect(0, 0, 1, 1));
  const Region wide(rect(0, 0, 2, 1));
  CHECK(region_intersection(left, wide).area() == doctest::Approx(1.0));
  // Touching along an edge only: empty.
  const Region right(rect(1, 0, 2, 1));
  CHECK(region_is_empty(region_intersection(left, right)));

  // Two squares meeting at a corner, clipped by a window, stay two components.
  const Region pair(std::vector<Polygon>{Polygon{square(0, 0, 1), {}}, Polygon{square(1, 1, 1), {}}});
  const Region clipped = region_intersection(pair, Region(rect(0.5, 0.5, 1.5, 1.5)));
  CHECK(clipped.area() == doctest::Approx(0.5));
  CHECK(clipped.polygons().size() == 2);
}

TEST_CASE("thin slivers collapse to empty") {
  const Region a(rect(0, 0, 1, 1));
  const Region sliver(rect(1.0 - 1e-12, 0, 2, 1));
  CHECK(region_is_empty(region_intersection(a, sliver)));
  CHECK(region_is_empty(Region(rect(0, 0, 1e-6, 1e-6))));
  CHECK_FALSE(region_is_empty(Region(square(0, 0, 0.5))));
}

TEST_CASE("point_in_region uses closed-set semantics") {
  const Region a(square(0, 0, 1));
  CHECK(point_in_region({0.5, 0.5}, a));
  CHECK(point_in_region({1.0, 0.5}, a));
  CHECK(point_in_region({0.0, 0.0}, a));
  CHECK_FALSE(point_in_region({1.5, 0.5}, a));
  const Region holed(Polygon{square(0, 0, 4), {square(1, 1, 2).reversed()}});
  CHECK_FALSE(point_in_region({2, 2}, holed));
  CHECK(point_in_region({1, 2}, holed));
  CHECK(point_in_region({0.5, 2}, holed));
}

TEST_CASE("convex_hull") {
  const std::vector<Point2> pts{{0, 0}, {1, 0}, {1, 1}, {0, 1}, {0.5, 0.5}};
  const Ring h = convex_hull(pts);
  CHECK(h.size() == 4);
  CHECK(h.signed_area() == doctest::Approx(1.0));

  const std::vector<Point2> tri{{0, 0}, {2, 0}, {1, 3}};
  CHECK(convex_hull(tri).signed_area() == doctest::Approx(3.0));

  CHECK_THROWS_AS(convex_hull(std::vector<Point2>{{0, 0}, {1, 1}, {2, 2}}), GeometryError);

  // Plus sign: hull is the octagon through the arm tips.
  const double w = 1.0;
  const std::vector<Point2> plus{{-w / 2, -1.5}, {w / 2, -1.5}, {w / 2, -w / 2}, {1.5, -w / 2},
                                 {1.5, w / 2},   {w / 2, w / 2}, {w / 2, 1.5},  {-w / 2, 1.5},
                                 {-w / 2, w / 2}, {-1.5, w / 2}, {-1.5, -w / 2}, {-w / 2, -w / 2}};
  const Ring ph = convex_hull(plus);
  // Brute-force hull check: every input point on or left of every hull edge,
  // and every hull vertex is an input point.
  for (std::size_t i = 0; i < ph.size(); ++i) {
    const Point2 a = ph[i], b = ph[(i + 1) % ph.size()];
    for (const Point2& p : plus) CHECK(orient(a, b, p) >= -1e-12);
    CHECK(std::find(plus.begin(), plus.end(), ph[i]) != plus.end());
  }
  CHECK(ph.size() == 8);
}

TEST_CASE("property: intersection is commutative, bounded and matches a sampling oracle") {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 60; ++trial) {
    const Ring ra = random_star_polygon(rng, {0, 0}, 1.0, 5 + trial % 9);
    const Ring rb = random_star_polygon(rng, {0.3 * std::cos(trial), 0.3 * std::sin(trial)}, 0.9, 4 + trial % 11);
    const Region a(ra), b(rb);
    const Region ab = region_intersection(a, b);
    const Region ba = region_intersection(b, a);
    CHECK(std::abs(ab.area() - ba.area()) < kEpsArea);
    CHECK(ab.area() <= std::min(a.area(), b.area()) + kEpsArea);
    CHECK(std::abs(ab.area() - intersection_area(a, b)) < 1e-9);
    CHECK(region_intersection(a, a).area() == doctest::Approx(a.area()).epsilon(1e-9));

    BBox box = a.bbox();
    box.expand(b.bbox());
    const double sampled = sampled_intersection_area({ra}, {rb}, box, 300);
    const double cell = box.width() * box.height() / (300.0 * 300.0);
    // Boundary cells dominate the grid error.
    CHECK(std::abs(sampled - ab.area()) < 600 * cell);

    // Every output ring vertex lies in both operands.
    for (const Ring& r : ab.rings()) {
      for (const Point2& p : r.vertices()) {
        CHECK(point_in_region(p, a, 1e-7));
        CHECK(point_in_region(p, b, 1e-7));
      }
    }
  }
}

TEST_CASE("property: point_in_region agrees with a winding-number oracle") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-1.3, 1.3);
  int disagreements = 0;
  for (int k = 0; k < 10000; ++k) {
    const Ring r = random_star_polygon(rng, {0, 0}, 1.0, 3 + k % 12);
    const Region region(r);
    const Point2 p{u(rng), u(rng)};
    const bool oracle = winding_number(p, r.vertices()) != 0;
    if (distance_to_boundary(p, region) < 1e-9) continue;
    if (point_in_region(p, region) != oracle) ++disagreements;
  }
  CHECK(disagreements == 0);
}

TEST_CASE("property: convex hull contains every input point") {
  std::mt19937_64 rng(3);
  std::normal_distribution<double> g(0.0, 1.0);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<Point2> pts;
    for (int i = 0; i < 3 + trial % 40; ++i) pts.push_back({g(rng), g(rng)});
    const Ring h = convex_hull(pts);
    const Region hr(h);
    for (const Point2& p : pts) CHECK(point_in_region(p, hr, 1e-12));
  }
}
