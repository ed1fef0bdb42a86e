#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>
#include <stdexcept>

#include "losplan/bounds.hpp"
#include "test_support.hpp"

using namespace losplan;
using losplan::testing::random_star_polygon;
using losplan::testing::rect_ring;
using losplan::testing::winding_number;

namespace {

const double kS = std::sqrt(3.0) / 6.0;

// Largest inscribed circle of a (possibly non-convex) ring by grid refinement over the
// winding-number interior and brute-force edge distances.
double inscribed_radius_oracle(const Ring& ring) {
  auto clearance = [&](Point2 p) {
    if (winding_number(p, ring.vertices()) == 0) return -1.0;
    double d = 1e300;
    for (std::size_t i = 0; i < ring.size(); ++i) {
      d = std::min(d, point_segment_distance(p, ring[i], ring[(i + 1) % ring.size()]));
    }
    return d;
  };
  BBox box = ring.bbox();
  Point2 best{0, 0};
  double best_d = -1.0;
  double step = std::max(box.width(), box.height()) / 200.0;
  for (double x = box.min_x; x <= box.max_x; x += step) {
    for (double y = box.min_y; y <= box.max_y; y += step) {
      const double d = clearance({x, y});
      if (d > best_d) {
        best_d = d;
        best = {x, y};
      }
    }
  }
  for (int round = 0; round < 40; ++round) {
    const Point2 c = best;
    for (int i = -10; i <= 10; ++i) {
      for (int j = -10; j <= 10; ++j) {
        const Point2 p{c.x + i * step / 10.0, c.y + j * step / 10.0};
        const double d = clearance(p);
        if (d > best_d) {
          best_d = d;
          best = p;
        }
      }
    }
    step *= 0.5;
  }
  return best_d;
}

// Chebyshev radius of a convex CCW polygon: bisection on rho, feasibility by
// clipping a large box against every edge's half-plane moved inwards by rho.
double convex_inradius_oracle(const Ring& ring) {
  auto feasible = [&](double rho) {
    const BBox b = ring.bbox();
    std::vector<Point2> poly{{b.min_x - 1, b.min_y - 1}, {b.max_x + 1, b.min_y - 1}, {b.max_x + 1, b.max_y + 1},
                             {b.min_x - 1, b.max_y + 1}};
    for (std::size_t i = 0; i < ring.size() && !poly.empty(); ++i) {
      const Point2 a = ring[i], c = ring[(i + 1) % ring.size()];
      const double l = distance(a, c);
      auto val = [&](Point2 p) { return ((c.x - a.x) * (p.y - a.y) - (c.y - a.y) * (p.x - a.x)) / l - rho; };
      std::vector<Point2> out;
      for (std::size_t k = 0; k < poly.size(); ++k) {
        const Point2 p = poly[k], q = poly[(k + 1) % poly.size()];
        const double vp = val(p), vq = val(q);
        if (vp >= 0) out.push_back(p);
        if ((vp >= 0) != (vq >= 0)) out.push_back(p + (q - p) * (vp / (vp - vq)));
      }
      poly = std::move(out);
    }
    return !poly.empty();
  };
  double lo = 0.0, hi = std::max(ring.bbox().width(), ring.bbox().height());
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    (feasible(mid) ? lo : hi) = mid;
  }
  return lo;
}

Ring plus_sign(double w) {
  const double a = w / 2, b = 1.5 * w;
  return Ring({{-a, -b}, {a, -b}, {a, -a}, {b, -a}, {b, a}, {a, a}, {a, b}, {-a, b}, {-a, a}, {-b, a}, {-b, -a}, {-a, -a}});
}

}  // namespace

TEST_CASE("irch examples") {
  CHECK(irch(rect_ring(0, 0, 2.5, 2.5)) == doctest::Approx(1.25));
  const double s = 3.0;
  const Ring tri({{0, 0}, {s, 0}, {s / 2, s * std::sqrt(3.0) / 2}});
  CHECK(irch(tri) == doctest::Approx(s * std::sqrt(3.0) / 6));
  const Ring plus = plus_sign(1.0);
  const double hull = irch(plus);
  const double own = inscribed_radius_oracle(plus);
  CHECK(hull == doctest::Approx(convex_inradius_oracle(convex_hull(plus.vertices()))).epsilon(1e-9));
  CHECK(hull == doctest::Approx(std::sqrt(2.0)));
  CHECK(hull > own + 0.1);
  // Reentrant corners at (+-w/2, +-w/2) bound the circle at the centre.
  CHECK(own == doctest::Approx(std::sqrt(0.5)).epsilon(1e-4));
  CHECK_THROWS(irch(Ring::unchecked({{0, 0}, {1, 0}, {2, 0}})));
}

TEST_CASE("irch matches a grid oracle on random convex polygons") {
  std::mt19937_64 rng(4);
  for (int i = 0; i < 25; ++i) {
    const Ring star = random_star_polygon(rng, {0, 0}, 2.0, 5 + i % 6);
    const Ring hull = convex_hull(star.vertices());
    const double want = convex_inradius_oracle(hull);
    INFO("irch " << irch(star) << " oracle " << want);
    CHECK(std::abs(irch(star) - want) <= 1e-6 * 4.0);
  }
}

TEST_CASE("inradius cubic examples") {
  const double x1 = cubic_smallest_root(1.0, kS);
  CHECK(x1 == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(std::abs(inradius_cubic(x1, 1.0, kS)) < 1e-9);
  const double x5 = cubic_smallest_root(5.0, 1.25);
  MESSAGE("x*(5, 1.25) = " << x5);
  CHECK(x5 >= 1.82);
  CHECK(x5 <= 1.86);
  CHECK(2 * x5 >= 2.5);
  const double xk = cubic_smallest_root(1000.0, 1.0);
  MESSAGE("x*(1000, 1) = " << xk);
  CHECK(xk >= 1.0005);
  CHECK(xk <= 1.0015);
  CHECK_THROWS_AS(cubic_smallest_root(1.0, 0.5), std::domain_error);
  CHECK_THROWS_AS(cubic_smallest_root(1.0, 0.0), std::domain_error);
}

TEST_CASE("cubic root properties over a sweep") {
  for (double r : {0.5, 1.0, 5.0, 37.0}) {
    double prev = 0.0;
    for (int i = 1; i <= 200; ++i) {
      const double d = kS * r * i / 200.0;
      const double x = cubic_smallest_root(r, d);
      CHECK(std::abs(inradius_cubic(x, r, d)) < 1e-9 * r * r * r);
      CHECK(inradius_cubic(x * (1 - 1e-6), r, d) > 0.0);
      CHECK(inradius_cubic(x * (1 + 1e-6), r, d) < 0.0);
      // No root below x*: the cubic stays positive there (scan).
      for (int k = 1; k < 50; ++k) CHECK(inradius_cubic(x * k / 50.0, r, d) > 0.0);
      CHECK(x >= prev);
      prev = x;
    }
    // Continuity at the regime boundary.
    CHECK(2 * cubic_smallest_root(r, kS * r * (1 - 1e-9)) == doctest::Approx(r).epsilon(1e-3));
  }
}

TEST_CASE("ucal examples and bounds") {
  BoundsReport a = ucal(1.0, {});
  CHECK(a.R_upper == doctest::Approx(1.0));
  CHECK_FALSE(a.delta_min.has_value());
  const double d1[] = {kS};
  BoundsReport b = ucal(1.0, d1);
  CHECK(b.R_upper == doctest::Approx(1.0));
  const double d5[] = {1.25, 3.0};
  BoundsReport c = ucal(5.0, d5);
  CHECK(c.small_obstacle_regime);
  CHECK(c.R_upper == doctest::Approx(2 * cubic_smallest_root(5.0, 1.25)));
  CHECK(c.R_upper == doctest::Approx(3.68).epsilon(0.01));
  CHECK(c.R_default == doctest::Approx(2.5));
  CHECK(2.5 <= c.R_upper);
  const double big[] = {10.0};
  BoundsReport d = ucal(5.0, big);
  CHECK_FALSE(d.small_obstacle_regime);
  CHECK(d.R_upper == doctest::Approx(5.0));
  CHECK_THROWS(ucal(0.0, {}));
  CHECK_THROWS(ucal(-1.0, {}));

  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 500; ++i) {
    const double r = 0.1 + 20 * u(rng);
    std::vector<double> ds;
    const int n = static_cast<int>(u(rng) * 4);
    for (int k = 0; k < n; ++k) ds.push_back(0.01 + 3 * u(rng));
    const BoundsReport rep = ucal(r, ds);
    CHECK(rep.R_upper > 0.0);
    CHECK(rep.R_upper <= r * (1 + 1e-12));
    CHECK(rep.R_upper <= std::sqrt(3.0) * r);
    CHECK(rep.R_default <= rep.R_upper);
  }
}
