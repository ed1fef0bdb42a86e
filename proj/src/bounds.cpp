#include "losplan/bounds.hpp"

#include <stdexcept>

namespace losplan {

namespace {

const double kSqrt3 = std::sqrt(3.0);

bool solve3(double m[3][4], double out[3]) {
  for (int c = 0; c < 3; ++c) {
    int piv = c;
    for (int r = c + 1; r < 3; ++r) {
      if (std::abs(m[r][c]) > std::abs(m[piv][c])) piv = r;
    }
    if (std::abs(m[piv][c]) < 1e-14) return false;
    if (piv != c) {
      for (int k = 0; k < 4; ++k) std::swap(m[c][k], m[piv][k]);
    }
    for (int r = 0; r < 3; ++r) {
      if (r == c) continue;
      const double f = m[r][c] / m[c][c];
      for (int k = c; k < 4; ++k) m[r][k] -= f * m[c][k];
    }
  }
  for (int c = 0; c < 3; ++c) out[c] = m[c][3] / m[c][c];
  return true;
}

}  // namespace

ChebyshevBall chebyshev_ball(const Ring& convex) {
  const std::size_t n = convex.size();
  std::vector<Point2> normals(n);
  std::vector<double> offsets(n);
  for (std::size_t i = 0; i < n; ++i) {
    const Point2 a = convex[i];
    const Point2 b = convex[(i + 1) % n];
    const double l = distance(a, b);
    // Inward unit normal of a CCW edge.
    normals[i] = Point2{-(b.y - a.y) / l, (b.x - a.x) / l};
    offsets[i] = dot(normals[i], a);
  }
  // Maximise rho subject to n_i . x - rho >= c_i. The optimum is a vertex of
  // the feasible set, i.e. three tight constraints.
  ChebyshevBall best{convex[0], -1.0};
  const double tol = 1e-12 * std::max(convex.bbox().width(), convex.bbox().height());
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      for (std::size_t k = j + 1; k < n; ++k) {
        double m[3][4] = {{normals[i].x, normals[i].y, -1.0, offsets[i]},
                          {normals[j].x, normals[j].y, -1.0, offsets[j]},
                          {normals[k].x, normals[k].y, -1.0, offsets[k]}};
        double x[3];
        if (!solve3(m, x)) continue;
        if (x[2] <= best.radius) continue;
        bool ok = true;
        for (std::size_t e = 0; e < n && ok; ++e) ok = normals[e].x * x[0] + normals[e].y * x[1] - x[2] >= offsets[e] - tol;
        if (ok) best = {{x[0], x[1]}, x[2]};
      }
    }
  }
  if (best.radius <= 0.0) throw GeometryError("chebyshev_ball: degenerate polygon");
  return best;
}

double irch(const Ring& obstacle) {
  if (obstacle.size() < 3 || obstacle.area() <= 0.0) throw GeometryError("irch: degenerate obstacle");
  return chebyshev_ball(convex_hull(obstacle.vertices())).radius;
}

double inradius_cubic(double x, double r, double d) { return x * x * x - r * x * x + d * d * x + d * d * r; }

double cubic_smallest_root(double r, double delta_min) {
  if (!(r > 0.0) || !(delta_min > 0.0)) throw std::domain_error("cubic_smallest_root: r and delta_min must be positive");
  if (delta_min > kSqrt3 / 6.0 * r * (1.0 + 1e-12)) {
    throw std::domain_error("cubic_smallest_root: delta_min exceeds sqrt(3)/6 r, the small-obstacle regime does not apply");
  }
  // f(0) = d^2 r > 0 and f is increasing then decreasing before its local
  // minimum at x_m; the smallest positive root lies in (0, x_m].
  const double disc = std::max(0.0, r * r - 3.0 * delta_min * delta_min);
  const double xm = (r + std::sqrt(disc)) / 3.0;
  double lo = 0.0;
  double hi = xm;
  if (inradius_cubic(hi, r, delta_min) > 0.0) {
    // Only at the regime boundary can rounding lift the minimum above zero.
    if (inradius_cubic(hi, r, delta_min) > 1e-9 * r * r * r) {
      throw std::domain_error("cubic_smallest_root: no positive root below r");
    }
    return hi;
  }
  // The cubic rises on (0, x_1) where x_1 = (r - sqrt(disc))/3 and falls on
  // (x_1, x_m), so the sign change is unique in (x_1, x_m).
  lo = (r - std::sqrt(disc)) / 3.0;
  for (int it = 0; it < 200 && hi - lo > 1e-15 * r; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (inradius_cubic(mid, r, delta_min) > 0.0) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

BoundsReport ucal(double r, std::span<const double> deltas) {
  if (!(r > 0.0) || !std::isfinite(r)) throw std::domain_error("ucal: r must be positive");
  BoundsReport rep;
  rep.r = r;
  rep.deltas.assign(deltas.begin(), deltas.end());
  rep.R_upper = r;
  if (!deltas.empty()) {
    const double dmin = *std::min_element(deltas.begin(), deltas.end());
    if (!(dmin > 0.0)) throw std::domain_error("ucal: obstacle inradius must be positive");
    rep.delta_min = dmin;
    if (dmin <= kSqrt3 / 6.0 * r) {
      rep.small_obstacle_regime = true;
      rep.x_star = cubic_smallest_root(r, dmin);
      rep.R_upper = std::min(r, 2.0 * *rep.x_star);
    }
    rep.R_default = std::min(rep.R_upper, 2.0 * dmin);
  } else {
    rep.R_default = rep.R_upper;
  }
  return rep;
}

BoundsReport environment_bounds(const EnvironmentSpec& spec, double r) {
  std::vector<double> deltas;
  for (const Ring& s : spec.obstacle_shapes()) deltas.push_back(irch(s));
  return ucal(r, deltas);
}

}  // namespace losplan
