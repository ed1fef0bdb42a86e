#include "losplan/coverage_oracle.hpp"

#include <numbers>
#include <random>
#include <stdexcept>
#include <thread>

namespace losplan {

namespace {

// Crossing-number membership over the walls, independent of Region.
bool in_free_space(Point2 p, const Realization& real) {
  bool inside = false;
  for (const Segment& w : real.walls()) {
    if ((w.a.y > p.y) != (w.b.y > p.y)) {
      const double x = w.a.x + (p.y - w.a.y) * (w.b.x - w.a.x) / (w.b.y - w.a.y);
      if (p.x < x) inside = !inside;
    }
  }
  return inside;
}

bool covered_by(Point2 x, std::span<const Point2> aps, const std::vector<bool>& usable, double r,
                const Realization& real) {
  const double r2 = r * r;
  for (std::size_t k = 0; k < aps.size(); ++k) {
    if (!usable[k]) continue;
    if (distance_squared(aps[k], x) > r2) continue;
    if (segment_clear(aps[k], x, real)) return true;
  }
  return false;
}

RealizationCoverage cover_one(const Realization& real, std::span<const Point2> aps, const RangeSpec& range,
                              const CoverageOptions& opts) {
  RealizationCoverage rc;
  rc.t = real.index();
  const double r = range.radius(real.diameter());
  const double eps = real.eps();
  std::vector<bool> usable(aps.size());
  for (std::size_t k = 0; k < aps.size(); ++k) usable[k] = in_free_space(aps[k], real) || real.clearance(aps[k]) <= eps;

  std::mt19937_64 rng(opts.seed ^ static_cast<std::uint64_t>(real.index()));
  const BBox box = real.outer().bbox();
  const double h = opts.pitch;
  const auto nx = static_cast<std::size_t>(std::ceil(box.width() / h));
  const auto ny = static_cast<std::size_t>(std::ceil(box.height() / h));
  for (std::size_t i = 0; i < nx; ++i) {
    for (std::size_t j = 0; j < ny; ++j) {
      const double jx = unit_uniform(rng());
      const double jy = unit_uniform(rng());
      const Point2 x{box.min_x + (static_cast<double>(i) + jx) * h, box.min_y + (static_cast<double>(j) + jy) * h};
      if (x.x > box.max_x || x.y > box.max_y) continue;
      const bool near_wall = real.clearance(x) <= eps;
      if (!near_wall && !in_free_space(x, real)) continue;
      ++rc.sampled;
      if (near_wall) {
        ++rc.flagged;
        continue;
      }
      if (covered_by(x, aps, usable, r, real)) {
        ++rc.covered;
      } else if (rc.uncovered_samples.size() < opts.keep_uncovered) {
        rc.uncovered_samples.push_back(x);
      }
    }
  }
  const std::size_t counted = rc.sampled - rc.flagged;
  rc.coverage_fraction = counted ? static_cast<double>(rc.covered) / static_cast<double>(counted) : 1.0;
  rc.gap_area_estimate = (1.0 - rc.coverage_fraction) * real.area();
  return rc;
}

}  // namespace

CoverageReport verify_plan(const Environment& env, std::span<const Point2> aps, const RangeSpec& range,
                           const CoverageOptions& opts) {
  range.validate();
  if (!(opts.pitch > 0.0)) throw std::invalid_argument("verify: pitch must be positive");
  if (opts.R > 0.0 && opts.pitch > opts.R) throw std::invalid_argument("verify: pitch larger than R under-samples");
  for (const Point2& a : aps) {
    if (!is_finite(a)) throw std::invalid_argument("verify: non-finite AP coordinate");
  }
  CoverageReport rep;
  rep.pitch = opts.pitch;
  rep.per_realization.resize(env.size());
  unsigned threads = opts.threads ? opts.threads : std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, env.size()));
  if (threads <= 1) {
    for (std::size_t t = 0; t < env.size(); ++t) rep.per_realization[t] = cover_one(env.realization(t), aps, range, opts);
  } else {
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < threads; ++w) {
      pool.emplace_back([&, w] {
        for (std::size_t t = w; t < env.size(); t += threads) {
          rep.per_realization[t] = cover_one(env.realization(t), aps, range, opts);
        }
      });
    }
    for (auto& th : pool) th.join();
  }
  for (const auto& rc : rep.per_realization) {
    if (rc.coverage_fraction < rep.min_coverage_fraction) {
      rep.min_coverage_fraction = rc.coverage_fraction;
      rep.worst_realization = rc.t;
    }
  }
  return rep;
}

CrossCheckReport cross_check_visibility_regions(const Environment& env, const RangeSpec& range,
                                                std::size_t sample_count, std::uint64_t seed, double band_rel) {
  range.validate();
  CrossCheckReport rep;
  std::mt19937_64 rng(seed);
  const std::size_t per_point = 50;
  std::size_t done = 0;
  std::size_t q = 0;
  while (done < sample_count) {
    const Realization& real = env.realization(q % env.size());
    const BBox box = real.outer().bbox();
    auto random_free = [&] {
      for (;;) {
        const Point2 p{box.min_x + unit_uniform(rng()) * box.width(), box.min_y + unit_uniform(rng()) * box.height()};
        if (in_free_space(p, real)) return p;
      }
    };
    Point2 P;
    if (q % 4 == 0) {
      const auto& vs = real.wall_vertices();
      P = vs[static_cast<std::size_t>(unit_uniform(rng()) * static_cast<double>(vs.size()))].p;
    } else if (q % 4 == 1) {
      const auto& ws = real.walls();
      const Segment w = ws[static_cast<std::size_t>(unit_uniform(rng()) * static_cast<double>(ws.size()))];
      P = w.a + (w.b - w.a) * (0.1 + 0.8 * unit_uniform(rng()));
    } else {
      P = random_free();
    }
    ++q;
    const Region v = visibility_of_point(P, real, range);
    const double r = range.radius(real.diameter());
    const double inner = range.is_bounded() ? r * std::cos(std::numbers::pi / range.disk_sides) : r;
    const double band = band_rel * real.diameter();
    for (std::size_t s = 0; s < per_point && done < sample_count; ++s, ++done) {
      const Point2 X = random_free();
      if (!v.has_no_rings() && distance_to_boundary(X, v) < band) {
        ++rep.skipped_in_band;
        continue;
      }
      ++rep.checked;
      const bool in = point_in_region(X, v, 0.0);
      const bool sees = segment_clear(P, X, real);
      const double d = distance(P, X);
      if (in && (!sees || d > r)) ++rep.soundness_violations;
      if (!in && sees && d <= inner) ++rep.completeness_violations;
    }
  }
  return rep;
}

}  // namespace losplan
