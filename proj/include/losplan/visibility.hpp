#pragma once

#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <span>
#include <vector>

#include "losplan/environment.hpp"
#include "losplan/geometry.hpp"
#include "losplan/partition.hpp"

namespace losplan {

/// Sight range. An empty r means unbounded; it then stands for the layout
/// diameter wherever a number is needed.
struct RangeSpec {
  std::optional<double> r;
  int disk_sides = 64;

  static RangeSpec bounded(double r, int k = 64) { return {r, k}; }
  static RangeSpec unbounded(int k = 64) { return {std::nullopt, k}; }

  bool is_bounded() const { return r.has_value(); }
  double radius(double diameter) const { return r ? *r : diameter; }
  /// Throws GeometryError unless r > 0 and disk_sides >= 16.
  void validate() const;
};

/// Segment ab stays in the closed free space of real. Grazing a vertex or
/// running along a wall does not block.
bool segment_clear(Point2 a, Point2 b, const Realization& real);

/// segment_clear with the precondition that both endpoints are free space.
bool los_clear(Point2 a, Point2 b, const Realization& real);

/// Visibility polygon of P without any range limit (exact, angular sweep).
Ring visibility_polygon(Point2 P, const Realization& real);

/// V_r(P): the visibility polygon intersected with the inscribed regular
/// k-gon of the range disk (no disk clip when the range is unbounded).
Region visibility_of_point(Point2 P, const Realization& real, const RangeSpec& range);

/// V_r(p): intersection of the regions of p's three vertices.
Region visibility_of_triangle(const TriangleNode& p, const Realization& real, const RangeSpec& range);

/// Running intersection; stops as soon as the result is empty.
Region visibility_of_set(std::span<const Region* const> regions);

/// Insert-once store of point and triangle regions for one environment.
/// Safe to use from several threads.
class VisibilityCache {
 public:
  VisibilityCache(const Environment& env, RangeSpec range);

  const Environment& environment() const { return *env_; }
  const RangeSpec& range() const { return range_; }

  const Region& point(int t, Point2 p);
  Region triangle(const TriangleNode& p);

 private:
  struct Shard {
    std::mutex mu;
    std::map<Point2, std::unique_ptr<Region>> regions;
  };

  const Environment* env_;
  RangeSpec range_;
  std::vector<std::unique_ptr<Shard>> shards_;
};

}  // namespace losplan
