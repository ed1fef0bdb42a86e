#pragma once

#include <array>
#include <vector>

#include "losplan/environment.hpp"
#include "losplan/geometry.hpp"

namespace losplan {

/// One triangle of a realization's tiling. t and i are 0-based.
struct TriangleNode {
  int t = 0;
  int i = 0;
  std::array<Point2, 3> v;

  double area() const { return 0.5 * std::abs(orient(v[0], v[1], v[2])); }
  double longest_side() const {
    return std::max({distance(v[0], v[1]), distance(v[1], v[2]), distance(v[2], v[0])});
  }
  Point2 centroid() const { return (v[0] + v[1] + v[2]) * (1.0 / 3.0); }
};

/// Ear-clipping triangulation of the realization's free space. Triangles are
/// CCW and numbered in emission order.
std::vector<TriangleNode> triangulate(const Realization& real);

/// triangulate() followed by conforming longest-edge bisection until no side
/// exceeds R.
std::vector<TriangleNode> hyper_triangulate(const Realization& real, double R);

/// Triangulates one polygon with holes; outer CCW, holes CW. Throws
/// GeometryError when the topology defeats the ear clipper.
std::vector<std::array<Point2, 3>> triangulate_polygon(const Polygon& poly, double eps);

/// Refines a triangle soup (sharing exact vertex coordinates) by longest-edge
/// propagation bisection until every side is at most R.
std::vector<std::array<Point2, 3>> refine_triangles(std::vector<std::array<Point2, 3>> tris, double R);

}  // namespace losplan
