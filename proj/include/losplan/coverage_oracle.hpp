#pragma once

#include <cstdint>
#include <vector>

#include "losplan/environment.hpp"
#include "losplan/visibility.hpp"

namespace losplan {

struct RealizationCoverage {
  int t = 0;
  std::size_t sampled = 0;
  std::size_t covered = 0;
  /// Samples within eps of a wall; excluded from the fraction.
  std::size_t flagged = 0;
  double coverage_fraction = 1.0;
  double gap_area_estimate = 0.0;
  std::vector<Point2> uncovered_samples;
};

struct CoverageReport {
  double pitch = 0.0;
  std::vector<RealizationCoverage> per_realization;
  double min_coverage_fraction = 1.0;
  int worst_realization = 0;
};

struct CoverageOptions {
  double pitch = 0.0;
  /// Planning R; pitch above it is rejected. Zero skips the check.
  double R = 0.0;
  std::uint64_t seed = 1;
  unsigned threads = 0;
  /// Cap on uncovered sample points kept per realization.
  std::size_t keep_uncovered = 2000;
};

/// Jittered-grid coverage of every realization by the given APs: a sample is
/// covered when some AP lies in free space, within the exact range disk and
/// has a clear segment to it.
CoverageReport verify_plan(const Environment& env, std::span<const Point2> aps, const RangeSpec& range,
                           const CoverageOptions& opts);

/// Portable uniform [0,1) draw from a 64-bit generator output.
inline double unit_uniform(std::uint64_t x) { return static_cast<double>(x >> 11) * 0x1.0p-53; }

struct CrossCheckReport {
  std::size_t checked = 0;
  std::size_t skipped_in_band = 0;
  std::size_t soundness_violations = 0;
  std::size_t completeness_violations = 0;
};

/// Random (P, X) pairs per realization: X in V_r(P) must see P within r, and
/// X seeing P within r cos(pi/k) must be in V_r(P), outside a band of
/// band_rel * diameter around the region boundary.
CrossCheckReport cross_check_visibility_regions(const Environment& env, const RangeSpec& range,
                                                std::size_t sample_count, std::uint64_t seed = 1,
                                                double band_rel = 1e-6);

}  // namespace losplan
