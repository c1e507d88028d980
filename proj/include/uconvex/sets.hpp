#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "uconvex/spaces.hpp"

namespace uconvex {

struct HullOptions {
  // Random geodesic parameters per selected pair, in addition to its midpoint.
  std::size_t per_pair_samples = 2;
  // Pairs per level; all pairs are used when fewer exist.
  std::size_t pairs_per_level = 256;
  std::uint64_t seed = 0;
};

// Finite approximation of the iterated geodesic hull G_depth of a generator set.
// The cloud contains the generators followed by the points added at each level.
struct HullApprox {
  std::vector<Point> generators;
  std::size_t depth = 0;
  std::vector<Point> cloud;
  // Cloud size after each level (level_sizes[0] == generators.size()).
  std::vector<std::size_t> level_sizes;
  // Pairs whose geodesic is unsupported (e.g. cone pairs through the apex).
  std::size_t skipped_pairs = 0;
};

HullApprox build_hull(const SpaceHandle& s, std::vector<Point> generators, std::size_t depth,
                      const HullOptions& opts = {});

struct NearestPoint {
  double distance = 0.0;
  Point point;
  std::size_t index = 0;
};

// Minimum distance from q to a point cloud; ties go to the lowest index.
NearestPoint dist_to_set(const SpaceHandle& s, const Point& q, std::span<const Point> cloud);
NearestPoint dist_to_set(const SpaceHandle& s, const Point& q, const HullApprox& hull);

struct SegmentProjection {
  Point point;
  double t = 0.0;
  double distance = 0.0;
  // Golden-section result was beaten by a grid point; grid scan result used.
  bool fallback = false;
};

/// Nearest point to q on the geodesic [a, b] by golden-section search in the
/// geodesic parameter. Stops when the bracket, measured in arc length, is
/// below tol (1 + d(a, b)), or after 200 iterations. `start_bias` in (-1, 1)
/// shifts the initial interior probes (used to test initialization independence).
SegmentProjection project_to_segment(const SpaceHandle& s, const Point& q, const Point& a,
                                     const Point& b, double tol, double start_bias = 0.0);

}  // namespace uconvex
