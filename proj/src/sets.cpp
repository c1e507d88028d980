#include "uconvex/sets.hpp"

#include <cmath>
#include <limits>

#include "uconvex/error.hpp"

namespace uconvex {

HullApprox build_hull(const SpaceHandle& s, std::vector<Point> generators, std::size_t depth,
                      const HullOptions& opts) {
  if (generators.empty()) throw DomainError("build_hull needs at least one generator");
  for (const auto& g : generators) s->validate(g);

  HullApprox hull;
  hull.depth = depth;
  hull.cloud = generators;
  hull.generators = std::move(generators);
  hull.level_sizes.push_back(hull.cloud.size());

  for (std::size_t level = 1; level <= depth; ++level) {
    const std::size_t m = hull.cloud.size();
    Rng rng = stream_rng(opts.seed, level);
    std::vector<std::pair<std::size_t, std::size_t>> pairs;
    const std::size_t all_pairs = m * (m - 1) / 2;
    if (all_pairs <= opts.pairs_per_level) {
      for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = i + 1; j < m; ++j) pairs.emplace_back(i, j);
    } else {
      std::uniform_int_distribution<std::size_t> pick(0, m - 1);
      while (pairs.size() < opts.pairs_per_level) {
        const std::size_t i = pick(rng);
        const std::size_t j = pick(rng);
        if (i != j) pairs.emplace_back(i, j);
      }
    }
    std::vector<Point> added;
    for (auto [i, j] : pairs) {
      const Point& a = hull.cloud[i];
      const Point& b = hull.cloud[j];
      if (!s->geodesic_supported(a, b)) {
        ++hull.skipped_pairs;
        continue;
      }
      added.push_back(s->midpoint(a, b));
      for (std::size_t k = 0; k < opts.per_pair_samples; ++k) {
        added.push_back(s->geodesic_point(a, b, uniform01(rng)));
      }
    }
    hull.cloud.insert(hull.cloud.end(), std::make_move_iterator(added.begin()),
                      std::make_move_iterator(added.end()));
    hull.level_sizes.push_back(hull.cloud.size());
  }
  return hull;
}

NearestPoint dist_to_set(const SpaceHandle& s, const Point& q, std::span<const Point> cloud) {
  if (cloud.empty()) throw DomainError("dist_to_set needs a nonempty set");
  NearestPoint best{std::numeric_limits<double>::infinity(), cloud.front(), 0};
  for (std::size_t i = 0; i < cloud.size(); ++i) {
    const double d = s->distance(q, cloud[i]);
    if (d < best.distance) {
      best.distance = d;
      best.index = i;
    }
  }
  best.point = cloud[best.index];
  return best;
}

NearestPoint dist_to_set(const SpaceHandle& s, const Point& q, const HullApprox& hull) {
  return dist_to_set(s, q, std::span<const Point>(hull.cloud));
}

SegmentProjection project_to_segment(const SpaceHandle& s, const Point& q, const Point& a,
                                     const Point& b, double tol, double start_bias) {
  if (!(tol > 0.0)) throw DomainError("project_to_segment needs tol > 0");
  if (!s->geodesic_supported(a, b)) {
    throw UnsupportedGeodesic("project_to_segment: geodesic [a, b] is not supported");
  }
  const double len = s->distance(a, b);
  auto profile = [&](double t) { return s->distance(q, s->geodesic_point(a, b, t)); };

  if (len == 0.0) return {a, 0.0, s->distance(q, a), false};

  constexpr double inv_phi = 0.6180339887498948482;
  const double bias = std::clamp(start_bias, -0.9, 0.9) * 0.1;
  double lo = 0.0;
  double hi = 1.0;
  double x1 = hi - inv_phi * (hi - lo) + bias * (hi - lo);
  double x2 = lo + inv_phi * (hi - lo) + bias * (hi - lo);
  double f1 = profile(x1);
  double f2 = profile(x2);
  const double stop = tol * (1.0 + len) / len;
  for (int it = 0; it < 200 && (hi - lo) > stop; ++it) {
    if (f1 <= f2) {
      hi = x2;
    } else {
      lo = x1;
    }
    // Probes are re-placed at golden positions of the new bracket; reusing a
    // biased probe could leave it outside the ordering lo < x1 < x2 < hi.
    x1 = hi - inv_phi * (hi - lo);
    x2 = lo + inv_phi * (hi - lo);
    f1 = profile(x1);
    f2 = profile(x2);
  }
  double t_best = f1 <= f2 ? x1 : x2;
  double f_best = std::min(f1, f2);

  // Near a quadratic minimum the profile is flat below rounding once the
  // bracket reaches ~sqrt(eps); the sign of a symmetric difference (monotone
  // for convex profiles) keeps resolving t well past that point.
  {
    constexpr double h = 1e-5;
    const double w = 4.0 * std::max(hi - lo, 1e-7);
    double left = std::max(h, t_best - w);
    double right = std::min(1.0 - h, t_best + w);
    auto slope = [&](double t) { return profile(t + h) - profile(t - h); };
    if (left < right && slope(left) <= 0.0 && slope(right) >= 0.0) {
      for (int it = 0; it < 200 && right - left > 1e-15; ++it) {
        const double mid = 0.5 * (left + right);
        (slope(mid) > 0.0 ? right : left) = mid;
      }
      const double t = 0.5 * (left + right);
      const double f = profile(t);
      if (f <= f_best + 4e-16 * (1.0 + f_best)) {
        t_best = t;
        f_best = std::min(f, f_best);
      }
    }
  }

  for (double t : {0.0, 1.0}) {
    const double f = profile(t);
    if (f < f_best) {
      f_best = f;
      t_best = t;
    }
  }

  // A grid point clearly below the golden-section result means the profile is
  // not unimodal; rescan on a fine grid instead.
  bool fallback = false;
  constexpr int kCoarse = 16;
  for (int k = 1; k < kCoarse; ++k) {
    const double t = static_cast<double>(k) / kCoarse;
    if (profile(t) < f_best - 1e-12 * (1.0 + f_best)) {
      fallback = true;
      break;
    }
  }
  if (fallback) {
    constexpr int kFine = 4096;
    for (int k = 0; k <= kFine; ++k) {
      const double t = static_cast<double>(k) / kFine;
      const double f = profile(t);
      if (f < f_best) {
        f_best = f;
        t_best = t;
      }
    }
  }
  return {s->geodesic_point(a, b, t_best), t_best, f_best, fallback};
}

}  // namespace uconvex
