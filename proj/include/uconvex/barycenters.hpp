#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "uconvex/means.hpp"
#include "uconvex/report.hpp"
#include "uconvex/spaces.hpp"
#include "uconvex/transport.hpp"

namespace uconvex {

struct DescentOptions {
  double tol = 1e-10;
  std::size_t max_iter = 2000;
  std::uint64_t seed = 0;
  // Start from a random point near the support instead of the best support point.
  bool random_start = false;
};

struct BarycenterResult {
  Point point;
  // Objective at `point`: Var_{mu,p} for barycenter_p / barycenter_median,
  // the radius for circumcenter, w_L(mu, delta_y) for barycenter_orlicz.
  double value = 0.0;
  std::size_t iterations = 0;
  bool converged = false;
  std::optional<double> oracle_gap;
  // True when the space is on the certified list, i.e. the objective is
  // geodesically convex and the stationary point is a global minimizer.
  bool global = false;
  // Uniqueness verdict where one is available (p = 1: false when the support
  // lies on one geodesic).
  std::optional<bool> unique;
  // Objective after the start and after each accepted step.
  std::vector<double> trace;
};

/// sum_i w_i d(x_i, y)^p
double variance(const SpaceHandle& s, const DiscreteMeasure& mu, const Point& y, double p);

/// sum_i w_i (d(x_i, y)^p - d(x_i, w_ref)^p)
double fw_objective(const SpaceHandle& s, const DiscreteMeasure& mu, const Point& y,
                    const Point& w_ref, double p);

/// w_L(mu, delta_y) = inf{t > 0 : sum_i w_i L(d(x_i, y) / t) <= 1}
double orlicz_distance_to_dirac(const SpaceHandle& s, const DiscreteMeasure& mu, const Point& y,
                                const OrliczFunction& L);

/// Minimizer of Var_{mu,p} for p > 1.
BarycenterResult barycenter_p(const SpaceHandle& s, const DiscreteMeasure& mu, double p,
                              const DescentOptions& opts = {});

/// Minimizer of Var_{mu,1}; `unique` is false when the support is collinear.
BarycenterResult barycenter_median(const SpaceHandle& s, const DiscreteMeasure& mu,
                                   const DescentOptions& opts = {});

/// Minimax center argmin_y max_i d(x_i, y); `value` is the radius.
BarycenterResult circumcenter(const SpaceHandle& s, const std::vector<Point>& points,
                              const DescentOptions& opts = {});

/// Minimizer of y -> w_L(mu, delta_y).
BarycenterResult barycenter_orlicz(const SpaceHandle& s, const DiscreteMeasure& mu,
                                   const OrliczFunction& L, const DescentOptions& opts = {});

// Whether the support lies within tol of the geodesic through its two
// farthest points.
bool support_collinear(const SpaceHandle& s, const std::vector<Point>& support, double tol);

/// d(b_2(mu), b_2(nu)) <= w_p(mu, nu) + 1e-7 on the given pair and on
/// n_instances random measure pairs (supports of 1 to 6 points).
CheckReport jensen_contraction_check(const SpaceHandle& s, const DiscreteMeasure& mu,
                                     const DiscreteMeasure& nu, double p,
                                     std::size_t n_instances, std::uint64_t seed);

// Random measure with `size` support points drawn around the origin and
// exponential weights; used by the samplers and tests.
DiscreteMeasure random_measure(const SpaceHandle& s, Rng& rng, std::size_t size,
                               double radius = 1.0);

}  // namespace uconvex
