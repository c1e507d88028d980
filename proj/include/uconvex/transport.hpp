#pragma once

#include <vector>

#include "uconvex/report.hpp"
#include "uconvex/spaces.hpp"

namespace uconvex {

// Finitely supported probability measure. Zero weights are dropped; the
// remaining weights must be positive and sum to 1 within 1e-12.
class DiscreteMeasure {
 public:
  DiscreteMeasure(std::vector<Point> support, std::vector<double> weights);

  static DiscreteMeasure dirac(Point x);
  static DiscreteMeasure uniform(std::vector<Point> support);

  const std::vector<Point>& support() const { return support_; }
  const std::vector<double>& weights() const { return weights_; }
  std::size_t size() const { return support_.size(); }

  void validate_in(const SpaceHandle& s) const;

 private:
  std::vector<Point> support_;
  std::vector<double> weights_;
};

// Coupling of mu (rows) and nu (columns), stored row-major.
struct CouplingPlan {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> mass;
  // Transport cost sum_ij pi_ij d_ij^p (not the p-th root).
  double cost = 0.0;

  double at(std::size_t i, std::size_t j) const { return mass[i * cols + j]; }
};

struct TransportResult {
  double value = 0.0;
  CouplingPlan plan;
};

// Exact solvers handle supports of at most this many points.
inline constexpr std::size_t kMaxExactSupport = 64;

/// Exact p-Wasserstein distance by successive shortest paths on the
/// transportation network.
TransportResult wasserstein_p(const SpaceHandle& s, const DiscreteMeasure& mu,
                              const DiscreteMeasure& nu, double p);

/// Bottleneck distance: smallest threshold over the sorted pairwise distances
/// whose admissible cells carry a full coupling (max-flow feasibility).
double wasserstein_inf(const SpaceHandle& s, const DiscreteMeasure& mu, const DiscreteMeasure& nu);

// Dense min-cost transportation on an explicit cost matrix; exposed for tests.
CouplingPlan solve_transport(const std::vector<double>& supply, const std::vector<double>& demand,
                             const std::vector<double>& cost);

/// w_p nondecreasing along an increasing p_list, and the largest p (when >= 64)
/// within 2% of w_inf.
CheckReport wasserstein_monotone_check(const SpaceHandle& s, const DiscreteMeasure& mu,
                                       const DiscreteMeasure& nu, const std::vector<double>& p_list);

}  // namespace uconvex
