#pragma once

// Reference computations that share no code path with the library solvers.

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>
#include <vector>

namespace oracle {

// Optimal transport between measures whose weights are multiples of 1/K:
// expand each side into K unit atoms and enumerate all K! assignments. The
// transportation polytope has integral vertices, so an optimal coupling is
// attained by some assignment; this is exact for both sum-of-costs and the
// bottleneck objective.
struct AtomExpansion {
  std::vector<std::size_t> owner;  // atom -> support index
};

inline AtomExpansion expand(const std::vector<int>& counts) {
  AtomExpansion e;
  for (std::size_t i = 0; i < counts.size(); ++i)
    for (int k = 0; k < counts[i]; ++k) e.owner.push_back(i);
  return e;
}

struct EnumResult {
  double min_sum = std::numeric_limits<double>::infinity();  // (1/K) sum d^p over atoms
  double min_max = std::numeric_limits<double>::infinity();  // bottleneck
};

// dist(i, j) between support points; p <= 0 skips the sum objective.
inline EnumResult enumerate_assignments(const std::vector<int>& mu_counts,
                                        const std::vector<int>& nu_counts,
                                        const std::function<double(std::size_t, std::size_t)>& dist,
                                        double p) {
  const auto a = expand(mu_counts);
  const auto b = expand(nu_counts);
  const std::size_t K = a.owner.size();
  std::vector<std::size_t> perm(K);
  std::iota(perm.begin(), perm.end(), 0);
  EnumResult r;
  do {
    double sum = 0.0;
    double mx = 0.0;
    for (std::size_t k = 0; k < K; ++k) {
      const double d = dist(a.owner[k], b.owner[perm[k]]);
      if (p > 0) sum += std::pow(d, p);
      mx = std::max(mx, d);
    }
    r.min_sum = std::min(r.min_sum, sum / static_cast<double>(K));
    r.min_max = std::min(r.min_max, mx);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return r;
}

// Plain 2-D grid search over a box followed by zoomed grids around the best
// cell; `levels` zooms of a res x res grid.
struct GridMin {
  double x = 0.0;
  double y = 0.0;
  double value = std::numeric_limits<double>::infinity();
  double first_level_value = std::numeric_limits<double>::infinity();
};

inline GridMin grid_search_2d(const std::function<double(double, double)>& f, double x0, double x1,
                              double y0, double y1, std::size_t res, std::size_t levels) {
  GridMin best;
  for (std::size_t level = 0; level < levels; ++level) {
    const double hx = (x1 - x0) / static_cast<double>(res - 1);
    const double hy = (y1 - y0) / static_cast<double>(res - 1);
    for (std::size_t i = 0; i < res; ++i) {
      for (std::size_t j = 0; j < res; ++j) {
        const double x = x0 + hx * static_cast<double>(i);
        const double y = y0 + hy * static_cast<double>(j);
        const double v = f(x, y);
        if (v < best.value) best = {x, y, v, best.first_level_value};
      }
    }
    if (level == 0) best.first_level_value = best.value;
    x0 = best.x - 2 * hx;
    x1 = best.x + 2 * hx;
    y0 = best.y - 2 * hy;
    y1 = best.y + 2 * hy;
  }
  return best;
}

// Closed-form cone law of cosines: d^2 = s^2 + t^2 - 2 s t cos(min(pi, angle)).
inline double cone_distance(const std::vector<double>& u, double s, const std::vector<double>& v,
                            double t) {
  double a2 = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) a2 += (u[i] - v[i]) * (u[i] - v[i]);
  const double angle = std::min(M_PI, std::sqrt(a2));
  return std::sqrt(std::max(0.0, s * s + t * t - 2 * s * t * std::cos(angle)));
}

// Weiszfeld iteration for the weighted Euclidean geometric median.
inline std::vector<double> weiszfeld(const std::vector<std::vector<double>>& pts,
                                     const std::vector<double>& w, std::size_t iters = 100000) {
  const std::size_t dim = pts[0].size();
  std::vector<double> y(dim, 0.0);
  for (std::size_t i = 0; i < pts.size(); ++i)
    for (std::size_t k = 0; k < dim; ++k) y[k] += w[i] * pts[i][k];
  for (std::size_t it = 0; it < iters; ++it) {
    std::vector<double> num(dim, 0.0);
    double den = 0.0;
    bool hit = false;
    for (std::size_t i = 0; i < pts.size(); ++i) {
      double d = 0.0;
      for (std::size_t k = 0; k < dim; ++k) d += (pts[i][k] - y[k]) * (pts[i][k] - y[k]);
      d = std::sqrt(d);
      if (d < 1e-14) {
        hit = true;
        continue;
      }
      for (std::size_t k = 0; k < dim; ++k) num[k] += w[i] * pts[i][k] / d;
      den += w[i] / d;
    }
    if (hit || den == 0.0) break;
    double move = 0.0;
    for (std::size_t k = 0; k < dim; ++k) {
      const double nk = num[k] / den;
      move = std::max(move, std::abs(nk - y[k]));
      y[k] = nk;
    }
    if (move < 1e-15) break;
  }
  return y;
}

}  // namespace oracle
