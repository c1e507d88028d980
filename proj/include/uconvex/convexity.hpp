#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "uconvex/means.hpp"
#include "uconvex/report.hpp"
#include "uconvex/spaces.hpp"

namespace uconvex {

struct SamplingOptions {
  std::size_t samples = 10000;
  std::uint64_t seed = 0;
  unsigned threads = 1;
  // Points are drawn by MetricSpace::sample_point around `center` (default:
  // the space origin) with this radius.
  double radius = 1.0;
  std::optional<Point> center;
  double tol = 1e-9;
};

// Samples per independent RNG stream. Fixed so results do not depend on the
// thread count.
inline constexpr std::size_t kSamplesPerStream = 4096;

/// d(m(x,y), z) <= M^p(d(x,z), d(y,z)) on sampled triples.
CheckReport check_p_convexity(const SpaceHandle& s, Exponent p, const SamplingOptions& opts);

// Same inequality with the L-mean, or with the Orlicz mean when `orlicz` is set.
CheckReport check_l_convexity(const SpaceHandle& s, const OrliczFunction& L, bool orlicz,
                              const SamplingOptions& opts);

struct ModulusRow {
  double epsilon = 0.0;
  // Raw empirical infimum of 1 - d(m,z)/M^p over qualifying triples.
  std::optional<double> rho_raw;
  // Monotone envelope of rho_raw (suffix minimum over the grid).
  std::optional<double> rho_hat;
  // 1 - (1 - rho_hat)^p for finite p.
  std::optional<double> rho_tilde;
  std::size_t samples = 0;
  std::size_t attempts = 0;
  std::vector<Point> witness;
};

struct ModulusTable {
  Exponent p = Exponent::finite(2.0);
  std::vector<ModulusRow> rows;
};

// Whether (x, y, z) distances satisfy the epsilon-trigger for exponent p:
// d(x,y) > eps M^p for p > 1, d(x,y) > |d(x,z) - d(y,z)| + eps M^1 for p = 1.
bool modulus_trigger(Exponent p, double eps, double dxy, double dxz, double dyz);

/// Empirical modulus of uniform p-convexity on a strictly increasing grid.
/// Triples are resampled until the trigger holds, up to max(1e6, samples)
/// attempts per epsilon; grid points without qualifying triples carry no data.
ModulusTable estimate_modulus(const SpaceHandle& s, Exponent p, const std::vector<double>& eps_grid,
                              const SamplingOptions& opts);

/// Quadruple form d(m(x0,x1), m(y0,y1)) <= M^p(d(x0,y0), d(x1,y1)) and, for
/// finite p, the triple form d(m(x,z), m(y,z))^p <= d(x,y)^p / 2.
CheckReport check_busemann(const SpaceHandle& s, Exponent p, const SamplingOptions& opts);

// Constant used in the scalar Clarkson inequality: 2^{-p} for p >= 2; for
// 1 < p < 2 the best constant of the conjugate form, found numerically and cached.
double clarkson_constant(double p);

/// Scalar Clarkson inequality on sampled pairs a, b in [0, 1].
CheckReport check_clarkson(double p, const SamplingOptions& opts);

/// Transfers the empirical modulus at p to a modulus bound at p' >= p and
/// checks that bound on the same sample pool.
CheckReport check_p_implies_pprime(const SpaceHandle& s, Exponent p, Exponent p_prime,
                                   const std::vector<double>& eps_grid,
                                   const SamplingOptions& opts);

/// Nearly-uniform-convexity probe on a finite epsilon-separated family:
/// rho_emp = 1 - r_hull(center) / r with r = max_i d(center, x_i).
CheckReport check_nearly_uniform(const SpaceHandle& s, const std::vector<Point>& family,
                                 const Point& center, double epsilon, std::size_t hull_depth,
                                 std::uint64_t seed = 0);

}  // namespace uconvex
