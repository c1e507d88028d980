#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "uconvex/barycenters.hpp"
#include "uconvex/report.hpp"
#include "uconvex/sets.hpp"
#include "uconvex/spaces.hpp"

namespace uconvex {

// Recipe for a finite sequence x_0, ..., x_{length-1}.
struct SequenceSpec {
  enum class Kind { explicit_points, orthonormal, constant, alternating, convergent };

  Kind kind = Kind::explicit_points;
  std::size_t length = 0;
  std::vector<Point> points;  // explicit_points
  double scale = 1.0;         // orthonormal: e_n * scale, or (e_n, scale) in a cone
  std::optional<Point> a;     // constant value; alternating even terms; convergent limit
  std::optional<Point> b;     // alternating odd terms; convergent start
  double ratio = 0.5;         // convergent: x_n = gamma(limit, start, ratio^n)

  static SequenceSpec explicit_list(std::vector<Point> pts);
  static SequenceSpec orthonormal(std::size_t length, double scale = 1.0);
  static SequenceSpec constant(Point x, std::size_t length);
  static SequenceSpec alternating(Point even, Point odd, std::size_t length);
  static SequenceSpec convergent(Point limit, Point start, double ratio, std::size_t length);

  std::string name() const;
  // Materializes the sequence, validating each point in `s`.
  std::vector<Point> generate(const SpaceHandle& s) const;
};

struct AsymCenterResult {
  Point center;
  double omega = 0.0;
  std::size_t tail_start = 0;
  bool converged = false;
  std::size_t iterations = 0;
};

// Minimizer of x -> max_{n >= tail_start} d(x, x_n).
AsymCenterResult asymptotic_center(const SpaceHandle& s, const SequenceSpec& seq,
                                   std::size_t tail_start, double tol = 1e-10);

struct TailOptions {
  double tol = 1e-6;
  // Defaults to length / 2.
  std::optional<std::size_t> tail_start;
  std::size_t subsequences = 16;
  std::uint64_t seed = 0;
  unsigned threads = 1;
};

std::size_t resolve_tail_start(const TailOptions& opts, std::size_t length);

// Random increasing index subsequences of [tail_start, length), each keeping
// half of the tail (at least one index).
std::vector<std::vector<std::size_t>> random_subsequences(std::size_t tail_start,
                                                          std::size_t length, std::size_t count,
                                                          std::uint64_t seed);

/// Passes when, for every probe y, the tail of P_{[candidate, y]} x_n stays
/// within tol of the candidate. Distances from the candidate to the
/// circumcenters of random tail subsequences are reported as metrics only.
CheckReport weak_seq_limit_test(const SpaceHandle& s, const SequenceSpec& seq,
                                const Point& candidate, const std::vector<Point>& probes,
                                const TailOptions& opts = {});

/// Compares min_{n >= tail_start} d(., x_n) at the weak limit and at each
/// competitor; margins are stored in series["margin"].
CheckReport opial_check(const SpaceHandle& s, const SequenceSpec& seq, const Point& weak_limit,
                        const std::vector<Point>& competitors, std::optional<std::size_t> tail_start);

struct CoconvexOptions {
  std::size_t hull_depth = 6;
  double tol = 1e-3;
  std::size_t subsequences = 16;
  std::optional<std::size_t> tail_start;
  std::uint64_t seed = 0;
  unsigned threads = 1;
  HullOptions hull;
};

struct CoconvexProbeResult {
  // distances[c][k]: candidate c to the hull of subsequence k.
  std::vector<std::vector<double>> distances;
  std::vector<bool> supported;
  std::vector<std::vector<std::size_t>> subsequences;
  std::vector<std::size_t> hull_sizes;
  CheckReport report;
};

CoconvexProbeResult coconvex_limit_probe(const SpaceHandle& s, const SequenceSpec& seq,
                                         const std::vector<Point>& candidates,
                                         const CoconvexOptions& opts = {});

struct ConeDemoRow {
  std::size_t n = 0;
  std::size_t m = 0;
  double projection_radius = 0.0;
};

struct ConeDemoReport {
  std::size_t n = 0;
  std::size_t hull_depth = 0;
  double cos1 = 0.0;
  double cossq = 0.0;
  double margin = 0.0;
  double r_half = 0.0;
  double midpoint_direction_norm = 0.0;
  // Largest deviation of the generator / midpoint projections from cos1 / cossq.
  double generator_projection_spread = 0.0;
  double midpoint_projection_spread = 0.0;
  bool inequality_holds = false;
  CoconvexProbeResult probe;
  std::vector<double> weak_grid;
  std::vector<bool> weak_passes;
  bool weak_limit_unique = false;
  std::vector<ConeDemoRow> rows;
};

/// Cone over R^N with x_n = (e_n, 1): ray projections, midpoint radii, the
/// co-convex probe of (0, cos 1) and (0, cos^2(sqrt2/2)), and the weak-limit
/// scan over ray candidates.
ConeDemoReport cone_counterexample_demo(std::size_t N, std::size_t hull_depth,
                                        std::uint64_t seed = 0, unsigned threads = 1);

struct BanachSaksResult {
  std::vector<std::size_t> prefix_lengths;
  std::vector<double> distances;
  std::vector<double> values;
  std::vector<Point> barycenters;
  Point reference;
  bool reference_from_center = false;
  bool decreasing = false;
  bool converged = false;
};

BanachSaksResult banach_saks_experiment(const SpaceHandle& s, const SequenceSpec& seq, double p,
                                        const std::vector<std::size_t>& prefix_lengths,
                                        std::optional<Point> reference = std::nullopt,
                                        double tol = 1e-10);

struct DyadicLevel {
  std::size_t level = 0;
  std::size_t block_size = 0;
  std::vector<double> block_values;
  double value = 0.0;  // minimum over blocks
};

struct DyadicResult {
  std::vector<DyadicLevel> levels;
  bool nondecreasing = false;
  bool converged = false;
};

/// Consecutive blocks of 2^N indices; V_N is the minimum of V over the blocks.
DyadicResult dyadic_merge_probe(const SpaceHandle& s, const SequenceSpec& seq, double p,
                                std::size_t levels, double tol = 1e-10);

}  // namespace uconvex
