#include "uconvex/convexity.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <mutex>
#include <sstream>

#include "uconvex/error.hpp"
#include "uconvex/sets.hpp"

namespace uconvex {

const char* to_string(CheckStatus status) {
  switch (status) {
    case CheckStatus::pass:
      return "pass";
    case CheckStatus::fail:
      return "fail";
    case CheckStatus::inconclusive:
      return "inconclusive";
  }
  return "unknown";
}

namespace {

Point sampling_center(const SpaceHandle& s, const SamplingOptions& opts) {
  Point c = opts.center ? *opts.center : s->origin();
  s->validate(c);
  return c;
}

// Draws points until every consecutive pair needed for midpoints is supported.
std::vector<Point> draw(const SpaceHandle& s, Rng& rng, const Point& center, double radius,
                        std::size_t count) {
  std::vector<Point> pts;
  pts.reserve(count);
  for (std::size_t i = 0; i < count; ++i) pts.push_back(s->sample_point(rng, center, radius));
  return pts;
}

// Shared driver for "midpoint below a two-argument mean" inequalities.
CheckReport check_mean_convexity(const SpaceHandle& s, std::string property, std::string p_label,
                                 const std::function<double(double, double)>& mean,
                                 const SamplingOptions& opts) {
  const Point center = sampling_center(s, opts);
  auto chunks = run_chunked<CheckReport>(
      opts.samples, kSamplesPerStream, opts.threads, opts.seed,
      [&](Rng& rng, std::size_t begin, std::size_t end) {
        CheckReport local;
        for (std::size_t k = begin; k < end; ++k) {
          auto pts = draw(s, rng, center, opts.radius, 3);
          if (!s->geodesic_supported(pts[0], pts[1])) continue;
          const Point m = s->midpoint(pts[0], pts[1]);
          const double lhs = s->distance(m, pts[2]);
          const double rhs = mean(s->distance(pts[0], pts[2]), s->distance(pts[1], pts[2]));
          local.observe(lhs - rhs, opts.tol, pts);
        }
        return local;
      });
  CheckReport report;
  report.property = std::move(property);
  report.p = std::move(p_label);
  for (const auto& c : chunks) report.merge(c);
  report.metrics["tolerance"] = opts.tol;
  report.finalize();
  return report;
}

}  // namespace

CheckReport check_p_convexity(const SpaceHandle& s, Exponent p, const SamplingOptions& opts) {
  return check_mean_convexity(
      s, "p-convexity", p.str(), [p](double a, double b) { return p_mean(p, a, b); }, opts);
}

CheckReport check_l_convexity(const SpaceHandle& s, const OrliczFunction& L, bool orlicz,
                              const SamplingOptions& opts) {
  if (orlicz) {
    return check_mean_convexity(
        s, "orlicz-l-convexity", L.descriptor(),
        [&L](double a, double b) { return orlicz_mean(L, a, b); }, opts);
  }
  return check_mean_convexity(
      s, "l-convexity", L.descriptor(), [&L](double a, double b) { return l_mean(L, a, b); },
      opts);
}

bool modulus_trigger(Exponent p, double eps, double dxy, double dxz, double dyz) {
  if (!p.is_infinite() && p.value() == 1.0) {
    return dxy > std::abs(dxz - dyz) + eps * p_mean(p, dxz, dyz);
  }
  return dxy > eps * p_mean(p, dxz, dyz);
}

namespace {

struct ModulusChunk {
  std::optional<double> rho;
  std::vector<Point> witness;
  std::size_t samples = 0;
  std::size_t attempts = 0;
};

std::optional<double> tilde_from(Exponent p, std::optional<double> rho) {
  if (!rho || p.is_infinite()) return std::nullopt;
  return 1.0 - std::pow(1.0 - *rho, p.value());
}

void check_grid(const std::vector<double>& eps_grid) {
  if (eps_grid.empty()) throw DomainError("epsilon grid is empty");
  for (std::size_t i = 0; i < eps_grid.size(); ++i) {
    if (!(eps_grid[i] > 0.0)) throw DomainError("epsilon values must be positive");
    if (i > 0 && !(eps_grid[i] > eps_grid[i - 1])) {
      throw DomainError("epsilon grid must be strictly increasing");
    }
  }
}

// Suffix minimum: a triple qualifying at a larger epsilon also qualifies at
// every smaller one, so its deficit bounds the modulus there too.
void apply_envelope(ModulusTable& table) {
  std::optional<double> running;
  for (auto it = table.rows.rbegin(); it != table.rows.rend(); ++it) {
    if (it->rho_raw) running = running ? std::min(*running, *it->rho_raw) : *it->rho_raw;
    it->rho_hat = running;
    it->rho_tilde = tilde_from(table.p, running);
  }
}

}  // namespace

ModulusTable estimate_modulus(const SpaceHandle& s, Exponent p, const std::vector<double>& eps_grid,
                              const SamplingOptions& opts) {
  check_grid(eps_grid);
  const Point center = sampling_center(s, opts);
  const std::size_t cap = std::max<std::size_t>(1000000, opts.samples);

  ModulusTable table;
  table.p = p;
  for (std::size_t e = 0; e < eps_grid.size(); ++e) {
    const double eps = eps_grid[e];
    const std::uint64_t seed = mix_seed(opts.seed) ^ mix_seed(1000003ULL * (e + 1));
    auto chunks = run_chunked<ModulusChunk>(
        opts.samples, kSamplesPerStream, opts.threads, seed,
        [&](Rng& rng, std::size_t begin, std::size_t end) {
          ModulusChunk local;
          const std::size_t want = end - begin;
          const std::size_t chunk_cap = std::max<std::size_t>(want, cap * want / opts.samples);
          while (local.samples < want && local.attempts < chunk_cap) {
            ++local.attempts;
            auto pts = draw(s, rng, center, opts.radius, 3);
            const double dxy = s->distance(pts[0], pts[1]);
            if (dxy == 0.0 || !s->geodesic_supported(pts[0], pts[1])) continue;
            const double dxz = s->distance(pts[0], pts[2]);
            const double dyz = s->distance(pts[1], pts[2]);
            if (!modulus_trigger(p, eps, dxy, dxz, dyz)) continue;
            ++local.samples;
            const double mean = p_mean(p, dxz, dyz);
            const double deficit = 1.0 - s->distance(s->midpoint(pts[0], pts[1]), pts[2]) / mean;
            if (!local.rho || deficit < *local.rho) {
              local.rho = deficit;
              local.witness = std::move(pts);
            }
          }
          return local;
        });
    ModulusRow row;
    row.epsilon = eps;
    for (auto& c : chunks) {
      row.samples += c.samples;
      row.attempts += c.attempts;
      if (c.rho && (!row.rho_raw || *c.rho < *row.rho_raw)) {
        row.rho_raw = c.rho;
        row.witness = std::move(c.witness);
      }
    }
    table.rows.push_back(std::move(row));
  }
  apply_envelope(table);
  return table;
}

CheckReport check_busemann(const SpaceHandle& s, Exponent p, const SamplingOptions& opts) {
  const Point center = sampling_center(s, opts);
  const bool triple_form = !p.is_infinite();
  const double half_root = triple_form ? std::pow(0.5, 1.0 / p.value()) : 0.0;
  auto chunks = run_chunked<CheckReport>(
      opts.samples, kSamplesPerStream, opts.threads, opts.seed,
      [&](Rng& rng, std::size_t begin, std::size_t end) {
        CheckReport local;
        for (std::size_t k = begin; k < end; ++k) {
          auto pts = draw(s, rng, center, opts.radius, 4);
          const Point &x0 = pts[0], &x1 = pts[1], &y0 = pts[2], &y1 = pts[3];
          if (!s->geodesic_supported(x0, x1) || !s->geodesic_supported(y0, y1)) continue;
          const double lhs = s->distance(s->midpoint(x0, x1), s->midpoint(y0, y1));
          const double rhs = p_mean(p, s->distance(x0, y0), s->distance(x1, y1));
          double excess = lhs - rhs;
          if (triple_form && s->geodesic_supported(x0, y0) && s->geodesic_supported(x1, y0)) {
            // m1 = m(x, z), m2 = m(y, z) with (x, y, z) = (x0, x1, y0)
            const double d12 = s->distance(s->midpoint(x0, y0), s->midpoint(x1, y0));
            excess = std::max(excess, d12 - half_root * s->distance(x0, x1));
          }
          local.observe(excess, opts.tol, pts);
        }
        return local;
      });
  CheckReport report;
  report.property = "busemann";
  report.p = p.str();
  for (const auto& c : chunks) report.merge(c);
  report.metrics["tolerance"] = opts.tol;
  if (triple_form) report.notes.push_back("quadruple and triple forms checked");
  report.finalize();
  return report;
}

namespace {

// Conjugate-form constant: inf over a + b = 1, a != b of
// (M^p(a,b)^q - 2^{-q}) / |a - b|^q with q = p / (p - 1).
double conjugate_clarkson_constant(double p) {
  const double q = p / (p - 1.0);
  auto ratio = [&](double delta) {
    const double a = 0.5 + delta;
    const double b = 0.5 - delta;
    return (std::pow(p_mean(p, a, b), q) - std::pow(0.5, q)) / std::pow(2.0 * delta, q);
  };
  constexpr int kGrid = 20000;
  double best_delta = 0.5;
  double best = ratio(0.5);
  for (int k = 1; k < kGrid; ++k) {
    const double delta = 0.5 * static_cast<double>(k) / kGrid;
    const double r = ratio(delta);
    if (r < best) {
      best = r;
      best_delta = delta;
    }
  }
  // Golden-section refinement around the best grid cell.
  double lo = std::max(1e-9, best_delta - 0.5 / kGrid);
  double hi = std::min(0.5, best_delta + 0.5 / kGrid);
  constexpr double inv_phi = 0.6180339887498948482;
  for (int it = 0; it < 100; ++it) {
    const double x1 = hi - inv_phi * (hi - lo);
    const double x2 = lo + inv_phi * (hi - lo);
    if (ratio(x1) <= ratio(x2)) {
      hi = x2;
    } else {
      lo = x1;
    }
  }
  best = std::min(best, ratio(0.5 * (lo + hi)));
  return best * (1.0 - 1e-12);
}

}  // namespace

double clarkson_constant(double p) {
  if (!(p > 1.0) || !std::isfinite(p)) throw DomainError("Clarkson constant needs 1 < p < inf");
  if (p >= 2.0) return std::pow(2.0, -p);
  static std::mutex mutex;
  static std::map<double, double> cache;
  std::lock_guard lock(mutex);
  auto it = cache.find(p);
  if (it != cache.end()) return it->second;
  const double c = conjugate_clarkson_constant(p);
  cache.emplace(p, c);
  return c;
}

CheckReport check_clarkson(double p, const SamplingOptions& opts) {
  const double c = clarkson_constant(p);
  const bool conjugate = p < 2.0;
  const double q = conjugate ? p / (p - 1.0) : p;
  auto chunks = run_chunked<CheckReport>(
      opts.samples, kSamplesPerStream, opts.threads, opts.seed,
      [&](Rng& rng, std::size_t begin, std::size_t end) {
        CheckReport local;
        for (std::size_t k = begin; k < end; ++k) {
          const double a = uniform01(rng);
          const double b = uniform01(rng);
          const double lhs = std::pow(0.5 * a + 0.5 * b, q) + c * std::pow(std::abs(a - b), q);
          const double rhs = conjugate ? std::pow(p_mean(p, a, b), q)
                                       : 0.5 * std::pow(a, p) + 0.5 * std::pow(b, p);
          local.observe(lhs - rhs, opts.tol, {vec({a}), vec({b})});
        }
        return local;
      });
  CheckReport report;
  report.property = conjugate ? "clarkson-conjugate" : "clarkson";
  report.p = Exponent::finite(p).str();
  for (const auto& ch : chunks) report.merge(ch);
  report.metrics["constant"] = c;
  report.metrics["tolerance"] = opts.tol;
  report.finalize();
  return report;
}

namespace {

struct Triple {
  std::vector<Point> pts;
  double dxy, dxz, dyz, dmz;
};

}  // namespace

CheckReport check_p_implies_pprime(const SpaceHandle& s, Exponent p, Exponent p_prime,
                                   const std::vector<double>& eps_grid,
                                   const SamplingOptions& opts) {
  check_grid(eps_grid);
  if (p_prime < p) throw DomainError("check_p_implies_pprime needs p' >= p");

  CheckReport report;
  report.property = "uniform-p-to-pprime";
  report.p = p.str() + "->" + p_prime.str();

  const bool from_one = !p.is_infinite() && p.value() == 1.0 && !(p_prime == p);
  if (from_one && p_prime.is_infinite()) {
    report.status = CheckStatus::inconclusive;
    report.notes.push_back("p = 1 -> p' = inf has no recipe here; not checked");
    return report;
  }

  // One pool of triples serves both the modulus estimate at p and the check at p'.
  const Point center = sampling_center(s, opts);
  auto chunks = run_chunked<std::vector<Triple>>(
      opts.samples, kSamplesPerStream, opts.threads, opts.seed,
      [&](Rng& rng, std::size_t begin, std::size_t end) {
        std::vector<Triple> local;
        for (std::size_t k = begin; k < end; ++k) {
          auto pts = draw(s, rng, center, opts.radius, 3);
          if (!s->geodesic_supported(pts[0], pts[1])) continue;
          Triple t{pts, s->distance(pts[0], pts[1]), s->distance(pts[0], pts[2]),
                   s->distance(pts[1], pts[2]), 0.0};
          if (t.dxy == 0.0) continue;
          t.dmz = s->distance(s->midpoint(pts[0], pts[1]), pts[2]);
          local.push_back(std::move(t));
        }
        return local;
      });
  std::vector<Triple> pool;
  for (auto& c : chunks) std::move(c.begin(), c.end(), std::back_inserter(pool));

  auto empirical_rho = [&](double eps) -> std::optional<double> {
    std::optional<double> rho;
    for (const auto& t : pool) {
      if (!modulus_trigger(p, eps, t.dxy, t.dxz, t.dyz)) continue;
      const double deficit = 1.0 - t.dmz / p_mean(p, t.dxz, t.dyz);
      if (!rho || deficit < *rho) rho = deficit;
    }
    return rho;
  };

  std::vector<double> rho_used;
  bool degenerate = false;
  for (double eps : eps_grid) {
    std::optional<double> rho;
    if (!from_one) {
      rho = empirical_rho(eps);
    } else {
      const auto rho1 = empirical_rho(0.5 * eps);
      if (rho1) {
        const double pp = p_prime.value();
        double clarkson_part;
        if (pp >= 2.0) {
          clarkson_part = 1.0 - std::pow(1.0 - clarkson_constant(pp) * std::pow(0.5 * eps, pp),
                                         1.0 / pp);
        } else {
          const double q = pp / (pp - 1.0);
          clarkson_part =
              1.0 - std::pow(1.0 - clarkson_constant(pp) * std::pow(0.5 * eps, q), 1.0 / q);
        }
        rho = std::min(*rho1, clarkson_part);
      }
    }
    if (!rho) {
      report.notes.push_back("no qualifying triples at eps=" + std::to_string(eps));
      rho_used.push_back(std::nan(""));
      degenerate = true;
      continue;
    }
    rho_used.push_back(*rho);
    if (*rho <= 1e-6) degenerate = true;
    for (const auto& t : pool) {
      if (!modulus_trigger(p_prime, eps, t.dxy, t.dxz, t.dyz)) continue;
      const double bound = (1.0 - *rho) * p_mean(p_prime, t.dxz, t.dyz);
      report.observe(t.dmz - bound, opts.tol, t.pts);
    }
  }
  report.series["epsilon"] = eps_grid;
  report.series["rho_pprime"] = rho_used;
  report.metrics["tolerance"] = opts.tol;
  report.finalize();
  if (degenerate && report.status == CheckStatus::pass) {
    report.status = CheckStatus::inconclusive;
    report.notes.push_back(
        "empirical modulus at p vanishes or is missing on part of the grid; the uniform bound "
        "is not demonstrated");
  }
  return report;
}

CheckReport check_nearly_uniform(const SpaceHandle& s, const std::vector<Point>& family,
                                 const Point& center, double epsilon, std::size_t hull_depth,
                                 std::uint64_t seed) {
  if (family.size() < 2) throw DomainError("nearly-uniform check needs at least two points");
  s->validate(center);
  for (std::size_t i = 0; i < family.size(); ++i) {
    for (std::size_t j = i + 1; j < family.size(); ++j) {
      const double d = s->distance(family[i], family[j]);
      if (d < epsilon) {
        std::ostringstream msg;
        msg << "family is not epsilon-separated: d(x" << i << ", x" << j << ") = " << d << " < "
            << epsilon;
        throw DomainError(msg.str());
      }
    }
  }
  double r = 0.0;
  for (const auto& x : family) r = std::max(r, s->distance(center, x));

  HullOptions hopts;
  hopts.seed = seed;
  const auto hull = build_hull(s, family, hull_depth, hopts);
  const auto nearest = dist_to_set(s, center, hull);

  CheckReport report;
  report.property = "nearly-uniform-convexity";
  report.samples = hull.cloud.size();
  const double rho = 1.0 - nearest.distance / r;
  report.worst = -rho;
  report.witness = {nearest.point};
  report.metrics["radius"] = r;
  report.metrics["hull_distance"] = nearest.distance;
  report.metrics["rho_emp"] = rho;
  report.metrics["epsilon"] = epsilon;
  report.metrics["hull_points"] = static_cast<double>(hull.cloud.size());
  report.violations = rho > 0.0 ? 0 : 1;
  report.finalize();
  return report;
}

}  // namespace uconvex
