#include "uconvex/barycenters.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>

#include "uconvex/error.hpp"
#include "uconvex/sets.hpp"

namespace uconvex {

double variance(const SpaceHandle& s, const DiscreteMeasure& mu, const Point& y, double p) {
  if (!(p >= 1.0) || !std::isfinite(p)) throw DomainError("variance needs 1 <= p < inf");
  double v = 0.0;
  for (std::size_t i = 0; i < mu.size(); ++i) {
    v += mu.weights()[i] * std::pow(s->distance(mu.support()[i], y), p);
  }
  return v;
}

double fw_objective(const SpaceHandle& s, const DiscreteMeasure& mu, const Point& y,
                    const Point& w_ref, double p) {
  if (!(p >= 1.0) || !std::isfinite(p)) throw DomainError("fw_objective needs 1 <= p < inf");
  double v = 0.0;
  for (std::size_t i = 0; i < mu.size(); ++i) {
    const auto& x = mu.support()[i];
    v += mu.weights()[i] * (std::pow(s->distance(x, y), p) - std::pow(s->distance(x, w_ref), p));
  }
  return v;
}

double orlicz_distance_to_dirac(const SpaceHandle& s, const DiscreteMeasure& mu, const Point& y,
                                const OrliczFunction& L) {
  std::vector<double> d(mu.size());
  for (std::size_t i = 0; i < mu.size(); ++i) d[i] = s->distance(mu.support()[i], y);
  return orlicz_gauge(L, d, mu.weights());
}

namespace {

using Objective = std::function<double(const Point&)>;
// Weights over the anchors defining the next inductive-mean target; an empty
// vector disables the target step.
using TargetWeights = std::function<std::vector<double>(const Point&)>;

// Weighted geodesic mean built by successive geodesic interpolation. Exact
// weighted average in coordinate spaces.
std::optional<Point> inductive_mean(const SpaceHandle& s, const std::vector<Point>& anchors,
                                    const std::vector<double>& weights) {
  std::optional<Point> z;
  double acc = 0.0;
  for (std::size_t i = 0; i < anchors.size(); ++i) {
    const double w = weights[i];
    if (!(w > 0.0) || !std::isfinite(w)) continue;
    if (!z) {
      z = anchors[i];
      acc = w;
      continue;
    }
    if (!s->geodesic_supported(*z, anchors[i])) continue;
    acc += w;
    z = s->geodesic_point(*z, anchors[i], w / acc);
  }
  return z;
}

struct LineResult {
  Point point;
  double value;
};

// Golden-section minimization of t -> f(gamma(y, z, t)) on [0, 1]; endpoints
// are compared explicitly so that an optimum at t = 1 is found exactly.
LineResult line_search(const SpaceHandle& s, const Objective& f, const Point& y, double fy,
                       const Point& z, double length, double tol) {
  constexpr double inv_phi = 0.6180339887498948482;
  auto at = [&](double t) { return s->geodesic_point(y, z, t); };
  LineResult best{y, fy};
  const double f_end = f(z);
  if (f_end < best.value) best = {z, f_end};

  double lo = 0.0;
  double hi = 1.0;
  double x1 = hi - inv_phi;
  double x2 = inv_phi;
  double f1 = f(at(x1));
  double f2 = f(at(x2));
  const double stop = 0.01 * tol / std::max(length, 1e-300);
  for (int it = 0; it < 120 && (hi - lo) > stop; ++it) {
    if (f1 <= f2) {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - inv_phi * (hi - lo);
      f1 = f(at(x1));
    } else {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + inv_phi * (hi - lo);
      f2 = f(at(x2));
    }
  }
  const double t = f1 <= f2 ? x1 : x2;
  const double ft = std::min(f1, f2);
  if (ft < best.value) best = {at(t), ft};
  return best;
}

struct DescentProblem {
  const SpaceHandle& s;
  const std::vector<Point>& anchors;
  Objective f;
  TargetWeights target;
};

std::size_t argmin_anchor(const DescentProblem& prob) {
  std::size_t best = 0;
  double best_f = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < prob.anchors.size(); ++i) {
    const double v = prob.f(prob.anchors[i]);
    if (v < best_f) {
      best_f = v;
      best = i;
    }
  }
  return best;
}

// Objective values stop separating points once they are ~sqrt(eps) * scale
// apart. Along each chart coordinate the sign of a symmetric difference is
// still informative there, so bisecting on it locates a smooth (or kinked
// one-dimensional) minimum well below that resolution.
void polish(const DescentProblem& prob, Point& y, double& fy, double scale, double tol,
            std::vector<double>& trace) {
  const SpaceHandle& s = prob.s;
  const double eta = 1e-5 * scale;
  const double reach = 1e-6 * scale;
  auto eval = [&](std::vector<double> c, std::size_t j, double step) -> std::optional<double> {
    c[j] += step;
    try {
      return prob.f(s->from_chart(c));
    } catch (const DomainError&) {
      return std::nullopt;
    }
  };
  for (int cycle = 0; cycle < 20; ++cycle) {
    double moved = 0.0;
    for (std::size_t j = 0; j < s->chart_dimension(); ++j) {
      const auto chart = s->to_chart(y);
      auto slope = [&](double x) -> std::optional<double> {
        const auto up = eval(chart, j, x + eta);
        const auto down = eval(chart, j, x - eta);
        if (!up || !down) return std::nullopt;
        return *up - *down;
      };
      const auto sl = slope(-reach);
      const auto sr = slope(reach);
      if (!sl || !sr || *sl > 0.0 || *sr < 0.0) continue;
      double lo = -reach;
      double hi = reach;
      for (int it = 0; it < 80 && hi - lo > 1e-3 * tol; ++it) {
        const double mid = 0.5 * (lo + hi);
        const auto sm = slope(mid);
        if (!sm) break;
        (*sm > 0.0 ? hi : lo) = mid;
      }
      auto c = chart;
      c[j] += 0.5 * (lo + hi);
      Point cand;
      try {
        cand = s->from_chart(c);
      } catch (const DomainError&) {
        continue;
      }
      const double fc = prob.f(cand);
      // Accept ties within rounding: the bisection is the better locator there.
      if (fc <= fy + 4e-16 * (1.0 + std::abs(fy))) {
        moved = std::max(moved, s->distance(y, cand));
        y = std::move(cand);
        fy = fc;
        trace.push_back(fy);
      }
    }
    if (moved < 1e-3 * tol) break;
  }
}

// Geodesic descent: each round tries (a) a line search toward the support
// point with the steepest initial decrease and (b) a line search toward the
// inductive-mean target; once geodesic steps stall, a coordinate pattern
// search in the space chart with halving step decides convergence.
BarycenterResult descend(const DescentProblem& prob, const DescentOptions& opts) {
  const SpaceHandle& s = prob.s;
  if (prob.anchors.empty()) throw DomainError("descent needs a nonempty support");
  if (!(opts.tol > 0.0)) throw DomainError("descent needs tol > 0");

  Point y = prob.anchors[argmin_anchor(prob)];
  double scale = 0.0;
  for (const auto& a : prob.anchors)
    for (const auto& b : prob.anchors) scale = std::max(scale, s->distance(a, b));
  if (opts.random_start && scale > 0.0) {
    Rng rng = stream_rng(opts.seed, 0x5eed);
    y = s->sample_point(rng, y, scale);
  }
  double fy = prob.f(y);

  BarycenterResult result;
  result.global = s->convexity_certified();
  result.trace.push_back(fy);
  if (scale == 0.0) {
    result.point = y;
    result.value = fy;
    result.converged = true;
    return result;
  }

  double h = 0.25 * scale;
  auto improves = [](double candidate, double current) {
    return candidate < current - 1e-15 * std::abs(current);
  };

  std::size_t iter = 0;
  for (; iter < opts.max_iter; ++iter) {
    LineResult best{y, fy};

    // (a) support point with the steepest probed decrease.
    double best_slope = 0.0;
    std::optional<std::size_t> best_anchor;
    for (std::size_t i = 0; i < prob.anchors.size(); ++i) {
      const Point& x = prob.anchors[i];
      const double d = s->distance(y, x);
      if (d == 0.0 || !s->geodesic_supported(y, x)) continue;
      const double tau = std::min(1.0, std::max(h, opts.tol) / d);
      const double slope = (fy - prob.f(s->geodesic_point(y, x, tau))) / (tau * d);
      if (slope > best_slope) {
        best_slope = slope;
        best_anchor = i;
      }
    }
    if (best_anchor) {
      const Point& x = prob.anchors[*best_anchor];
      auto cand = line_search(s, prob.f, y, fy, x, s->distance(y, x), opts.tol);
      if (cand.value < best.value) best = std::move(cand);
    }

    // (b) inductive-mean target.
    if (prob.target) {
      const auto w = prob.target(y);
      if (!w.empty()) {
        if (auto z = inductive_mean(s, prob.anchors, w)) {
          const double len = s->distance(y, *z);
          if (len > 0.0 && s->geodesic_supported(y, *z)) {
            auto cand = line_search(s, prob.f, y, fy, *z, len, opts.tol);
            if (cand.value < best.value) best = std::move(cand);
          }
        }
      }
    }

    if (improves(best.value, fy)) {
      const double moved = s->distance(y, best.point);
      y = std::move(best.point);
      fy = best.value;
      result.trace.push_back(fy);
      if (moved > opts.tol) continue;
    }

    // (c) coordinate pattern search.
    bool pattern_moved = false;
    auto chart = s->to_chart(y);
    for (std::size_t j = 0; j < chart.size(); ++j) {
      for (double sign : {1.0, -1.0}) {
        auto trial = chart;
        trial[j] += sign * h;
        const Point cand = s->from_chart(trial);
        const double fc = prob.f(cand);
        if (improves(fc, fy)) {
          y = cand;
          fy = fc;
          result.trace.push_back(fy);
          chart = s->to_chart(y);
          pattern_moved = true;
          break;
        }
      }
    }
    if (!pattern_moved) {
      h *= 0.5;
      if (h < opts.tol) {
        result.converged = true;
        ++iter;
        break;
      }
    }
  }

  polish(prob, y, fy, scale, opts.tol, result.trace);
  result.point = std::move(y);
  result.value = prob.f(result.point);
  result.iterations = iter;
  return result;
}

void check_measure(const SpaceHandle& s, const DiscreteMeasure& mu) { mu.validate_in(s); }

}  // namespace

BarycenterResult barycenter_p(const SpaceHandle& s, const DiscreteMeasure& mu, double p,
                              const DescentOptions& opts) {
  if (!(p > 1.0) || !std::isfinite(p)) {
    throw DomainError("barycenter_p needs 1 < p < inf (use barycenter_median for p = 1)");
  }
  check_measure(s, mu);
  DescentProblem prob{
      s, mu.support(), [&](const Point& y) { return variance(s, mu, y, p); },
      [&](const Point& y) {
        // Fixed-point weights w_i d_i^{p-2}; exact in one step for p = 2 in
        // coordinate spaces.
        std::vector<double> w(mu.size());
        for (std::size_t i = 0; i < mu.size(); ++i) {
          const double d = s->distance(mu.support()[i], y);
          w[i] = d == 0.0 ? (p >= 2.0 ? (p == 2.0 ? mu.weights()[i] : 0.0) : 0.0)
                          : mu.weights()[i] * std::pow(d, p - 2.0);
        }
        return w;
      }};
  return descend(prob, opts);
}

bool support_collinear(const SpaceHandle& s, const std::vector<Point>& support, double tol) {
  if (support.size() <= 2) return true;
  std::size_t ia = 0;
  std::size_t ib = 0;
  double far = -1.0;
  for (std::size_t i = 0; i < support.size(); ++i) {
    for (std::size_t j = i + 1; j < support.size(); ++j) {
      const double d = s->distance(support[i], support[j]);
      if (d > far) {
        far = d;
        ia = i;
        ib = j;
      }
    }
  }
  if (far == 0.0) return true;
  if (!s->geodesic_supported(support[ia], support[ib])) return false;
  for (const auto& x : support) {
    const auto proj = project_to_segment(s, x, support[ia], support[ib], 1e-3 * tol);
    if (proj.distance > tol) return false;
  }
  return true;
}

BarycenterResult barycenter_median(const SpaceHandle& s, const DiscreteMeasure& mu,
                                   const DescentOptions& opts) {
  check_measure(s, mu);
  DescentProblem prob{s, mu.support(), [&](const Point& y) { return variance(s, mu, y, 1.0); },
                      [&](const Point& y) {
                        // Weiszfeld weights w_i / d_i, skipping coincident points.
                        std::vector<double> w(mu.size(), 0.0);
                        for (std::size_t i = 0; i < mu.size(); ++i) {
                          const double d = s->distance(mu.support()[i], y);
                          if (d > 0.0) w[i] = mu.weights()[i] / d;
                        }
                        return w;
                      }};
  auto result = descend(prob, opts);
  // Distinct support points only; duplicates do not change collinearity.
  std::vector<Point> distinct;
  for (const auto& x : mu.support()) {
    if (std::none_of(distinct.begin(), distinct.end(),
                     [&](const Point& z) { return s->distance(x, z) == 0.0; })) {
      distinct.push_back(x);
    }
  }
  result.unique = distinct.size() == 1 || !support_collinear(s, distinct, std::max(opts.tol, 1e-9));
  return result;
}

BarycenterResult circumcenter(const SpaceHandle& s, const std::vector<Point>& points,
                              const DescentOptions& opts) {
  if (points.empty()) throw DomainError("circumcenter needs at least one point");
  for (const auto& x : points) s->validate(x);
  // Lawson-style reweighting: each call multiplies the weights by the current
  // distances, concentrating mass on the farthest points.
  auto lawson = std::make_shared<std::vector<double>>(points.size(), 1.0);
  DescentProblem prob{s, points,
                      [&](const Point& y) {
                        double r = 0.0;
                        for (const auto& x : points) r = std::max(r, s->distance(x, y));
                        return r;
                      },
                      [&, lawson](const Point& y) {
                        auto& w = *lawson;
                        double total = 0.0;
                        for (std::size_t i = 0; i < points.size(); ++i) {
                          w[i] *= s->distance(points[i], y);
                          total += w[i];
                        }
                        if (!(total > 0.0)) {
                          std::fill(w.begin(), w.end(), 1.0);
                          return w;
                        }
                        for (auto& v : w) v /= total;
                        return w;
                      }};
  return descend(prob, opts);
}

BarycenterResult barycenter_orlicz(const SpaceHandle& s, const DiscreteMeasure& mu,
                                   const OrliczFunction& L, const DescentOptions& opts) {
  check_measure(s, mu);
  DescentProblem prob{s, mu.support(),
                      [&](const Point& y) { return orlicz_distance_to_dirac(s, mu, y, L); },
                      [&](const Point& y) {
                        const double t = orlicz_distance_to_dirac(s, mu, y, L);
                        std::vector<double> w(mu.size(), 0.0);
                        if (!(t > 0.0)) return w;
                        for (std::size_t i = 0; i < mu.size(); ++i) {
                          const double d = s->distance(mu.support()[i], y);
                          if (d > 0.0) w[i] = mu.weights()[i] * L.derivative(d / t) / d;
                        }
                        return w;
                      }};
  return descend(prob, opts);
}

DiscreteMeasure random_measure(const SpaceHandle& s, Rng& rng, std::size_t size, double radius) {
  if (size == 0) throw DomainError("random_measure needs size >= 1");
  std::vector<Point> pts;
  std::vector<double> w;
  std::exponential_distribution<double> expo(1.0);
  double total = 0.0;
  const Point o = s->origin();
  for (std::size_t i = 0; i < size; ++i) {
    pts.push_back(s->sample_point(rng, o, radius));
    w.push_back(expo(rng) + 1e-3);
    total += w.back();
  }
  for (auto& v : w) v /= total;
  return DiscreteMeasure(std::move(pts), std::move(w));
}

CheckReport jensen_contraction_check(const SpaceHandle& s, const DiscreteMeasure& mu,
                                     const DiscreteMeasure& nu, double p,
                                     std::size_t n_instances, std::uint64_t seed) {
  if (s->kind() != SpaceKind::euclidean) {
    throw DomainError("jensen_contraction_check is certified for euclidean spaces only");
  }
  CheckReport report;
  report.property = "jensen-contraction";
  report.p = Exponent::finite(p).str();
  DescentOptions dopts;
  dopts.tol = 1e-11;
  auto check_pair = [&](const DiscreteMeasure& a, const DiscreteMeasure& b) {
    const auto ba = barycenter_p(s, a, 2.0, dopts);
    const auto bb = barycenter_p(s, b, 2.0, dopts);
    const double lhs = s->distance(ba.point, bb.point);
    const double rhs = wasserstein_p(s, a, b, p).value;
    report.observe(lhs - rhs, 1e-7, {ba.point, bb.point});
  };
  check_pair(mu, nu);
  Rng rng = stream_rng(seed, 0x1e45e);
  std::uniform_int_distribution<std::size_t> size(1, 6);
  for (std::size_t k = 0; k < n_instances; ++k) {
    const auto a = random_measure(s, rng, size(rng));
    const auto b = random_measure(s, rng, size(rng));
    check_pair(a, b);
  }
  report.metrics["tolerance"] = 1e-7;
  report.finalize();
  return report;
}

}  // namespace uconvex
