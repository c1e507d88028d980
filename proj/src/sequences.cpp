#include "uconvex/sequences.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "uconvex/error.hpp"

namespace uconvex {

SequenceSpec SequenceSpec::explicit_list(std::vector<Point> pts) {
  SequenceSpec seq;
  seq.kind = Kind::explicit_points;
  seq.length = pts.size();
  seq.points = std::move(pts);
  return seq;
}

SequenceSpec SequenceSpec::orthonormal(std::size_t length, double scale) {
  SequenceSpec seq;
  seq.kind = Kind::orthonormal;
  seq.length = length;
  seq.scale = scale;
  return seq;
}

SequenceSpec SequenceSpec::constant(Point x, std::size_t length) {
  SequenceSpec seq;
  seq.kind = Kind::constant;
  seq.length = length;
  seq.a = std::move(x);
  return seq;
}

SequenceSpec SequenceSpec::alternating(Point even, Point odd, std::size_t length) {
  SequenceSpec seq;
  seq.kind = Kind::alternating;
  seq.length = length;
  seq.a = std::move(even);
  seq.b = std::move(odd);
  return seq;
}

SequenceSpec SequenceSpec::convergent(Point limit, Point start, double ratio, std::size_t length) {
  SequenceSpec seq;
  seq.kind = Kind::convergent;
  seq.length = length;
  seq.a = std::move(limit);
  seq.b = std::move(start);
  seq.ratio = ratio;
  return seq;
}

std::string SequenceSpec::name() const {
  switch (kind) {
    case Kind::explicit_points: return "explicit";
    case Kind::orthonormal: return "orthonormal";
    case Kind::constant: return "constant";
    case Kind::alternating: return "alternating";
    case Kind::convergent: return "convergent";
  }
  return "unknown";
}

std::vector<Point> SequenceSpec::generate(const SpaceHandle& s) const {
  if (length == 0) throw DomainError("sequence length must be >= 1");
  std::vector<Point> out;
  out.reserve(length);
  switch (kind) {
    case Kind::explicit_points:
      if (points.size() != length) throw DomainError("explicit sequence length mismatch");
      out = points;
      break;
    case Kind::orthonormal: {
      if (!(scale > 0.0)) throw DomainError("orthonormal sequence needs scale > 0");
      const bool cone = s->kind() == SpaceKind::cone;
      const std::size_t dim = cone ? s->chart_dimension() - 1 : s->chart_dimension();
      if (length > dim) {
        throw DomainError("orthonormal sequence of length " + std::to_string(length) +
                          " needs dimension >= length, space has " + std::to_string(dim));
      }
      for (std::size_t n = 0; n < length; ++n) {
        auto e = basis_vector(dim, n);
        if (cone) {
          out.push_back(cone_point(std::move(e), scale));
        } else {
          for (auto& v : e) v *= scale;
          out.push_back(vec(std::move(e)));
        }
      }
      break;
    }
    case Kind::constant:
      if (!a) throw DomainError("constant sequence needs a value");
      out.assign(length, *a);
      break;
    case Kind::alternating:
      if (!a || !b) throw DomainError("alternating sequence needs two values");
      for (std::size_t n = 0; n < length; ++n) out.push_back(n % 2 == 0 ? *a : *b);
      break;
    case Kind::convergent: {
      if (!a || !b) throw DomainError("convergent sequence needs a limit and a start");
      if (!(ratio > 0.0 && ratio < 1.0)) throw DomainError("convergent sequence needs 0 < ratio < 1");
      s->validate(*a);
      s->validate(*b);
      if (!s->geodesic_supported(*a, *b)) throw UnsupportedGeodesic("convergent sequence geodesic undefined");
      double t = 1.0;
      for (std::size_t n = 0; n < length; ++n) {
        out.push_back(s->geodesic_point(*a, *b, t));
        t *= ratio;
      }
      break;
    }
  }
  for (const auto& x : out) s->validate(x);
  return out;
}

AsymCenterResult asymptotic_center(const SpaceHandle& s, const SequenceSpec& seq,
                                   std::size_t tail_start, double tol) {
  const auto xs = seq.generate(s);
  if (tail_start >= xs.size()) throw DomainError("tail_start must be < sequence length");
  const std::vector<Point> tail(xs.begin() + static_cast<std::ptrdiff_t>(tail_start), xs.end());
  DescentOptions opts;
  opts.tol = tol;
  auto cc = circumcenter(s, tail, opts);
  return {cc.point, cc.value, tail_start, cc.converged, cc.iterations};
}

std::size_t resolve_tail_start(const TailOptions& opts, std::size_t length) {
  const std::size_t t = opts.tail_start.value_or(length / 2);
  if (t >= length) throw DomainError("tail_start must be < sequence length");
  return t;
}

std::vector<std::vector<std::size_t>> random_subsequences(std::size_t tail_start,
                                                          std::size_t length, std::size_t count,
                                                          std::uint64_t seed) {
  if (tail_start >= length) throw DomainError("tail_start must be < sequence length");
  const std::size_t tail = length - tail_start;
  const std::size_t keep = std::max<std::size_t>(1, tail / 2);
  std::vector<std::vector<std::size_t>> out;
  for (std::size_t k = 0; k < count; ++k) {
    Rng rng = stream_rng(seed, 0x5b5e9 + k);
    std::vector<std::size_t> idx(tail);
    std::iota(idx.begin(), idx.end(), tail_start);
    // Partial Fisher-Yates with our own draws keeps the result platform-stable.
    for (std::size_t i = 0; i < keep; ++i) {
      const std::size_t j = i + static_cast<std::size_t>(rng() % (tail - i));
      std::swap(idx[i], idx[j]);
    }
    idx.resize(keep);
    std::sort(idx.begin(), idx.end());
    out.push_back(std::move(idx));
  }
  return out;
}

CheckReport weak_seq_limit_test(const SpaceHandle& s, const SequenceSpec& seq,
                                const Point& candidate, const std::vector<Point>& probes,
                                const TailOptions& opts) {
  if (probes.empty()) throw DomainError("weak_seq_limit_test needs at least one probe");
  if (!(opts.tol > 0.0)) throw DomainError("tol must be > 0");
  s->validate(candidate);
  const auto xs = seq.generate(s);
  const std::size_t t0 = resolve_tail_start(opts, xs.size());

  CheckReport report;
  report.property = "weak-limit";
  std::vector<double> probe_sup;
  for (const auto& y : probes) {
    s->validate(y);
    if (s->distance(candidate, y) == 0.0) {
      report.notes.push_back("probe equal to the candidate skipped");
      probe_sup.push_back(0.0);
      continue;
    }
    if (!s->geodesic_supported(candidate, y)) {
      throw UnsupportedGeodesic("probe segment from the candidate is not a supported geodesic");
    }
    double sup = 0.0;
    std::vector<Point> worst_cfg;
    for (std::size_t n = t0; n < xs.size(); ++n) {
      const auto proj = project_to_segment(s, xs[n], candidate, y, 1e-12);
      const double d = s->distance(proj.point, candidate);
      if (d >= sup) {
        sup = d;
        worst_cfg = {xs[n], y, proj.point};
      }
    }
    report.observe(sup, opts.tol, worst_cfg);
    probe_sup.push_back(sup);
  }
  report.series["probe_sup_distance"] = probe_sup;

  // Diagnostic: circumcenters of random tail subsequences. Finite truncations
  // of weakly null sequences keep these away from the weak limit, so they do
  // not enter the verdict.
  const auto subs = random_subsequences(t0, xs.size(), opts.subsequences, opts.seed);
  auto centers = run_chunked<double>(subs.size(), 1, opts.threads, opts.seed,
                                     [&](Rng&, std::size_t begin, std::size_t) {
                                       std::vector<Point> pts;
                                       for (auto i : subs[begin]) pts.push_back(xs[i]);
                                       DescentOptions d;
                                       d.tol = 1e-9;
                                       return s->distance(circumcenter(s, pts, d).point, candidate);
                                     });
  report.series["subsequence_center_distance"] = centers;
  report.metrics["subsequence_center_max_distance"] =
      centers.empty() ? 0.0 : *std::max_element(centers.begin(), centers.end());
  report.metrics["tail_start"] = static_cast<double>(t0);
  report.metrics["tol"] = opts.tol;
  report.finalize();
  return report;
}

CheckReport opial_check(const SpaceHandle& s, const SequenceSpec& seq, const Point& weak_limit,
                        const std::vector<Point>& competitors, std::optional<std::size_t> tail_start) {
  s->validate(weak_limit);
  const auto xs = seq.generate(s);
  const std::size_t t0 = tail_start.value_or(xs.size() / 2);
  if (t0 >= xs.size()) throw DomainError("tail_start must be < sequence length");

  auto liminf = [&](const Point& y) {
    double m = std::numeric_limits<double>::infinity();
    for (std::size_t n = t0; n < xs.size(); ++n) m = std::min(m, s->distance(y, xs[n]));
    return m;
  };

  CheckReport report;
  report.property = "opial";
  const double base = liminf(weak_limit);
  std::vector<double> margins;
  for (const auto& y : competitors) {
    s->validate(y);
    if (s->distance(y, weak_limit) == 0.0) {
      report.notes.push_back("competitor equal to the weak limit skipped");
      continue;
    }
    const double margin = liminf(y) - base;
    margins.push_back(margin);
    // Strict inequality: a nonpositive margin is a violation.
    report.observe(-margin, -std::numeric_limits<double>::min(), {weak_limit, y});
  }
  report.series["margin"] = margins;
  report.metrics["liminf_at_limit"] = base;
  report.metrics["tail_start"] = static_cast<double>(t0);
  if (margins.empty()) {
    report.status = CheckStatus::inconclusive;
    report.notes.push_back("no competitor distinct from the weak limit");
  }
  report.finalize();
  return report;
}

CoconvexProbeResult coconvex_limit_probe(const SpaceHandle& s, const SequenceSpec& seq,
                                         const std::vector<Point>& candidates,
                                         const CoconvexOptions& opts) {
  if (!(opts.tol > 0.0)) throw DomainError("tol must be > 0");
  for (const auto& c : candidates) s->validate(c);
  const auto xs = seq.generate(s);
  const std::size_t t0 = opts.tail_start.value_or(xs.size() / 2);
  if (t0 >= xs.size()) throw DomainError("tail_start must be < sequence length");

  CoconvexProbeResult out;
  out.subsequences = random_subsequences(t0, xs.size(), opts.subsequences, opts.seed);

  struct Probe {
    std::vector<double> dist;
    std::size_t hull_size = 0;
  };
  auto probes = run_chunked<Probe>(
      out.subsequences.size(), 1, opts.threads, opts.seed, [&](Rng&, std::size_t k, std::size_t) {
        std::vector<Point> gens;
        for (auto i : out.subsequences[k]) gens.push_back(xs[i]);
        HullOptions h = opts.hull;
        h.seed = mix_seed(opts.seed ^ (0x4b11 + k));
        const auto hull = build_hull(s, std::move(gens), opts.hull_depth, h);
        Probe p;
        p.hull_size = hull.cloud.size();
        for (const auto& c : candidates) p.dist.push_back(dist_to_set(s, c, hull).distance);
        return p;
      });

  out.distances.assign(candidates.size(), {});
  for (const auto& p : probes) {
    out.hull_sizes.push_back(p.hull_size);
    for (std::size_t c = 0; c < candidates.size(); ++c) out.distances[c].push_back(p.dist[c]);
  }

  out.report.property = "coconvex-support";
  for (std::size_t c = 0; c < candidates.size(); ++c) {
    const auto& d = out.distances[c];
    const double worst = d.empty() ? 0.0 : *std::max_element(d.begin(), d.end());
    out.supported.push_back(worst <= opts.tol);
    out.report.observe(worst, opts.tol, {candidates[c]});
    out.report.series["max_distance"].push_back(worst);
  }
  out.report.metrics["tol"] = opts.tol;
  out.report.metrics["hull_depth"] = static_cast<double>(opts.hull_depth);
  out.report.metrics["tail_start"] = static_cast<double>(t0);
  out.report.finalize();
  return out;
}

ConeDemoReport cone_counterexample_demo(std::size_t N, std::size_t hull_depth, std::uint64_t seed,
                                        unsigned threads) {
  if (N < 4) throw DomainError("cone demo needs N >= 4");
  const auto s = make_cone(make_euclidean(N));
  const auto seq = SequenceSpec::orthonormal(N, 1.0);
  const auto xs = seq.generate(s);
  const std::vector<double> zero(N, 0.0);

  ConeDemoReport r;
  r.n = N;
  r.hull_depth = hull_depth;
  r.cos1 = cone_ray_projection(s, as_cone(xs[0])).radius;

  // Midpoint of (e_m, 1) and (e_n, 1); its projection radius is the second
  // candidate.
  const auto mid = as_cone(s->midpoint(xs[0], xs[1]));
  r.r_half = mid.radius;
  r.midpoint_direction_norm = std::sqrt(std::inner_product(
      mid.direction.begin(), mid.direction.end(), mid.direction.begin(), 0.0));
  r.cossq = cone_ray_projection(s, mid).radius;
  r.margin = r.cossq - r.cos1;
  r.inequality_holds = r.cos1 < r.cossq;

  for (std::size_t n = 0; n < N; ++n) {
    for (std::size_t m = 0; m <= n; ++m) {
      double radius;
      if (m == n) {
        radius = cone_ray_projection(s, as_cone(xs[n])).radius;
        r.generator_projection_spread = std::max(r.generator_projection_spread, std::abs(radius - r.cos1));
      } else {
        radius = cone_ray_projection(s, as_cone(s->midpoint(xs[m], xs[n]))).radius;
        r.midpoint_projection_spread = std::max(r.midpoint_projection_spread, std::abs(radius - r.cossq));
      }
      r.rows.push_back({n, m, radius});
    }
  }

  CoconvexOptions co;
  co.hull_depth = hull_depth;
  co.tol = 1e-3;
  co.seed = seed;
  co.threads = threads;
  r.probe = coconvex_limit_probe(s, seq, {cone_point(zero, r.cos1), cone_point(zero, r.cossq)}, co);

  // Ray candidates (0, t): the probe at the apex rejects t > cos 1, the probe
  // at (0, 2) rejects t < cos 1.
  TailOptions wt;
  wt.tol = 1e-6;
  wt.seed = seed;
  wt.threads = threads;
  wt.subsequences = 0;
  const std::vector<Point> probes{cone_point(zero, 0.0), cone_point(zero, 2.0)};
  for (int i = 0; i <= 20; ++i) r.weak_grid.push_back(0.05 * i);
  r.weak_grid.push_back(r.cos1);
  r.weak_grid.push_back(r.cossq);
  std::sort(r.weak_grid.begin(), r.weak_grid.end());
  std::size_t passes = 0;
  bool cos1_passes = false;
  for (double t : r.weak_grid) {
    const bool ok = weak_seq_limit_test(s, seq, cone_point(zero, t), probes, wt).passed();
    r.weak_passes.push_back(ok);
    if (ok) {
      ++passes;
      if (t == r.cos1) cos1_passes = true;
    }
  }
  r.weak_limit_unique = passes == 1 && cos1_passes;
  return r;
}

namespace {

BarycenterResult solve_barycenter(const SpaceHandle& s, const DiscreteMeasure& mu, double p,
                                  double tol) {
  DescentOptions d;
  d.tol = tol;
  return p == 1.0 ? barycenter_median(s, mu, d) : barycenter_p(s, mu, p, d);
}

}  // namespace

BanachSaksResult banach_saks_experiment(const SpaceHandle& s, const SequenceSpec& seq, double p,
                                        const std::vector<std::size_t>& prefix_lengths,
                                        std::optional<Point> reference, double tol) {
  if (!(p > 1.0) || !std::isfinite(p)) throw DomainError("banach_saks_experiment needs 1 < p < inf");
  if (prefix_lengths.empty()) throw DomainError("prefix_lengths must be nonempty");
  const auto xs = seq.generate(s);
  BanachSaksResult out;
  out.prefix_lengths = prefix_lengths;
  if (reference) {
    s->validate(*reference);
    out.reference = *reference;
  } else {
    out.reference = asymptotic_center(s, seq, 0, tol).center;
    out.reference_from_center = true;
  }
  out.converged = true;
  for (auto N : prefix_lengths) {
    if (N == 0 || N > xs.size()) throw DomainError("prefix length out of range: " + std::to_string(N));
    const auto mu = DiscreteMeasure::uniform({xs.begin(), xs.begin() + static_cast<std::ptrdiff_t>(N)});
    const auto b = solve_barycenter(s, mu, p, tol);
    out.converged = out.converged && b.converged;
    out.distances.push_back(s->distance(b.point, out.reference));
    out.values.push_back(b.value);
    out.barycenters.push_back(b.point);
  }
  out.decreasing = true;
  for (std::size_t i = 1; i < out.distances.size(); ++i) {
    if (out.distances[i] > out.distances[i - 1] + 1e-9) out.decreasing = false;
  }
  return out;
}

DyadicResult dyadic_merge_probe(const SpaceHandle& s, const SequenceSpec& seq, double p,
                                std::size_t levels, double tol) {
  if (!(p >= 1.0) || !std::isfinite(p)) throw DomainError("dyadic_merge_probe needs 1 <= p < inf");
  if (levels == 0 || levels > 20) throw DomainError("levels must be in [1, 20]");
  const auto xs = seq.generate(s);
  if (xs.size() < (std::size_t{1} << levels)) {
    throw DomainError("dyadic_merge_probe needs length >= 2^levels");
  }
  DyadicResult out;
  out.converged = true;
  for (std::size_t N = 1; N <= levels; ++N) {
    DyadicLevel lvl;
    lvl.level = N;
    lvl.block_size = std::size_t{1} << N;
    for (std::size_t start = 0; start + lvl.block_size <= xs.size(); start += lvl.block_size) {
      const auto first = xs.begin() + static_cast<std::ptrdiff_t>(start);
      const auto mu = DiscreteMeasure::uniform({first, first + static_cast<std::ptrdiff_t>(lvl.block_size)});
      const auto b = solve_barycenter(s, mu, p, tol);
      out.converged = out.converged && b.converged;
      lvl.block_values.push_back(b.value);
    }
    lvl.value = *std::min_element(lvl.block_values.begin(), lvl.block_values.end());
    out.levels.push_back(std::move(lvl));
  }
  out.nondecreasing = true;
  for (std::size_t i = 1; i < out.levels.size(); ++i) {
    if (out.levels[i].value < out.levels[i - 1].value - 1e-9) out.nondecreasing = false;
  }
  return out;
}

}  // namespace uconvex
