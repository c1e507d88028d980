#include "uconvex/transport.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <queue>
#include <sstream>

#include "uconvex/error.hpp"

namespace uconvex {

DiscreteMeasure::DiscreteMeasure(std::vector<Point> support, std::vector<double> weights) {
  if (support.size() != weights.size()) {
    throw DomainError("measure: support and weights differ in length");
  }
  double total = 0.0;
  for (std::size_t i = 0; i < support.size(); ++i) {
    const double w = weights[i];
    if (!std::isfinite(w) || w < 0.0) throw DomainError("measure: weights must be >= 0");
    if (w == 0.0) continue;
    support_.push_back(std::move(support[i]));
    weights_.push_back(w);
    total += w;
  }
  if (support_.empty()) throw DomainError("measure: empty support");
  if (std::abs(total - 1.0) > 1e-12) {
    std::ostringstream msg;
    msg.precision(17);
    msg << "measure: weights sum to " << total << ", not 1";
    throw DomainError(msg.str());
  }
}

DiscreteMeasure DiscreteMeasure::dirac(Point x) { return DiscreteMeasure({std::move(x)}, {1.0}); }

DiscreteMeasure DiscreteMeasure::uniform(std::vector<Point> support) {
  const std::size_t n = support.size();
  if (n == 0) throw DomainError("measure: empty support");
  return DiscreteMeasure(std::move(support), std::vector<double>(n, 1.0 / static_cast<double>(n)));
}

void DiscreteMeasure::validate_in(const SpaceHandle& s) const {
  for (const auto& x : support_) s->validate(x);
}

namespace {

constexpr double kCapEps = 1e-15;
constexpr double kInf = std::numeric_limits<double>::infinity();

void check_sizes(const DiscreteMeasure& mu, const DiscreteMeasure& nu) {
  if (mu.size() > kMaxExactSupport || nu.size() > kMaxExactSupport) {
    throw DomainError("exact transport supports at most 64 points per measure");
  }
}

std::vector<double> distance_matrix(const SpaceHandle& s, const DiscreteMeasure& mu,
                                    const DiscreteMeasure& nu) {
  mu.validate_in(s);
  nu.validate_in(s);
  std::vector<double> d(mu.size() * nu.size());
  for (std::size_t i = 0; i < mu.size(); ++i)
    for (std::size_t j = 0; j < nu.size(); ++j)
      d[i * nu.size() + j] = s->distance(mu.support()[i], nu.support()[j]);
  return d;
}

}  // namespace

// Successive shortest paths with Johnson potentials. Nodes: 0..m-1 sources,
// m..m+n-1 sinks, m+n super source, m+n+1 super sink. Cell edges have
// unbounded forward capacity; their residual backward capacity is the flow.
CouplingPlan solve_transport(const std::vector<double>& supply, const std::vector<double>& demand,
                             const std::vector<double>& cost) {
  const std::size_t m = supply.size();
  const std::size_t n = demand.size();
  if (cost.size() != m * n) throw DomainError("solve_transport: cost matrix shape mismatch");
  for (double c : cost) {
    if (!(c >= 0.0) || !std::isfinite(c)) throw DomainError("solve_transport: costs must be >= 0");
  }

  CouplingPlan plan;
  plan.rows = m;
  plan.cols = n;
  plan.mass.assign(m * n, 0.0);
  std::vector<double> rem_supply = supply;
  std::vector<double> rem_demand = demand;

  const std::size_t V = m + n + 2;
  const std::size_t S = m + n;
  const std::size_t T = m + n + 1;
  std::vector<double> pot(V, 0.0);
  std::vector<double> dist(V);
  std::vector<std::size_t> prev(V);
  std::vector<char> done(V);

  const std::size_t max_rounds = 10 * (m + n) * (m + n) + 100;
  for (std::size_t round = 0;; ++round) {
    if (round > max_rounds) throw std::runtime_error("solve_transport: no convergence");
    const double left = std::accumulate(rem_supply.begin(), rem_supply.end(), 0.0);
    const double need = std::accumulate(rem_demand.begin(), rem_demand.end(), 0.0);
    if (left <= kCapEps * static_cast<double>(m) || need <= kCapEps * static_cast<double>(n)) break;

    std::fill(dist.begin(), dist.end(), kInf);
    std::fill(done.begin(), done.end(), 0);
    dist[S] = 0.0;
    prev[S] = S;
    for (;;) {
      std::size_t u = V;
      for (std::size_t v = 0; v < V; ++v) {
        if (!done[v] && dist[v] < kInf && (u == V || dist[v] < dist[u])) u = v;
      }
      if (u == V) break;
      done[u] = 1;
      auto relax = [&](std::size_t v, double c) {
        const double reduced = std::max(0.0, c + pot[u] - pot[v]);
        if (dist[u] + reduced < dist[v]) {
          dist[v] = dist[u] + reduced;
          prev[v] = u;
        }
      };
      if (u == S) {
        for (std::size_t i = 0; i < m; ++i)
          if (rem_supply[i] > kCapEps) relax(i, 0.0);
      } else if (u < m) {
        for (std::size_t j = 0; j < n; ++j) relax(m + j, cost[u * n + j]);
      } else if (u < m + n) {
        const std::size_t j = u - m;
        for (std::size_t i = 0; i < m; ++i)
          if (plan.mass[i * n + j] > kCapEps) relax(i, -cost[i * n + j]);
        if (rem_demand[j] > kCapEps) relax(T, 0.0);
      }
    }
    if (dist[T] == kInf) break;
    for (std::size_t v = 0; v < V; ++v) pot[v] += std::min(dist[v], dist[T]);

    // Bottleneck along the path T <- ... <- S.
    double push = kInf;
    for (std::size_t v = T; v != S; v = prev[v]) {
      const std::size_t u = prev[v];
      if (u == S) {
        push = std::min(push, rem_supply[v]);
      } else if (v == T) {
        push = std::min(push, rem_demand[u - m]);
      } else if (u >= m) {  // backward cell edge sink u -> source v
        push = std::min(push, plan.mass[v * n + (u - m)]);
      }
    }
    for (std::size_t v = T; v != S; v = prev[v]) {
      const std::size_t u = prev[v];
      if (u == S) {
        rem_supply[v] -= push;
      } else if (v == T) {
        rem_demand[u - m] -= push;
      } else if (u < m) {
        plan.mass[u * n + (v - m)] += push;
      } else {
        double& f = plan.mass[v * n + (u - m)];
        f -= push;
        if (f < kCapEps) f = 0.0;
      }
    }
  }

  plan.cost = 0.0;
  for (std::size_t k = 0; k < m * n; ++k) plan.cost += plan.mass[k] * cost[k];
  return plan;
}

TransportResult wasserstein_p(const SpaceHandle& s, const DiscreteMeasure& mu,
                              const DiscreteMeasure& nu, double p) {
  if (!(p >= 1.0) || !std::isfinite(p)) throw DomainError("wasserstein_p needs 1 <= p < inf");
  check_sizes(mu, nu);
  const auto d = distance_matrix(s, mu, nu);
  const double dmax = *std::max_element(d.begin(), d.end());
  TransportResult result;
  if (dmax == 0.0) {
    result.plan = solve_transport(mu.weights(), nu.weights(), std::vector<double>(d.size(), 0.0));
    return result;
  }
  // Costs are normalized by the largest distance so large p neither
  // overflows nor underflows everywhere.
  std::vector<double> c(d.size());
  for (std::size_t k = 0; k < d.size(); ++k) c[k] = std::pow(d[k] / dmax, p);
  result.plan = solve_transport(mu.weights(), nu.weights(), c);
  result.value = dmax * std::pow(std::max(0.0, result.plan.cost), 1.0 / p);
  result.plan.cost = std::pow(dmax, p) * result.plan.cost;
  return result;
}

namespace {

// Max flow on the bipartite network restricted to cells with d <= threshold.
double admissible_flow(const std::vector<double>& a, const std::vector<double>& b,
                       const std::vector<double>& d, double threshold) {
  const std::size_t m = a.size();
  const std::size_t n = b.size();
  std::vector<double> flow(m * n, 0.0);
  std::vector<double> ra = a;
  std::vector<double> rb = b;
  double total = 0.0;
  // BFS over (sources 0..m-1, sinks m..m+n-1) from sources with spare supply.
  for (;;) {
    std::vector<std::size_t> prev(m + n, m + n);
    std::vector<char> seen(m + n, 0);
    std::queue<std::size_t> q;
    for (std::size_t i = 0; i < m; ++i) {
      if (ra[i] > kCapEps) {
        seen[i] = 1;
        q.push(i);
      }
    }
    std::size_t sink_hit = m + n;
    while (!q.empty() && sink_hit == m + n) {
      const std::size_t u = q.front();
      q.pop();
      if (u < m) {
        for (std::size_t j = 0; j < n; ++j) {
          if (d[u * n + j] <= threshold && !seen[m + j]) {
            seen[m + j] = 1;
            prev[m + j] = u;
            if (rb[j] > kCapEps) {
              sink_hit = m + j;
              break;
            }
            q.push(m + j);
          }
        }
      } else {
        const std::size_t j = u - m;
        for (std::size_t i = 0; i < m; ++i) {
          if (flow[i * n + j] > kCapEps && !seen[i]) {
            seen[i] = 1;
            prev[i] = u;
            q.push(i);
          }
        }
      }
    }
    if (sink_hit == m + n) break;
    // Walk back to the originating source.
    double push = rb[sink_hit - m];
    std::size_t v = sink_hit;
    std::size_t origin = v;
    while (true) {
      const std::size_t u = prev[v];
      if (v >= m) {
        // u is a source, forward edge: unbounded
      } else {
        push = std::min(push, flow[v * n + (u - m)]);
      }
      if (u < m && prev[u] == m + n) {
        origin = u;
        break;
      }
      v = u;
    }
    push = std::min(push, ra[origin]);
    v = sink_hit;
    while (true) {
      const std::size_t u = prev[v];
      if (v >= m) {
        flow[u * n + (v - m)] += push;
      } else {
        flow[v * n + (u - m)] -= push;
      }
      if (u == origin) break;
      v = u;
    }
    ra[origin] -= push;
    rb[sink_hit - m] -= push;
    total += push;
  }
  return total;
}

}  // namespace

double wasserstein_inf(const SpaceHandle& s, const DiscreteMeasure& mu, const DiscreteMeasure& nu) {
  check_sizes(mu, nu);
  const auto d = distance_matrix(s, mu, nu);
  std::vector<double> levels = d;
  std::sort(levels.begin(), levels.end());
  levels.erase(std::unique(levels.begin(), levels.end()), levels.end());
  const double target = std::min(std::accumulate(mu.weights().begin(), mu.weights().end(), 0.0),
                                 std::accumulate(nu.weights().begin(), nu.weights().end(), 0.0));
  std::size_t lo = 0;
  std::size_t hi = levels.size() - 1;  // always feasible: every cell admissible
  while (lo < hi) {
    const std::size_t mid = (lo + hi) / 2;
    if (admissible_flow(mu.weights(), nu.weights(), d, levels[mid]) >= target - 1e-12) {
      hi = mid;
    } else {
      lo = mid + 1;
    }
  }
  return levels[lo];
}

CheckReport wasserstein_monotone_check(const SpaceHandle& s, const DiscreteMeasure& mu,
                                       const DiscreteMeasure& nu, const std::vector<double>& p_list) {
  if (p_list.empty()) throw DomainError("p_list is empty");
  for (std::size_t k = 1; k < p_list.size(); ++k) {
    if (!(p_list[k] > p_list[k - 1])) throw DomainError("p_list must be strictly increasing");
  }
  CheckReport report;
  report.property = "wasserstein-monotone";
  std::vector<double> values;
  for (double p : p_list) values.push_back(wasserstein_p(s, mu, nu, p).value);
  const double winf = wasserstein_inf(s, mu, nu);
  for (std::size_t k = 1; k < values.size(); ++k) {
    // Excess is the drop from the previous value, relative to its scale.
    const double excess = values[k - 1] - values[k];
    report.observe(excess, 1e-12 * (1.0 + values[k - 1]), {});
  }
  if (p_list.back() >= 64.0) {
    const double rel = winf == 0.0 ? 0.0 : (winf - values.back()) / winf;
    report.metrics["relative_gap_to_inf"] = rel;
    report.observe(rel - 0.02, 0.0, {});
  }
  report.witness.clear();
  report.series["p"] = p_list;
  report.series["w_p"] = values;
  report.metrics["w_inf"] = winf;
  report.finalize();
  return report;
}

}  // namespace uconvex
