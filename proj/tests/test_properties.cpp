// Randomized invariants with small hand-rolled generators.

#include <gtest/gtest.h>

#include <cmath>

#include "uconvex/barycenters.hpp"
#include "uconvex/convexity.hpp"
#include "uconvex/sequences.hpp"

using namespace uconvex;

namespace {

// Mixes scales so that near-coincident, ordinary and far pairs all occur.
struct PointGen {
  SpaceHandle s;
  Rng rng;
  Point operator()() {
    const double scale = std::pow(10.0, -3.0 + 4.0 * uniform01(rng));
    return s->sample_point(rng, s->origin(), std::min(scale, 1.0) * 1.2);
  }
  Point near(const Point& x) { return s->sample_point(rng, x, 1e-3); }
};

const char* kSpaces[] = {"euclidean:3", "lp:3:1.5", "lp:2:1", "lp:2:inf", "cone:euclidean:3", "cone:lp:2:3"};

}  // namespace

TEST(MetricAxioms, SampledTriples) {
  for (const char* name : kSpaces) {
    PointGen gen{parse_space(name), Rng(101)};
    const auto& s = gen.s;
    for (int i = 0; i < 10000; ++i) {
      const auto x = gen();
      const auto y = i % 7 == 0 ? gen.near(x) : gen();
      const auto z = gen();
      const double dxy = s->distance(x, y);
      ASSERT_GE(dxy, 0.0) << name;
      ASSERT_EQ(s->distance(x, x), 0.0) << name;
      ASSERT_NEAR(dxy, s->distance(y, x), 1e-12) << name;
      ASSERT_LE(s->distance(x, z), dxy + s->distance(y, z) + 1e-9) << name;
    }
  }
}

TEST(MetricAxioms, MidpointProperty) {
  for (const char* name : kSpaces) {
    PointGen gen{parse_space(name), Rng(102)};
    const auto& s = gen.s;
    std::size_t checked = 0;
    for (int i = 0; i < 10000; ++i) {
      const auto a = gen();
      const auto b = gen();
      if (!s->geodesic_supported(a, b)) continue;
      const auto m = s->midpoint(a, b);
      const double d = s->distance(a, b);
      ASSERT_NEAR(s->distance(a, m), d / 2, 1e-9) << name;
      ASSERT_NEAR(s->distance(b, m), d / 2, 1e-9) << name;
      ++checked;
    }
    EXPECT_GT(checked, 9000u) << name;
  }
}

TEST(MetricAxioms, ConeApexIdentification) {
  const auto s = make_cone(make_euclidean(4));
  Rng rng(103);
  for (int i = 0; i < 10000; ++i) {
    std::vector<double> u(4), v(4);
    for (auto& c : u) c = 2 * uniform01(rng) - 1;
    for (auto& c : v) c = 2 * uniform01(rng) - 1;
    ASSERT_EQ(s->distance(ConePoint{u, 0.0}, ConePoint{v, 0.0}), 0.0);
  }
}

TEST(Convexity, ConeIsBusemann) {
  SamplingOptions o;
  o.samples = 20000;
  o.seed = 104;
  EXPECT_TRUE(check_busemann(parse_space("cone:euclidean:6"), Exponent::finite(1), o).passed());
}

TEST(Convexity, ModulusThreadIndependent) {
  SamplingOptions o;
  o.samples = 9000;
  o.seed = 105;
  const auto a = estimate_modulus(make_euclidean(2), Exponent::finite(2), {0.3, 0.9}, o);
  o.threads = 3;
  const auto b = estimate_modulus(make_euclidean(2), Exponent::finite(2), {0.3, 0.9}, o);
  for (std::size_t i = 0; i < a.rows.size(); ++i) {
    EXPECT_EQ(a.rows[i].rho_raw, b.rows[i].rho_raw);
    EXPECT_EQ(a.rows[i].attempts, b.rows[i].attempts);
  }
}

TEST(Descent, ObjectiveNonincreasing) {
  Rng rng(106);
  for (const char* name : {"euclidean:2", "lp:2:3", "cone:euclidean:2"}) {
    const auto s = parse_space(name);
    for (int i = 0; i < 10; ++i) {
      const auto mu = random_measure(s, rng, 2 + rng() % 5, 0.8);
      DescentOptions o;
      o.random_start = i % 2 == 1;
      o.seed = 7 + i;
      for (double p : {1.0, 1.5, 3.0}) {
        const auto r = p == 1.0 ? barycenter_median(s, mu, o) : barycenter_p(s, mu, p, o);
        // Nonincreasing up to rounding of the objective itself.
        for (std::size_t k = 1; k < r.trace.size(); ++k)
          ASSERT_LE(r.trace[k], r.trace[k - 1] + 4e-16 * (1 + std::abs(r.trace[k - 1]))) << name;
        ASSERT_EQ(r.trace.back(), r.value);
      }
    }
  }
}

// For p = 2 in Euclidean space Var(x) = Var(b) + d(x, b)^2, so the fitted
// quadratic modulus must be omega(r) = 2 r^2 and the bound must hold with it.
TEST(UniformConvexity, QuadraticGrowthAroundBarycenter) {
  const auto s = make_euclidean(3);
  Rng rng(107);
  for (int inst = 0; inst < 20; ++inst) {
    const auto mu = random_measure(s, rng, 3 + rng() % 6);
    const auto b = barycenter_p(s, mu, 2);
    const double vb = variance(s, mu, b.point, 2);
    double fitted = INFINITY;
    std::vector<std::pair<double, double>> held_out;
    for (int k = 0; k < 400; ++k) {
      const auto x = s->sample_point(rng, b.point, 2.0);
      const double r = s->distance(x, b.point);
      if (r < 1e-3) continue;
      const double gain = variance(s, mu, x, 2) - vb;
      if (k % 2 == 0) {
        fitted = std::min(fitted, 2 * gain / (r * r));
      } else {
        held_out.emplace_back(r, gain);
      }
    }
    EXPECT_NEAR(fitted, 2.0, 1e-6);
    for (const auto& [r, gain] : held_out) ASSERT_GE(gain, 0.5 * fitted * r * r - 1e-9 * (1 + gain));
  }
}

TEST(Sequences, DyadicNondecreasing) {
  Rng rng(108);
  for (int i = 0; i < 5; ++i) {
    const auto s = make_euclidean(3);
    std::vector<Point> pts;
    for (int k = 0; k < 16; ++k) pts.push_back(s->sample_point(rng, s->origin(), 1.0));
    const auto r = dyadic_merge_probe(s, SequenceSpec::explicit_list(pts), 2, 4);
    // Merging blocks can only raise the minimal variance for p = 2.
    EXPECT_TRUE(r.nondecreasing);
  }
}
