#include <gtest/gtest.h>

#include <cmath>

#include "oracles.hpp"
#include "uconvex/barycenters.hpp"
#include "uconvex/error.hpp"

using namespace uconvex;

namespace {
const auto plane = make_euclidean(2);
const auto line = make_euclidean(1);
double x0(const Point& p) { return as_vector(p).coords[0]; }
}  // namespace

TEST(Variance, Values) {
  EXPECT_NEAR(variance(plane, DiscreteMeasure::dirac(vec({0, 0})), vec({3, 4}), 3), 125.0, 1e-12);
  EXPECT_NEAR(variance(line, DiscreteMeasure::uniform({vec({0}), vec({2})}), vec({1}), 2), 1.0, 1e-15);
  const auto mu = DiscreteMeasure::uniform({vec({0}), vec({1}), vec({5})});
  EXPECT_NEAR(variance(line, mu, vec({1}), 1), 5.0 / 3, 1e-15);
}

TEST(FwObjective, TelescopingAndZero) {
  const auto mu = DiscreteMeasure::uniform({vec({0, 0}), vec({1, 2}), vec({-1, 1})});
  const Point w = vec({0.2, 0.1});
  const Point w2 = vec({-0.5, 0.7});
  EXPECT_EQ(fw_objective(plane, mu, w, w, 1.5), 0.0);
  Rng rng(1);
  const double c = fw_objective(plane, mu, vec({0, 0}), w, 1.5) - fw_objective(plane, mu, vec({0, 0}), w2, 1.5);
  for (int i = 0; i < 100; ++i) {
    const auto y = plane->sample_point(rng, plane->origin(), 2.0);
    ASSERT_NEAR(fw_objective(plane, mu, y, w, 1.5) - fw_objective(plane, mu, y, w2, 1.5), c, 1e-12);
  }
}

TEST(BarycenterP, TriangleMean) {
  const auto mu = DiscreteMeasure::uniform({vec({0, 0}), vec({2, 0}), vec({0, 2})});
  const auto b = barycenter_p(plane, mu, 2);
  EXPECT_TRUE(b.converged);
  EXPECT_TRUE(b.global);
  EXPECT_NEAR(as_vector(b.point).coords[0], 2.0 / 3, 1e-9);
  EXPECT_NEAR(as_vector(b.point).coords[1], 2.0 / 3, 1e-9);
  EXPECT_DOUBLE_EQ(b.value, variance(plane, mu, b.point, 2));
}

TEST(BarycenterP, Dirac) {
  const auto b = barycenter_p(plane, DiscreteMeasure::dirac(vec({0.3, -1})), 3);
  EXPECT_EQ(b.point, vec({0.3, -1}));
  EXPECT_EQ(b.value, 0.0);
  EXPECT_THROW(barycenter_p(plane, DiscreteMeasure::dirac(vec({0, 0})), 1.0), DomainError);
}

TEST(BarycenterP, ProductIdentity) {
  Rng rng(2);
  for (int i = 0; i < 10; ++i) {
    const auto mu = random_measure(plane, rng, 4);
    std::vector<Point> a, b;
    for (const auto& x : mu.support()) {
      a.push_back(vec({as_vector(x).coords[0]}));
      b.push_back(vec({as_vector(x).coords[1]}));
    }
    const auto joint = barycenter_p(plane, mu, 2);
    EXPECT_NEAR(as_vector(joint.point).coords[0], x0(barycenter_p(line, DiscreteMeasure(a, mu.weights()), 2).point), 1e-6);
    EXPECT_NEAR(as_vector(joint.point).coords[1], x0(barycenter_p(line, DiscreteMeasure(b, mu.weights()), 2).point), 1e-6);
  }
}

TEST(BarycenterP, GridOracleOneDimensional) {
  Rng rng(3);
  for (int i = 0; i < 10; ++i) {
    const auto mu = random_measure(line, rng, 5);
    for (double p : {1.5, 3.0}) {
      double lo = INFINITY, hi = -INFINITY;
      for (const auto& x : mu.support()) {
        lo = std::min(lo, x0(x));
        hi = std::max(hi, x0(x));
      }
      double best = INFINITY;
      for (int k = 0; k < 400; ++k) best = std::min(best, variance(line, mu, vec({lo + (hi - lo) * k / 399.0}), p));
      const auto b = barycenter_p(line, mu, p);
      EXPECT_LE(b.value, best + 1e-12);
      EXPECT_LE(std::abs(b.value - best), 1e-3);
    }
  }
}

TEST(BarycenterP, RandomRestartsAgree) {
  for (const char* d : {"euclidean:2", "cone:euclidean:2"}) {
    const auto s = parse_space(d);
    Rng rng(4);
    for (int i = 0; i < 5; ++i) {
      const auto mu = random_measure(s, rng, 4, 0.8);
      DescentOptions a;
      a.tol = 1e-9;
      a.random_start = true;
      a.seed = 1;
      DescentOptions b = a;
      b.seed = 2;
      const auto ra = barycenter_p(s, mu, 2, a);
      const auto rb = barycenter_p(s, mu, 2, b);
      ASSERT_TRUE(ra.converged && rb.converged);
      EXPECT_LE(s->distance(ra.point, rb.point), 10 * a.tol) << d;
    }
  }
}

TEST(Median, CollinearIsNotUnique) {
  const auto mu = DiscreteMeasure::uniform({vec({0}), vec({0}), vec({1})});
  const auto b = barycenter_median(line, mu);
  EXPECT_NEAR(x0(b.point), 0.0, 1e-9);
  EXPECT_EQ(b.unique, std::optional<bool>(false));
  EXPECT_EQ(barycenter_median(line, DiscreteMeasure::dirac(vec({2}))).point, vec({2}));
}

TEST(Median, FermatPointMatchesWeiszfeld) {
  const std::vector<std::vector<double>> pts{{0, 0}, {4, 0}, {1, 3}};
  const auto ref = oracle::weiszfeld(pts, {1.0 / 3, 1.0 / 3, 1.0 / 3});
  const auto b = barycenter_median(plane, DiscreteMeasure::uniform({vec(pts[0]), vec(pts[1]), vec(pts[2])}));
  EXPECT_NEAR(as_vector(b.point).coords[0], ref[0], 1e-6);
  EXPECT_NEAR(as_vector(b.point).coords[1], ref[1], 1e-6);
  EXPECT_EQ(b.unique, std::optional<bool>(true));
}

TEST(Circumcenter, SmallCases) {
  EXPECT_NEAR(x0(circumcenter(line, {vec({-1}), vec({1})}).point), 0.0, 1e-9);
  const auto c = circumcenter(plane, {vec({0, 0}), vec({2, 0})});
  EXPECT_NEAR(as_vector(c.point).coords[0], 1.0, 1e-9);
  EXPECT_NEAR(as_vector(c.point).coords[1], 0.0, 1e-9);
  EXPECT_NEAR(c.value, 1.0, 1e-9);
  const auto one = circumcenter(plane, {vec({0.5, 0.5})});
  EXPECT_EQ(one.value, 0.0);
}

TEST(Circumcenter, RegularSimplex) {
  const std::size_t N = 6;
  const auto s = make_euclidean(N);
  std::vector<Point> pts;
  for (std::size_t i = 0; i < N; ++i) pts.push_back(vec(basis_vector(N, i)));
  const auto c = circumcenter(s, pts);
  EXPECT_NEAR(c.value, std::sqrt(1 - 1.0 / N), 1e-8);
  for (double v : as_vector(c.point).coords) EXPECT_NEAR(v, 1.0 / N, 1e-6);
}

TEST(Circumcenter, RadiusIsBottleneckToCenter) {
  Rng rng(6);
  for (int i = 0; i < 10; ++i) {
    std::vector<Point> pts;
    for (int k = 0; k < 5; ++k) pts.push_back(plane->sample_point(rng, plane->origin(), 1.0));
    const auto c = circumcenter(plane, pts);
    EXPECT_NEAR(c.value, wasserstein_inf(plane, DiscreteMeasure::uniform(pts), DiscreteMeasure::dirac(c.point)), 1e-12);
  }
}

TEST(Orlicz, MatchesPowerBarycenter) {
  Rng rng(7);
  for (int i = 0; i < 5; ++i) {
    const auto mu = random_measure(plane, rng, 4);
    for (double p : {1.5, 2.0, 3.0}) {
      const auto bo = barycenter_orlicz(plane, mu, OrliczFunction::power(p));
      const auto bp = barycenter_p(plane, mu, p);
      EXPECT_LE(plane->distance(bo.point, bp.point), 1e-6);
    }
  }
}

TEST(Orlicz, TwoPointLine) {
  const auto mu = DiscreteMeasure::uniform({vec({0}), vec({1})});
  const auto b = barycenter_orlicz(line, mu, OrliczFunction::power(2));
  EXPECT_NEAR(x0(b.point), 0.5, 1e-8);
  const auto d = barycenter_orlicz(line, DiscreteMeasure::dirac(vec({3})), OrliczFunction::exp_minus_one());
  EXPECT_EQ(d.point, vec({3}));
  EXPECT_EQ(d.value, 0.0);
}

TEST(Jensen, ContractionHolds) {
  Rng rng(8);
  const auto mu = random_measure(plane, rng, 4);
  const auto nu = random_measure(plane, rng, 4);
  EXPECT_TRUE(jensen_contraction_check(plane, mu, nu, 1, 20, 1).passed());
  EXPECT_TRUE(jensen_contraction_check(plane, mu, mu, 2, 0, 1).passed());
  EXPECT_THROW(jensen_contraction_check(make_cone(plane), DiscreteMeasure::dirac(cone_point({0, 0}, 1)),
                                        DiscreteMeasure::dirac(cone_point({0, 0}, 1)), 2, 1, 1),
               DomainError);
}

TEST(Jensen, TranslatedMeasure) {
  const auto mu = DiscreteMeasure::uniform({vec({0, 0}), vec({1, 0}), vec({0, 2})});
  const auto nu = DiscreteMeasure::uniform({vec({0.3, 0.4}), vec({1.3, 0.4}), vec({0.3, 2.4})});
  const auto bm = barycenter_p(plane, mu, 2);
  const auto bn = barycenter_p(plane, nu, 2);
  EXPECT_NEAR(plane->distance(bm.point, bn.point), 0.5, 1e-9);
  EXPECT_NEAR(wasserstein_inf(plane, mu, nu), 0.5, 1e-12);
  EXPECT_LE(wasserstein_p(plane, mu, nu, 2).value, 0.5 + 1e-12);
}
