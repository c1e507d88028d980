#include <gtest/gtest.h>

#include <cmath>

#include "oracles.hpp"
#include "uconvex/barycenters.hpp"
#include "uconvex/error.hpp"
#include "uconvex/transport.hpp"

using namespace uconvex;

namespace {
const auto line = make_euclidean(1);
Point x1(double v) { return vec({v}); }
}  // namespace

TEST(Measure, Validation) {
  EXPECT_THROW(DiscreteMeasure({x1(0)}, {0.5}), DomainError);
  EXPECT_THROW(DiscreteMeasure({x1(0), x1(1)}, {1.5, -0.5}), DomainError);
  EXPECT_THROW(DiscreteMeasure({}, {}), DomainError);
  EXPECT_THROW(DiscreteMeasure({x1(0)}, {1.0, 0.0}), DomainError);
  const DiscreteMeasure mu({x1(0), x1(1)}, {1.0, 0.0});
  EXPECT_EQ(mu.size(), 1u);
}

TEST(Wasserstein, DiracEmbedding) {
  const auto s = make_euclidean(2);
  for (double p : {1.0, 2.0, 3.5}) {
    EXPECT_NEAR(wasserstein_p(s, DiscreteMeasure::dirac(vec({0, 0})), DiscreteMeasure::dirac(vec({3, 4})), p).value,
                5.0, 1e-14);
  }
  EXPECT_DOUBLE_EQ(wasserstein_inf(s, DiscreteMeasure::dirac(vec({0, 0})), DiscreteMeasure::dirac(vec({3, 4}))), 5.0);
}

TEST(Wasserstein, SplitToMiddle) {
  const auto mu = DiscreteMeasure::uniform({x1(0), x1(2)});
  const auto nu = DiscreteMeasure::dirac(x1(1));
  EXPECT_NEAR(wasserstein_p(line, mu, nu, 1).value, 1.0, 1e-15);
  EXPECT_LE(1.0, wasserstein_p(line, mu, nu, 2).value + 1e-15);
}

TEST(Wasserstein, ToDiracIsMoment) {
  const DiscreteMeasure mu({x1(0), x1(1), x1(4)}, {0.2, 0.5, 0.3});
  const double p = 2.5;
  double m = 0.0;
  for (std::size_t i = 0; i < mu.size(); ++i) m += mu.weights()[i] * std::pow(std::abs(as_vector(mu.support()[i]).coords[0] - 1.5), p);
  EXPECT_NEAR(std::pow(wasserstein_p(line, mu, DiscreteMeasure::dirac(x1(1.5)), p).value, p), m, 1e-12);
  EXPECT_DOUBLE_EQ(wasserstein_inf(line, mu, DiscreteMeasure::dirac(x1(1.5))), 2.5);
}

TEST(Wasserstein, Bottleneck) {
  const auto mu = DiscreteMeasure::uniform({x1(0), x1(2)});
  const auto nu = DiscreteMeasure::uniform({x1(1), x1(3)});
  EXPECT_DOUBLE_EQ(wasserstein_inf(line, mu, nu), 1.0);
  EXPECT_EQ(wasserstein_inf(line, mu, mu), 0.0);
  EXPECT_EQ(wasserstein_p(line, mu, mu, 2).value, 0.0);
}

TEST(Wasserstein, PlanMarginals) {
  const auto s = make_euclidean(2);
  Rng rng(31);
  for (int i = 0; i < 20; ++i) {
    const auto mu = random_measure(s, rng, 1 + rng() % 6);
    const auto nu = random_measure(s, rng, 1 + rng() % 6);
    const auto r = wasserstein_p(s, mu, nu, 2);
    for (std::size_t a = 0; a < mu.size(); ++a) {
      double row = 0;
      for (std::size_t b = 0; b < nu.size(); ++b) {
        ASSERT_GE(r.plan.at(a, b), 0.0);
        row += r.plan.at(a, b);
      }
      ASSERT_NEAR(row, mu.weights()[a], 1e-12);
    }
    for (std::size_t b = 0; b < nu.size(); ++b) {
      double col = 0;
      for (std::size_t a = 0; a < mu.size(); ++a) col += r.plan.at(a, b);
      ASSERT_NEAR(col, nu.weights()[b], 1e-12);
    }
  }
}

TEST(Wasserstein, MatchesAssignmentEnumeration) {
  const auto s = make_euclidean(2);
  Rng rng(32);
  for (int inst = 0; inst < 30; ++inst) {
    const int K = 6;
    std::vector<int> mc{1, 2, 3};
    std::vector<int> nc{2, 2, 1, 1};
    std::vector<Point> xs, ys;
    std::vector<double> wx, wy;
    for (int c : mc) {
      xs.push_back(s->sample_point(rng, s->origin(), 1.0));
      wx.push_back(double(c) / K);
    }
    for (int c : nc) {
      ys.push_back(s->sample_point(rng, s->origin(), 1.0));
      wy.push_back(double(c) / K);
    }
    auto dist = [&](std::size_t i, std::size_t j) {
      const auto& a = as_vector(xs[i]).coords;
      const auto& b = as_vector(ys[j]).coords;
      return std::hypot(a[0] - b[0], a[1] - b[1]);
    };
    for (double p : {1.0, 1.5, 2.0}) {
      const auto ref = oracle::enumerate_assignments(mc, nc, dist, p);
      EXPECT_NEAR(wasserstein_p(s, DiscreteMeasure(xs, wx), DiscreteMeasure(ys, wy), p).plan.cost, ref.min_sum, 1e-9);
      EXPECT_NEAR(wasserstein_inf(s, DiscreteMeasure(xs, wx), DiscreteMeasure(ys, wy)), ref.min_max, 1e-12);
    }
  }
}

TEST(Wasserstein, MonotoneInP) {
  const auto s = make_euclidean(2);
  Rng rng(33);
  for (int i = 0; i < 10; ++i) {
    const auto mu = random_measure(s, rng, 4);
    const auto nu = random_measure(s, rng, 4);
    const auto r = wasserstein_monotone_check(s, mu, nu, {1, 2, 4, 8});
    EXPECT_TRUE(r.passed());
  }
  const auto d = wasserstein_monotone_check(s, DiscreteMeasure::dirac(vec({0, 0})), DiscreteMeasure::dirac(vec({1, 1})),
                                            {1, 2, 64});
  EXPECT_TRUE(d.passed());
  EXPECT_THROW(wasserstein_monotone_check(s, DiscreteMeasure::dirac(vec({0, 0})), DiscreteMeasure::dirac(vec({1, 1})),
                                          {2, 1}),
               DomainError);
}

TEST(WassersteinProperty, TriangleInequality) {
  for (const char* d : {"euclidean:2", "cone:euclidean:2"}) {
    const auto s = parse_space(d);
    Rng rng(34);
    for (int i = 0; i < 200; ++i) {
      const auto a = random_measure(s, rng, 1 + rng() % 5);
      const auto b = random_measure(s, rng, 1 + rng() % 5);
      const auto c = random_measure(s, rng, 1 + rng() % 5);
      for (double p : {1.0, 2.0}) {
        ASSERT_LE(wasserstein_p(s, a, c, p).value,
                  wasserstein_p(s, a, b, p).value + wasserstein_p(s, b, c, p).value + 1e-7);
      }
      ASSERT_LE(wasserstein_inf(s, a, c), wasserstein_inf(s, a, b) + wasserstein_inf(s, b, c) + 1e-7);
      ASSERT_NEAR(wasserstein_p(s, a, b, 2).value, wasserstein_p(s, b, a, 2).value, 1e-9);
    }
  }
}

TEST(SolveTransport, TinyMatrix) {
  const auto plan = solve_transport({0.5, 0.5}, {0.5, 0.5}, {0, 1, 1, 0});
  EXPECT_NEAR(plan.cost, 0.0, 1e-15);
  EXPECT_NEAR(plan.at(0, 0), 0.5, 1e-15);
}
