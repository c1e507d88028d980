#include <gtest/gtest.h>

#include <cmath>

#include "uconvex/sets.hpp"

using namespace uconvex;

TEST(Hull, DepthZeroKeepsGenerators) {
  const auto s = make_euclidean(2);
  const std::vector<Point> g{vec({0, 0}), vec({1, 0}), vec({0, 1})};
  const auto h = build_hull(s, g, 0);
  EXPECT_EQ(h.cloud, g);
  EXPECT_EQ(h.level_sizes, (std::vector<std::size_t>{3}));
}

TEST(Hull, SingleGenerator) {
  const auto s = make_euclidean(2);
  const auto h = build_hull(s, {vec({0.5, 0.5})}, 5);
  for (const auto& x : h.cloud) EXPECT_EQ(x, vec({0.5, 0.5}));
}

TEST(Hull, TriangleFillsTowardCentroid) {
  const auto s = make_euclidean(2);
  const std::vector<Point> g{vec({0, 0}), vec({1, 0}), vec({0, 1})};
  double prev = INFINITY;
  for (std::size_t depth : {1, 2, 4, 6}) {
    HullOptions o;
    o.seed = 3;
    const double d = dist_to_set(s, vec({1.0 / 3, 1.0 / 3}), build_hull(s, g, depth, o)).distance;
    EXPECT_LE(d, prev + 1e-15);
    prev = d;
  }
  EXPECT_LT(prev, 0.02);
}

TEST(Hull, SkipsUnsupportedConePairs) {
  const auto s = make_cone(make_euclidean(1));
  const auto h = build_hull(s, {cone_point({0}, 1), cone_point({4}, 1)}, 2);
  EXPECT_GT(h.skipped_pairs, 0u);
}

TEST(DistToSet, MemberAndTies) {
  const auto s = make_euclidean(2);
  const std::vector<Point> cloud{vec({1, 0}), vec({-1, 0}), vec({0, 0})};
  const auto a = dist_to_set(s, vec({0, 0}), cloud);
  EXPECT_EQ(a.distance, 0.0);
  EXPECT_EQ(a.index, 2u);
  const auto b = dist_to_set(s, vec({0, 5}), std::vector<Point>{vec({1, 0}), vec({-1, 0})});
  EXPECT_EQ(b.index, 0u);
}

TEST(DistToSet, DenseSegment) {
  const auto s = make_euclidean(2);
  std::vector<Point> cloud;
  for (int i = 0; i <= 1000; ++i) cloud.push_back(vec({i / 1000.0, 0}));
  const auto r = dist_to_set(s, vec({2, 0}), cloud);
  EXPECT_NEAR(r.distance, 1.0, 1e-12);
  EXPECT_EQ(r.point, vec({1, 0}));
}

TEST(DistToSet, ConeApex) {
  const auto s = make_cone(make_euclidean(3));
  const auto r = dist_to_set(s, cone_point(basis_vector(3, 0), 1.0), std::vector<Point>{s->origin()});
  EXPECT_DOUBLE_EQ(r.distance, 1.0);
}

TEST(Project, OrthogonalFoot) {
  const auto s = make_euclidean(2);
  const auto p = project_to_segment(s, vec({0, 1}), vec({-1, 0}), vec({1, 0}), 1e-12);
  EXPECT_NEAR(as_vector(p.point).coords[0], 0.0, 1e-10);
  EXPECT_NEAR(p.distance, 1.0, 1e-15);
}

TEST(Project, PointOnSegment) {
  const auto s = make_euclidean(2);
  const auto p = project_to_segment(s, vec({0.3, 0}), vec({-1, 0}), vec({1, 0}), 1e-12);
  EXPECT_NEAR(s->distance(p.point, vec({0.3, 0})), 0.0, 1e-10);
}

TEST(Project, ConeRaySegment) {
  const auto s = make_cone(make_euclidean(4));
  const std::vector<double> zero(4, 0.0);
  const auto p = project_to_segment(s, cone_point(basis_vector(4, 2), 1.0), cone_point(zero, 0.0),
                                    cone_point(zero, 2.0), 1e-13);
  EXPECT_NEAR(as_cone(p.point).radius, std::cos(1.0), 1e-10);
}

TEST(ProjectProperty, MatchesClampedOrthogonalProjection) {
  const auto s = make_euclidean(3);
  Rng rng(21);
  for (int i = 0; i < 3000; ++i) {
    const auto q = as_vector(s->sample_point(rng, s->origin(), 2.0)).coords;
    const auto a = as_vector(s->sample_point(rng, s->origin(), 1.0)).coords;
    const auto b = as_vector(s->sample_point(rng, s->origin(), 1.0)).coords;
    double num = 0.0;
    double den = 0.0;
    for (int k = 0; k < 3; ++k) {
      num += (q[k] - a[k]) * (b[k] - a[k]);
      den += (b[k] - a[k]) * (b[k] - a[k]);
    }
    const double t = std::clamp(num / den, 0.0, 1.0);
    std::vector<double> foot(3);
    for (int k = 0; k < 3; ++k) foot[k] = a[k] + t * (b[k] - a[k]);
    const auto p = project_to_segment(s, vec(q), vec(a), vec(b), 1e-12);
    ASSERT_LE(s->distance(p.point, vec(foot)), 1e-9);
  }
}

TEST(ProjectProperty, NotFartherThanSampledSegmentPoints) {
  for (const char* d : {"euclidean:2", "lp:2:1.5", "cone:euclidean:3"}) {
    const auto s = parse_space(d);
    Rng rng(22);
    for (int i = 0; i < 500; ++i) {
      const auto q = s->sample_point(rng, s->origin(), 1.0);
      const auto a = s->sample_point(rng, s->origin(), 1.0);
      const auto b = s->sample_point(rng, s->origin(), 1.0);
      if (!s->geodesic_supported(a, b)) continue;
      const auto p = project_to_segment(s, q, a, b, 1e-12);
      for (int k = 0; k <= 20; ++k) {
        ASSERT_LE(p.distance, s->distance(q, s->geodesic_point(a, b, k / 20.0)) + 1e-12) << d;
      }
    }
  }
}

TEST(ProjectProperty, InitializationIndependent) {
  const auto s = make_euclidean(2);
  Rng rng(23);
  for (int i = 0; i < 500; ++i) {
    const auto q = s->sample_point(rng, s->origin(), 2.0);
    const auto a = s->sample_point(rng, s->origin(), 1.0);
    const auto b = s->sample_point(rng, s->origin(), 1.0);
    const double tol = 1e-10;
    const auto p0 = project_to_segment(s, q, a, b, tol, -0.6);
    const auto p1 = project_to_segment(s, q, a, b, tol, 0.6);
    ASSERT_LE(s->distance(p0.point, p1.point), 10 * tol);
  }
}
