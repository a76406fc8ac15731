#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "parabgmt/checks.hpp"
#include "parabgmt/geometry.hpp"

using namespace parabgmt;

namespace {

Point P1(double x, double t) { return Point{Eigen::VectorXd::Constant(1, x), t}; }

/// Spectral norm of a symmetric matrix from its eigenvalues.
double spectral(const Eigen::MatrixXd& m) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m);
  return es.eigenvalues().cwiseAbs().maxCoeff();
}

}  // namespace

TEST(Metric, NormFormula) {
  EXPECT_NEAR(metric_eval(P1(3, 4), Point::zero(1)), std::sqrt(13.0), 1e-15);
  EXPECT_DOUBLE_EQ(metric_eval(P1(0.3, -2), P1(0.3, -2)), 0.0);
  EXPECT_NEAR(metric_eval(P1(1, 0), P1(0, 1)), std::sqrt(2.0), 1e-15);
  EXPECT_NEAR(metric_eval(P1(1, 0), P1(0, 1), Metric::euclidean), std::sqrt(2.0), 1e-15);
}

TEST(Metric, SymmetricAndDimensionChecked) {
  std::mt19937_64 rng(3);
  for (int i = 0; i < 100; ++i) {
    const Point p = random_point(rng, 3, 2.0);
    const Point q = random_point(rng, 3, 2.0);
    EXPECT_EQ(metric_eval(p, q), metric_eval(q, p));
    EXPECT_GT(metric_eval(p, q), 0.0);
  }
  EXPECT_THROW(metric_eval(Point::zero(1), Point::zero(2)), std::invalid_argument);
}

TEST(Dilation, Formula) {
  const Point d = dilate(2.0, P1(1, 1));
  EXPECT_EQ(d.x[0], 2.0);
  EXPECT_EQ(d.t, 4.0);
  EXPECT_EQ(dilate(1.0, P1(0.7, -0.2)), P1(0.7, -0.2));
  EXPECT_NEAR(metric_eval(dilate(3, P1(1, 0)), dilate(3, P1(0, 1))), 3.0 * std::sqrt(2.0), 1e-14);
  EXPECT_THROW(dilate(0.0, P1(1, 1)), std::invalid_argument);
  EXPECT_THROW(dilate(-1.0, P1(1, 1)), std::invalid_argument);
}

TEST(BlowupMap, FormulaAndNorm) {
  EXPECT_EQ(blowup_map(Point::zero(1), 1.0, P1(0.4, -0.3)), P1(0.4, -0.3));
  const Point q = blowup_map(P1(1, 1), 0.5, P1(1.5, 1.25));
  EXPECT_NEAR(q.x[0], 1.0, 1e-15);
  EXPECT_NEAR(q.t, 1.0, 1e-15);
  std::mt19937_64 rng(5);
  for (int i = 0; i < 1000; ++i) {
    const Point a = random_point(rng, 2, 3.0);
    const Point p = random_point(rng, 2, 3.0);
    const double r = std::uniform_real_distribution<double>(0.01, 10.0)(rng);
    EXPECT_NEAR(norm(blowup_map(a, r, p)), metric_eval(p, a) / r, 1e-12 * (1.0 + metric_eval(p, a) / r));
  }
  EXPECT_THROW(blowup_map(Point::zero(1), 0.0, P1(1, 1)), std::invalid_argument);
}

TEST(Projection, CoordinatePlanes) {
  const HomPlane taxis = HomPlane::vertical(1);
  const HomPlane xaxis = HomPlane::coordinate(1, {0}, false);
  const Point p = P1(0.8, -0.6);
  EXPECT_EQ(project(taxis, p, Part::onto), P1(0, -0.6));
  EXPECT_EQ(project(taxis, p, Part::complement), P1(0.8, 0));
  EXPECT_EQ(project(xaxis, p, Part::onto), P1(0.8, 0));
  EXPECT_EQ(project(xaxis, p, Part::complement), P1(0, -0.6));
}

TEST(Projection, PartsSumToPoint) {
  std::mt19937_64 rng(11);
  for (int i = 0; i < 1000; ++i) {
    const HomPlane v = random_plane(rng, 3);
    const Point p = random_point(rng, 3, 5.0);
    const Point sum = project(v, p, Part::onto) + project(v, p, Part::complement);
    EXPECT_LT((sum.x - p.x).norm(), 1e-12);
    EXPECT_EQ(sum.t, p.t);
  }
}

TEST(PlaneDistance, IdentityAndOrthogonalLines) {
  const HomPlane e1 = HomPlane::coordinate(2, {0}, false);
  const HomPlane e2 = HomPlane::coordinate(2, {1}, false);
  EXPECT_DOUBLE_EQ(plane_distance(e1, e1), 0.0);
  const double oracle = spectral(e1.projector() - e2.projector());
  EXPECT_NEAR(oracle, 1.0, 1e-15);
  EXPECT_NEAR(plane_distance(e1, e2), oracle, 1e-12);
}

TEST(PlaneDistance, AcrossFamiliesAtLeastOne) {
  const HomPlane h = HomPlane::coordinate(2, {0}, false);
  const HomPlane v = HomPlane::coordinate(2, {0}, true);
  EXPECT_GE(plane_distance(h, v), 1.0);
}

TEST(PlaneDistance, MetricAxiomsOnRandomTriples) {
  std::mt19937_64 rng(17);
  for (int i = 0; i < 1000; ++i) {
    const bool vertical = i % 3 == 0;
    const HomPlane a = random_plane(rng, 3, vertical, vertical ? 1 : 2);
    const HomPlane b = random_plane(rng, 3, i % 2 == 0, i % 2 == 0 ? 1 : 2);
    const HomPlane c = random_plane(rng, 3, false, 2);
    EXPECT_NEAR(plane_distance(a, b), plane_distance(b, a), 1e-12);
    EXPECT_LE(plane_distance(a, c), plane_distance(a, b) + plane_distance(b, c) + 1e-12);
    const double oracle = spectral(a.projector() - b.projector());
    if (a.is_vertical() == b.is_vertical()) EXPECT_NEAR(plane_distance(a, b), oracle, 1e-9);
  }
}

TEST(Complement, AxesSwap) {
  EXPECT_TRUE(complement_plane(HomPlane::coordinate(1, {0}, false)).same_as(HomPlane::vertical(1)));
  EXPECT_TRUE(complement_plane(HomPlane::vertical(1)).same_as(HomPlane::coordinate(1, {0}, false)));
}

TEST(Complement, DimensionsAddUp) {
  std::mt19937_64 rng(19);
  for (int i = 0; i < 1000; ++i) {
    const int n = 1 + i % 4;
    const HomPlane v = random_plane(rng, n);
    const HomPlane c = complement_plane(v);
    EXPECT_EQ(v.dim() + c.dim(), n + 2);
    EXPECT_NE(v.is_vertical(), c.is_vertical());
    EXPECT_LT((v.projector() * c.projector()).norm(), 1e-10);
    EXPECT_TRUE(complement_plane(c).same_as(v));
  }
}

TEST(SamplePlanes, OnlyHorizontalLinesInTheLine) {
  for (const auto& v : sample_planes(1, 1, 10, 1)) {
    EXPECT_TRUE(v.is_horizontal());
    EXPECT_EQ(v.dim(), 1);
  }
}

TEST(SamplePlanes, TimeAxisIsUnique) {
  const auto planes = sample_planes(1, 2, 10, 1);
  ASSERT_EQ(planes.size(), 1u);
  EXPECT_TRUE(planes.front().same_as(HomPlane::vertical(1)));
}

TEST(SamplePlanes, BothFamiliesAndValid) {
  const auto pair = sample_planes(2, 2, 100, 4);
  ASSERT_EQ(pair.size(), 2u);
  EXPECT_NE(pair[0].is_vertical(), pair[1].is_vertical());

  const auto planes = sample_planes(3, 2, 100, 4);
  ASSERT_EQ(planes.size(), 100u);
  bool horizontal = false;
  bool vertical = false;
  for (const auto& v : planes) {
    horizontal = horizontal || v.is_horizontal();
    vertical = vertical || v.is_vertical();
    EXPECT_EQ(v.dim(), 2);
    if (v.k() == 0) continue;
    const Eigen::MatrixXd gram = v.basis().transpose() * v.basis();
    EXPECT_LT((gram - Eigen::MatrixXd::Identity(v.k(), v.k())).cwiseAbs().maxCoeff(), 1e-10);
  }
  EXPECT_TRUE(horizontal && vertical);
  EXPECT_TRUE(planes[0].same_as(HomPlane::coordinate(3, {0, 1}, false)));
  EXPECT_THROW(sample_planes(1, 3, 5, 1), std::invalid_argument);
  EXPECT_THROW(sample_planes(1, 0, 5, 1), std::invalid_argument);
}

TEST(SamplePlanes, Deterministic) {
  const auto a = sample_planes(3, 2, 40, 9);
  const auto b = sample_planes(3, 2, 40, 9);
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t i = 0; i < a.size(); ++i) EXPECT_EQ(a[i].basis(), b[i].basis());
}

TEST(Cone, ArithmeticExample) {
  const Cone c(Point::zero(1), HomPlane::coordinate(1, {0}, false), 0.5);
  EXPECT_EQ(cone_membership(c, P1(1, 0.1)), ConeSide::inside);
  EXPECT_EQ(cone_membership(c, Point::zero(1)), ConeSide::boundary);
  EXPECT_EQ(cone_membership(c, P1(0, 0.1)), ConeSide::outside);
}

TEST(Cone, PlanePointsAlwaysInside) {
  std::mt19937_64 rng(23);
  for (int i = 0; i < 500; ++i) {
    const HomPlane v = random_plane(rng, 3);
    const Point p = random_point(rng, 3);
    const Point q = p + project(v, random_point(rng, 3), Part::onto);
    if (metric_eval(p, q) < 1e-6) continue;
    for (const double s : {1e-3, 0.1, 0.9}) EXPECT_EQ(cone_membership(Cone(p, v, s), q), ConeSide::inside);
  }
  EXPECT_THROW(Cone(Point::zero(1), HomPlane::vertical(1), 1.0), std::invalid_argument);
}

TEST(GraphCone, ZeroGraphPasses) {
  std::mt19937_64 rng(29);
  for (int i = 0; i < 20; ++i) {
    const HomPlane v = random_plane(rng, 2);
    const auto pts = lipschitz_graph_points(v, 0.0, 50, 100 + i);
    EXPECT_TRUE(graph_cone_check(pts, v, 0.01).empty());
  }
}

TEST(GraphCone, LipschitzBelowAperturePasses) {
  std::mt19937_64 rng(31);
  for (int i = 0; i < 30; ++i) {
    const HomPlane v = random_plane(rng, 2);
    const double L = 0.1 + 0.02 * i;
    EXPECT_TRUE(graph_cone_check(lipschitz_graph_points(v, L, 80, 7 + i), v, L + 0.01).empty());
  }
}

TEST(GraphCone, StackedPointsViolate) {
  const std::vector<Point> pts{P1(0.2, 0.0), P1(0.2, 0.5)};
  const auto bad = graph_cone_check(pts, HomPlane::coordinate(1, {0}, false), 0.1);
  ASSERT_EQ(bad.size(), 1u);
  EXPECT_EQ(bad.front(), (IndexPair{0, 1}));
  EXPECT_TRUE(graph_cone_check(std::vector<Point>{P1(1, 1)}, HomPlane::vertical(1), 0.1).empty());
}

TEST(GraphExtract, ZeroGraph) {
  const HomPlane v = HomPlane::coordinate(2, {0}, true);
  const auto g = graph_extract(lipschitz_graph_points(v, 0.0, 40, 3), v, 0.05);
  for (const auto& val : g.value) EXPECT_EQ(norm(val), 0.0);
  EXPECT_EQ(g.empirical_constant, 0.0);
}

TEST(GraphExtract, VerticalLineGraphBruteForce) {
  const double c = 0.7;
  const double s = 0.9;
  std::vector<Point> pts;
  for (int i = 0; i <= 500; ++i) {
    const double t = 0.5 + i * 1e-3;
    pts.push_back(P1(c * t, t));
  }
  const auto g = graph_extract(pts, HomPlane::vertical(1), s);
  double ratio = 0.0;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    for (std::size_t j = i + 1; j < pts.size(); ++j) {
      const double dv = std::abs(c * (pts[i].t - pts[j].t));
      const double db = std::sqrt(std::abs(pts[i].t - pts[j].t));
      ratio = std::max(ratio, dv / db);
    }
  }
  EXPECT_NEAR(g.empirical_constant, ratio, 1e-12);
  EXPECT_LE(g.empirical_constant, s / std::sqrt(1 - s * s));
  EXPECT_DOUBLE_EQ(g.lipschitz_bound, s / std::sqrt(1 - s * s));
}

TEST(GraphExtract, SharedProjectionRejected) {
  const std::vector<Point> pts{P1(0.1, 0.3), P1(0.4, 0.3), P1(0.0, 0.9)};
  try {
    graph_extract(pts, HomPlane::vertical(1), 0.5);
    FAIL() << "expected rejection";
  } catch (const GraphRejected& e) {
    EXPECT_EQ(e.witness(), (IndexPair{0, 1}));
  }
}

TEST(GraphExtract, ReassemblesExactly) {
  std::mt19937_64 rng(37);
  for (int i = 0; i < 20; ++i) {
    const HomPlane v = random_plane(rng, 3);
    const auto pts = lipschitz_graph_points(v, 0.3, 60, 50 + i);
    const auto back = graph_extract(pts, v, 0.31).reassemble();
    ASSERT_EQ(back.size(), pts.size());
    for (std::size_t j = 0; j < pts.size(); ++j) EXPECT_LE(metric_eval(back[j], pts[j]), 1e-12);
  }
}

TEST(EuclidCone, DiagonalLineSamplingOracle) {
  Eigen::MatrixXd v(2, 1);
  v << 1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0);
  const double s = 0.1;
  const auto res = euclid_cone_radius(v, s, 1e-3);
  ASSERT_TRUE(res.certified);
  ASSERT_GT(res.radius, 0.0);
  EXPECT_TRUE(res.verticalized.same_as(HomPlane::vertical(1)));
  // Independent sampler: directions within the Euclidean cone X_E(0, V, s^2) at parabolic norm <= r.
  const double half = std::asin(s * s);
  for (const double r : {res.radius, res.radius / 2}) {
    std::size_t outside = 0;
    for (int i = 0; i <= 400; ++i) {
      const double theta = std::atan2(1.0, 1.0) - half + 2 * half * i / 400.0;
      for (int j = 1; j <= 400; ++j) {
        for (const double sign : {1.0, -1.0}) {
          const Point q = P1(sign * std::cos(theta) * j * 1e-3, sign * std::sin(theta) * j * 1e-3);
          if (norm(q) > r || norm(q) == 0.0) continue;
          outside += cone_membership(Cone(Point::zero(1), res.verticalized, s), q) == ConeSide::outside ? 1 : 0;
        }
      }
    }
    EXPECT_EQ(outside, 0u) << "r = " << r;
  }
}

TEST(EuclidCone, HorizontalSubspaceRejected) {
  Eigen::MatrixXd v(2, 1);
  v << 1.0, 0.0;
  EXPECT_THROW(euclid_cone_radius(v, 0.1, 1e-3), std::invalid_argument);
}
