#include <gtest/gtest.h>

#include <cmath>

#include "parabgmt/generators.hpp"
#include "parabgmt/rectify.hpp"

using namespace parabgmt;

namespace {

Point P1(double x, double t) { return Point{Eigen::VectorXd::Constant(1, x), t}; }

DiscreteMeasure cloud_of(const std::vector<Point>& pts, double w) {
  return DiscreteMeasure(PointCloud::from_points(pts), std::vector<double>(pts.size(), w));
}

DiscreteMeasure horizontal_segment(double h) {
  std::vector<Point> pts;
  for (int i = -static_cast<int>(std::lround(1 / h)); i * h <= 1.0 + 1e-12; ++i) pts.push_back(P1(i * h, 0.0));
  auto mu = cloud_of(pts, h);
  mu.set_resolution(h);
  return mu;
}

/// Brute-force mass outside the cone in the ball, vertex excluded, normalized by r^m.
double defect_oracle(const DiscreteMeasure& mu, const Point& a, const HomPlane& v, double s, double r, double m) {
  double sum = 0.0;
  for (std::size_t i = 0; i < mu.size(); ++i) {
    const Point q = mu.points().point(i);
    const double d = metric_eval(q, a);
    if (d == 0.0 || d > r) continue;
    if (distance_to_plane(q - a, v) >= s * d) sum += mu.weights()[i];
  }
  return sum / std::pow(r, m);
}

}  // namespace

TEST(ConeDefect, PlaneSupportedMeasureIsZero) {
  const auto mu = gen_flat(HomPlane::coordinate(2, {1}, true), 1.0, 0.05);
  for (const double s : {0.05, 0.5}) {
    EXPECT_EQ(cone_defect(mu, Point::zero(2), HomPlane::coordinate(2, {1}, true), s, 0.5, 3.0), 0.0);
  }
}

TEST(ConeDefect, OrthogonalPlaneSeesAllMass) {
  const auto mu = horizontal_segment(1e-3);
  const double r = 0.3;
  const double got = cone_defect(mu, Point::zero(1), HomPlane::vertical(1), 0.5, r, 1.0);
  EXPECT_NEAR(got, defect_oracle(mu, Point::zero(1), HomPlane::vertical(1), 0.5, r, 1.0), 1e-12);
  EXPECT_NEAR(got, 2.0, 0.01);
}

TEST(ConeDefect, MatchesBruteForceOnCantorCloud) {
  const auto mu = gen_cantor_segments({{}, 3, 0, 3000});
  for (std::size_t k = 0; k < 5; ++k) {
    const Point a = mu.points().point(k * 500);
    const HomPlane v = HomPlane::coordinate(1, {0}, false);
    EXPECT_NEAR(cone_defect(mu, a, v, 0.3, 0.1, 1.0), defect_oracle(mu, a, v, 0.3, 0.1, 1.0), 1e-12);
  }
}

TEST(DetectTangent, HorizontalSegmentInterior) {
  const auto mu = horizontal_segment(1e-3);
  TangentConfig cfg;
  cfg = resolve_config(mu, cfg);
  const auto res = detect_tangent(mu, P1(0.2, 0.0), cfg);
  ASSERT_TRUE(res.best_plane.has_value());
  EXPECT_TRUE(res.best_plane->same_as(HomPlane::coordinate(1, {0}, false)));
  EXPECT_LE(res.min_defect, 0.02);
  EXPECT_EQ(res.cls, TangentClass::horizontal);
}

TEST(DetectTangent, VerticalLineGraphFindsTimeAxis) {
  std::vector<Point> pts;
  const double dt = 1e-6;
  for (int i = 0; i <= 1000000; ++i) pts.push_back(P1(0.8 * i * dt, i * dt));
  auto mu = cloud_of(pts, dt);
  mu.set_resolution(std::sqrt(dt));
  TangentConfig cfg;
  cfg.m = 2;
  const auto res = detect_tangent(mu, P1(0.4, 0.5), resolve_config(mu, cfg));
  ASSERT_TRUE(res.best_plane.has_value());
  EXPECT_TRUE(res.best_plane->same_as(HomPlane::vertical(1)));
  EXPECT_EQ(res.cls, TangentClass::vertical);
}

TEST(DetectTangent, EmptyBallsGiveNone) {
  const auto mu = horizontal_segment(1e-2);
  TangentConfig cfg;
  cfg.r_list = {0.001, 0.0005};
  const auto res = detect_tangent(mu, P1(0.0, 0.0), resolve_config(mu, cfg));
  EXPECT_EQ(res.cls, TangentClass::none);
  EXPECT_TRUE(res.curve.empty());
}

TEST(ClassifyPoints, FlatHorizontalAllHorizontal) {
  const auto mu = gen_flat(HomPlane::coordinate(2, {0}, false), 1.0, 1e-3);
  TangentConfig cfg;
  cfg.sample_points = 100;
  const auto rep = classify_points(mu, cfg);
  EXPECT_GE(rep.horizontal_fraction, 0.95);
  EXPECT_NEAR(rep.horizontal_fraction + rep.vertical_fraction + rep.none_fraction, 1.0, 1e-9);
  for (const auto& p : rep.points) {
    for (const auto& d : p.result.curve) EXPECT_GE(d.defect, 0.0);
  }
}

TEST(Blowup, FlatStaysFlatWithUnitMass) {
  const auto mu = gen_flat(HomPlane::coordinate(1, {0}, false), 1.0, 1e-3);
  const auto nu = blowup_measure(mu, Point::zero(1), 0.25, Normalization::mass);
  EXPECT_NEAR(nu.total_mass(), 1.0, 1e-12);
  for (std::size_t i = 0; i < nu.size(); ++i) {
    EXPECT_EQ(nu.points().t(i), 0.0);
    EXPECT_LE(norm(nu.points().point(i)), 1.0);
  }
  FlatnessConfig fc;
  EXPECT_LE(flatness_defect(nu, fc).defect, 0.05);
}

TEST(Blowup, EmptyBallRejected) {
  const auto mu = horizontal_segment(1e-2);
  EXPECT_THROW(blowup_measure(mu, P1(0, 10), 0.1, Normalization::mass), std::invalid_argument);
  EXPECT_NO_THROW(blowup_measure(mu, P1(0, 10), 0.1, Normalization::power, 1.0));
}

TEST(Blowup, CompositionOfDilations) {
  const auto mu = gen_cantor_segments({{}, 3, 0, 5000});
  const Point a = mu.points().point(1234);
  const double r = 0.2;
  const double rho = 0.5;
  const auto twice = blowup_measure(blowup_measure(mu, a, r, Normalization::power, 1.0), Point::zero(1), rho,
                                    Normalization::power, 1.0);
  const auto once = blowup_measure(mu, a, r * rho, Normalization::power, 1.0);
  ASSERT_EQ(twice.size(), once.size());
  for (std::size_t i = 0; i < once.size(); ++i) {
    EXPECT_LE(metric_eval(twice.points().point(i), once.points().point(i)), 1e-12);
    EXPECT_NEAR(twice.weights()[i], once.weights()[i], 1e-12 * once.weights()[i]);
  }
}

TEST(Flatness, HalfPlaneHasEmptyCells) {
  std::vector<Point> pts;
  for (int i = 0; i <= 1000; ++i) pts.push_back(P1(i * 1e-3, 0.0));
  FlatnessConfig fc;
  EXPECT_GE(flatness_defect(cloud_of(pts, 1e-3), fc).defect, 0.4);
}

TEST(Flatness, EuclideanDiagonalIsNotFlat) {
  std::vector<Point> pts;
  for (int i = -1000; i <= 1000; ++i) pts.push_back(P1(i * 1e-3, i * 1e-3));
  FlatnessConfig fc;
  fc.tube = 0.05;
  for (const int m : {1, 2}) {
    fc.m = m;
    EXPECT_GE(flatness_defect(cloud_of(pts, 1e-3), fc).defect, 0.3);
  }
}

TEST(UniquenessScan, FlatPlaneHasNoSpread) {
  const auto mu = gen_flat(HomPlane::vertical(1), 1.0, 1.0 / 512);
  FlatnessConfig fc;
  fc.m = 2;
  const auto scan = tangent_uniqueness_scan(mu, Point::zero(1), {0.5, 0.25, 0.125}, fc);
  EXPECT_LE(scan.spread, 1e-12);
  EXPECT_LE(scan.max_defect, 0.05);
}

TEST(UniquenessScan, SmoothVerticalGraphSettles) {
  GraphDomain dom{Eigen::VectorXd(0), Eigen::VectorXd(0), -1.0, 1.0};
  const auto mu = gen_graph([](const Point& p) { return P1(0.3 * std::sin(2.0 * p.t), 0.0); }, HomPlane::vertical(1), dom,
                            1.0 / 1024);
  FlatnessConfig fc;
  fc.m = 2;
  const auto scan = tangent_uniqueness_scan(mu, P1(0.0, 0.0), {0.25, 0.125, 0.0625}, fc);
  EXPECT_LE(scan.spread, 0.1);
}

TEST(UniquenessScan, OscillatingGraphShowsNoUniqueTangent) {
  const auto mu = gen_weierstrass_graph({1, 0.05, kDefaultWeierstrassTerms, 1e-6});
  FlatnessConfig fc;
  fc.m = 2;
  const Point a = mu.points().point(mu.size() / 3);
  const auto scan = tangent_uniqueness_scan(mu, a, {0.25, 0.125, 0.0625, 0.03125}, fc);
  EXPECT_TRUE(scan.max_defect >= 0.05 || scan.spread >= 0.3) << scan.max_defect << " " << scan.spread;
}

TEST(Differential, LinearHorizontalGraphExact) {
  const HomPlane v = HomPlane::coordinate(2, {0}, false);
  GraphDomain dom{Eigen::VectorXd::Constant(1, -1.0), Eigen::VectorXd::Constant(1, 1.0), 0.0, 0.0};
  const auto g = graph_samples([](const Point& p) { return Point{Eigen::Vector2d(0.0, 0.4 * p.x[0]), 0.0}; }, v, dom, 1e-3);
  DifferentialConfig cfg;
  cfg.scales = default_differential_scales(1e-3);
  const auto fit = fit_differential(g, g.base.size() / 2, cfg);
  ASSERT_FALSE(fit.rank_deficient);
  EXPECT_NEAR(fit.lambda(1, 0), 0.4, 1e-9);
  EXPECT_NEAR(fit.lambda(0, 0), 0.0, 1e-9);
  for (const auto& [rho, res] : fit.residual_curve) EXPECT_LE(res, 1e-9);
  EXPECT_TRUE(fit.differentiable.value_or(false));
}

TEST(Differential, ConstantGraph) {
  const HomPlane v = HomPlane::coordinate(1, {0}, false);
  GraphDomain dom{Eigen::VectorXd::Constant(1, 0.0), Eigen::VectorXd::Constant(1, 1.0), 0.0, 0.0};
  const auto g = graph_samples([](const Point&) { return P1(0.0, 0.25); }, v, dom, 1e-3);
  DifferentialConfig cfg;
  cfg.scales = default_differential_scales(1e-3);
  const auto fit = fit_differential(g, 500, cfg);
  EXPECT_LE(fit.lambda.cwiseAbs().maxCoeff(), 1e-12);
  for (const auto& [rho, res] : fit.residual_curve) EXPECT_LE(res, 1e-12);
}

TEST(Differential, TimeComponentDefeatsDifferentiability) {
  const HomPlane v = HomPlane::coordinate(1, {0}, false);
  GraphDomain dom{Eigen::VectorXd::Constant(1, 0.0), Eigen::VectorXd::Constant(1, 1.0), 0.0, 0.0};
  const double beta = 0.5;
  const auto g = graph_samples([&](const Point& p) { return P1(0.0, beta * p.x[0]); }, v, dom, 1e-4);
  DifferentialConfig cfg;
  cfg.scales = {0.08, 0.02, 0.005};
  const auto fit = fit_differential(g, 5000, cfg);
  // |beta dx|^{1/2} / |dx| peaks at the nearest neighbour, so every scale sees sqrt(beta / h).
  for (const auto& [scale, residual] : fit.residual_curve) EXPECT_NEAR(residual, std::sqrt(beta / 1e-4), 1e-6);
  EXPECT_FALSE(fit.differentiable.value_or(true));
}

TEST(Split, LinearGraphIsOnePiece) {
  const HomPlane base = HomPlane::coordinate(2, {0}, false);
  GraphDomain line{Eigen::VectorXd::Constant(1, -1.0), Eigen::VectorXd::Constant(1, 1.0), 0.0, 0.0};
  const auto g = graph_samples([](const Point& p) { return Point{Eigen::Vector2d(0.0, 0.3 * p.x[0]), 0.0}; }, base, line,
                               0.01);
  DifferentialConfig cfg;
  cfg.scales = {0.32, 0.16, 0.08};
  std::vector<DifferentialFit> fits;
  for (std::size_t i = 0; i < g.base.size(); ++i) fits.push_back(fit_differential(g, i, cfg));
  for (const double L : {0.05, 0.2}) EXPECT_EQ(split_lipschitz(g, fits, L).pieces.size(), 1u);
}

TEST(Split, SineGraphPiecesCertifiedBruteForce) {
  const HomPlane base = HomPlane::coordinate(2, {0}, false);
  GraphDomain line{Eigen::VectorXd::Constant(1, 0.0), Eigen::VectorXd::Constant(1, 1.0), 0.0, 0.0};
  const auto g = graph_samples([](const Point& p) { return Point{Eigen::Vector2d(0.0, 0.2 * std::sin(p.x[0])), 0.0}; }, base,
                               line, 2e-3);
  DifferentialConfig cfg;
  cfg.scales = default_differential_scales(2e-3);
  std::vector<DifferentialFit> fits;
  for (std::size_t i = 0; i < g.base.size(); ++i) fits.push_back(fit_differential(g, i, cfg));
  std::size_t previous = std::numeric_limits<std::size_t>::max();
  for (const double L : {0.05, 0.1, 0.2}) {
    const auto split = split_lipschitz(g, fits, L);
    EXPECT_LE(split.pieces.size(), previous);
    previous = split.pieces.size();
    std::size_t covered = 0;
    for (const auto& piece : split.pieces) {
      covered += piece.members.size();
      std::vector<Point> pts;
      for (const auto i : piece.members) pts.push_back(g.base[i] + g.value[i]);
      // Pairwise: the complement part relative to the tilted plane stays inside the cone.
      for (std::size_t a = 0; a < pts.size(); ++a) {
        for (std::size_t b = a + 1; b < pts.size(); b += 7) {
          const Point d = pts[b] - pts[a];
          EXPECT_LT(distance_to_plane(d, piece.tilted), split.aperture * norm(d) + 1e-9);
        }
      }
    }
    EXPECT_EQ(covered, g.base.size());
  }
}
