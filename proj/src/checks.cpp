#include "parabgmt/checks.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <tuple>
#include <sstream>
#include <stdexcept>

#include "parabgmt/generators.hpp"
#include "parabgmt/rectify.hpp"

namespace parabgmt {
namespace {

constexpr std::size_t kMaxViolations = 10;

class Recorder {
 public:
  Recorder(std::string suite, std::string name) {
    result_.suite = std::move(suite);
    result_.name = std::move(name);
  }
  void ok() { ++result_.cases; }
  void fail(const std::string& what) {
    ++result_.cases;
    ++result_.failures;
    if (result_.violations.size() < kMaxViolations) result_.violations.push_back(what);
  }
  void expect(bool good, const std::string& what) { good ? ok() : fail(what); }
  void detail(std::string d) { result_.detail = std::move(d); }
  CheckResult done() { return std::move(result_); }

 private:
  CheckResult result_;
};

std::string num(double v) {
  std::ostringstream os;
  os.precision(12);
  os << v;
  return os.str();
}

double gaussian(std::mt19937_64& rng) { return std::normal_distribution<double>(0.0, 1.0)(rng); }
double uniform(std::mt19937_64& rng, double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); }
int pick(std::mt19937_64& rng, int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); }

std::string describe(const Point& p) {
  std::ostringstream os;
  os.precision(17);
  os << '(';
  for (Eigen::Index i = 0; i < p.x.size(); ++i) os << p.x[i] << ',';
  os << p.t << ')';
  return os.str();
}

}  // namespace

Point random_point(std::mt19937_64& rng, int n, double scale) {
  Eigen::VectorXd x(n);
  for (int i = 0; i < n; ++i) x[i] = scale * uniform(rng, -1.0, 1.0);
  return {x, scale * scale * uniform(rng, -1.0, 1.0)};
}

HomPlane random_plane(std::mt19937_64& rng, int n, bool vertical, int k) {
  if (vertical && k == 0) return HomPlane::vertical(n);
  Eigen::MatrixXd g(n, k);
  for (Eigen::Index c = 0; c < g.cols(); ++c) {
    for (Eigen::Index r = 0; r < g.rows(); ++r) g(r, c) = gaussian(rng);
  }
  return HomPlane::from_span(g, vertical);
}

HomPlane random_plane(std::mt19937_64& rng, int n) {
  const bool vertical = pick(rng, 0, 1) == 1;
  const int k = vertical ? pick(rng, 0, n - 1) : pick(rng, 1, n);
  return random_plane(rng, n, vertical, k);
}

std::vector<Point> lipschitz_graph_points(const HomPlane& plane, double L, std::size_t count, std::uint64_t seed) {
  if (!(L >= 0.0)) throw std::invalid_argument("Lipschitz constant must be nonnegative");
  std::mt19937_64 rng(seed);
  const int n = plane.n();
  const int k = plane.k();
  const bool vertical = plane.is_vertical();
  const Eigen::MatrixXd comp = Eigen::MatrixXd::Identity(n, n) - plane.projector();
  // Unit direction in the horizontal part of the complement; none when V contains all of R^n.
  Eigen::VectorXd dir = Eigen::VectorXd::Zero(n);
  if (n > k) {
    for (int tries = 0; tries < 16 && dir.norm() < 1e-6; ++tries) {
      Eigen::VectorXd v(n);
      for (int i = 0; i < n; ++i) v[i] = gaussian(rng);
      dir = comp * v;
    }
    dir.normalize();
  }
  Eigen::VectorXd w(k);
  for (int j = 0; j < k; ++j) w[j] = gaussian(rng);
  if (k > 0) w.normalize();
  const double phase = uniform(rng, 0.0, 6.28);
  const double t0 = uniform(rng, -1.0, 1.0);
  // |a sin(w.u) - a sin(w.u')| + |b sqrt|t-t0| - b sqrt|t'-t0|| <= sqrt(a^2+b^2) ||base difference||.
  const double a = vertical ? (k > 0 ? std::sqrt(0.5) : 0.0) : 1.0;
  const double b = vertical ? std::sqrt(1.0 - a * a) : 0.0;
  std::vector<Point> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    Eigen::VectorXd u(k);
    for (int j = 0; j < k; ++j) u[j] = uniform(rng, -1.0, 1.0);
    const double t = vertical ? uniform(rng, -1.0, 1.0) : 0.0;
    const double wave = k > 0 ? std::sin(w.dot(u) + phase) : 0.0;
    const double phi = a * wave + b * std::sqrt(std::abs(t - t0)) * (t >= t0 ? 1.0 : -1.0);
    // Signed square root keeps the 1/2-Hoelder constant at most sqrt 2; rescale accordingly.
    const double value = L * (vertical ? phi / std::sqrt(2.0) : phi);
    out.push_back(Point{plane.basis() * u + value * dir, t});
  }
  return out;
}

CheckResult check_homogeneity(const SuiteConfig& cfg) {
  Recorder rec("geometry", "homogeneity");
  std::mt19937_64 rng(cfg.seed);
  for (std::size_t c = 0; c < cfg.cases; ++c) {
    const int n = pick(rng, 1, 4);
    const Point p = random_point(rng, n, 10.0);
    const Point q = random_point(rng, n, 10.0);
    const double r = std::exp(uniform(rng, std::log(1e-3), std::log(1e3)));
    const double lhs = metric_eval(dilate(r, p), dilate(r, q));
    const double rhs = r * metric_eval(p, q);
    const bool good = std::abs(lhs - rhs) <= 1e-12 * std::max(1.0, rhs);
    if (!good) rec.fail("r=" + num(r) + " p=" + describe(p) + " q=" + describe(q) + " lhs=" + num(lhs) + " rhs=" + num(rhs));
    else rec.ok();
  }
  return rec.done();
}

CheckResult check_norm_split(const SuiteConfig& cfg) {
  Recorder rec("geometry", "norm_split");
  std::mt19937_64 rng(cfg.seed + 1);
  for (std::size_t c = 0; c < cfg.cases; ++c) {
    const int n = pick(rng, 1, 4);
    const HomPlane plane = random_plane(rng, n);
    const Point p = random_point(rng, n, 10.0);
    const double lhs = std::pow(norm(p), 2);
    const double rhs = std::pow(norm(project(plane, p, Part::onto)), 2) + std::pow(norm(project(plane, p, Part::complement)), 2);
    const bool good = std::abs(lhs - rhs) <= 1e-12 * std::max(1.0, lhs);
    if (!good) rec.fail("p=" + describe(p) + " |p|^2=" + num(lhs) + " split=" + num(rhs));
    else rec.ok();
  }
  return rec.done();
}

CheckResult check_cone_complement(const SuiteConfig& cfg) {
  Recorder rec("geometry", "cone_complement");
  std::mt19937_64 rng(cfg.seed + 2);
  std::size_t band = 0;
  for (std::size_t c = 0; c < cfg.cases; ++c) {
    const int n = pick(rng, 1, 4);
    const HomPlane plane = random_plane(rng, n);
    const double s = uniform(rng, 0.02, 0.98);
    const Point p = random_point(rng, n);
    const Point q = random_point(rng, n);
    const ConeSide a = cone_membership(Cone(p, plane, s), q);
    const ConeSide b = cone_membership(Cone(p, complement_plane(plane), std::sqrt(1.0 - s * s)), q);
    if (a == ConeSide::boundary || b == ConeSide::boundary) {
      ++band;
      rec.ok();
      continue;
    }
    const bool good = (b == ConeSide::inside) == (a == ConeSide::outside);
    if (!good) rec.fail("s=" + num(s) + " p=" + describe(p) + " q=" + describe(q));
    else rec.ok();
  }
  rec.detail("boundary band cases: " + std::to_string(band));
  return rec.done();
}

CheckResult check_projection_lipschitz(const SuiteConfig& cfg) {
  Recorder rec("geometry", "projection_lipschitz");
  std::mt19937_64 rng(cfg.seed + 3);
  for (std::size_t c = 0; c < cfg.cases; ++c) {
    const int n = pick(rng, 1, 4);
    const HomPlane plane = random_plane(rng, n);
    const Part part = pick(rng, 0, 1) == 0 ? Part::onto : Part::complement;
    const Point p = random_point(rng, n, 10.0);
    const Point q = random_point(rng, n, 10.0);
    const double d = metric_eval(p, q);
    const double dp = metric_eval(project(plane, p, part), project(plane, q, part));
    if (dp > d * (1.0 + 1e-12)) rec.fail("p=" + describe(p) + " q=" + describe(q) + " d=" + num(d) + " projected=" + num(dp));
    else rec.ok();
  }
  return rec.done();
}

CheckResult check_translation_invariance(const SuiteConfig& cfg) {
  Recorder rec("geometry", "translation_invariance");
  std::mt19937_64 rng(cfg.seed + 4);
  std::size_t band = 0;
  for (std::size_t c = 0; c < cfg.cases; ++c) {
    const int n = pick(rng, 1, 4);
    const HomPlane plane = random_plane(rng, n);
    const double s = uniform(rng, 0.02, 0.98);
    const Point p = random_point(rng, n);
    const Point q = random_point(rng, n);
    const Point h = random_point(rng, n, 4.0);
    const ConeSide a = cone_membership(Cone(p, plane, s), q);
    const ConeSide b = cone_membership(Cone(p + h, plane, s), q + h);
    if (a == ConeSide::boundary || b == ConeSide::boundary) {
      ++band;
      rec.ok();
      continue;
    }
    if (a != b) rec.fail("s=" + num(s) + " p=" + describe(p) + " q=" + describe(q) + " h=" + describe(h));
    else rec.ok();
  }
  rec.detail("boundary band cases: " + std::to_string(band));
  return rec.done();
}

CheckResult check_graph_round_trip(const SuiteConfig& cfg) {
  Recorder rec("geometry", "graph_round_trip");
  std::mt19937_64 rng(cfg.seed + 5);
  const std::size_t fixtures = std::max<std::size_t>(1, cfg.cases / 100);
  double worst = 0.0;
  for (std::size_t f = 0; f < fixtures; ++f) {
    const int n = pick(rng, 1, 3);
    const HomPlane plane = random_plane(rng, n);
    const double L = uniform(rng, 0.05, 0.6);
    const double s = L + 0.01;
    const auto pts = lipschitz_graph_points(plane, L, 60, rng());
    try {
      const GraphMap g = graph_extract(pts, plane, s);
      const auto back = g.reassemble();
      double err = 0.0;
      for (std::size_t i = 0; i < pts.size(); ++i) err = std::max(err, metric_eval(back[i], pts[i]));
      worst = std::max(worst, err);
      const bool good = err <= 1e-12 && g.empirical_constant <= g.lipschitz_bound + 1e-9;
      if (!good) rec.fail("fixture " + std::to_string(f) + ": reassembly error " + num(err) + ", constant " + num(g.empirical_constant));
      else rec.ok();
    } catch (const GraphRejected& e) {
      rec.fail("fixture " + std::to_string(f) + ": " + e.what());
    }
  }
  rec.detail("max reassembly error " + num(worst));
  return rec.done();
}

namespace {

// ---------------------------------------------------------------- measure

PointCloud random_cloud(std::mt19937_64& rng, int n, std::size_t count) {
  PointCloud c(n);
  for (std::size_t i = 0; i < count; ++i) {
    Eigen::VectorXd x(n);
    for (int j = 0; j < n; ++j) x[j] = uniform(rng, 0.0, 1.0);
    c.push_back(Point{x, uniform(rng, 0.0, 1.0)});
  }
  return c;
}

CheckResult check_cover_validity(const SuiteConfig& cfg) {
  Recorder rec("measure", "cover_validity");
  std::mt19937_64 rng(cfg.seed + 10);
  for (int f = 0; f < 12; ++f) {
    const int n = pick(rng, 1, 2);
    const Metric metric = f % 2 == 0 ? Metric::parabolic : Metric::euclidean;
    const PointCloud cloud = random_cloud(rng, n, 400);
    const double r = uniform(rng, 0.03, 0.4);
    const auto centers = greedy_cover(cloud, r, metric);
    bool good = true;
    for (std::size_t i = 0; i < cloud.size() && good; ++i) {
      bool covered = false;
      for (const auto c : centers) covered = covered || row_distance(cloud[i], cloud[c], metric) <= r;
      good = covered;
    }
    for (std::size_t a = 0; a < centers.size() && good; ++a) {
      for (std::size_t b = a + 1; b < centers.size() && good; ++b) good = row_distance(cloud[centers[a]], cloud[centers[b]], metric) > r;
    }
    rec.expect(good, "fixture " + std::to_string(f) + " r=" + num(r));
  }
  return rec.done();
}

CheckResult check_cover_monotonicity(const SuiteConfig& cfg) {
  Recorder rec("measure", "cover_monotonicity");
  std::mt19937_64 rng(cfg.seed + 11);
  const std::vector<double> scales{0.5, 0.35, 0.25, 0.18, 0.12, 0.09, 0.06, 0.04};
  for (int f = 0; f < 6; ++f) {
    const PointCloud cloud = random_cloud(rng, pick(rng, 1, 2), 600);
    const Metric metric = f % 2 == 0 ? Metric::parabolic : Metric::euclidean;
    std::size_t prev = 0;
    bool good = true;
    for (const double r : scales) {
      const std::size_t count = greedy_cover(cloud, r, metric).size();
      good = good && count >= prev;
      prev = count;
    }
    rec.expect(good, "N(r) increased with r in fixture " + std::to_string(f));
    const auto s1 = hausdorff_sum(cloud, 1.0, scales, metric);
    const auto s2 = hausdorff_sum(cloud, 2.0, scales, metric);
    bool mono = true;
    for (std::size_t j = 0; j < s1.size(); ++j) mono = mono && s2[j] <= s1[j];
    rec.expect(mono, "hausdorff_sum increased with s in fixture " + std::to_string(f));
  }
  return rec.done();
}

struct DimFixture {
  std::string name;
  PointCloud cloud;
  std::vector<double> euclid_scales;
  std::vector<double> para_scales;
};

std::vector<double> halving(double top, int count) {
  std::vector<double> out;
  for (int i = 0; i < count; ++i) out.push_back(top / std::pow(2.0, i));
  return out;
}

std::vector<DimFixture> dimension_fixtures() {
  std::vector<DimFixture> out;
  {
    PointCloud c(1);
    for (int i = 0; i <= 20000; ++i) c.push_back(Point{Eigen::VectorXd::Constant(1, i * 5e-5), 0.0});
    out.push_back({"horizontal segment", std::move(c), halving(0.08, 6), halving(0.08, 6)});
  }
  {
    PointCloud c(1);
    for (int i = 0; i <= 200000; ++i) c.push_back(Point{Eigen::VectorXd::Zero(1), i * 5e-6});
    out.push_back({"t-axis segment", std::move(c), halving(0.08, 6), halving(0.32, 6)});
  }
  {
    auto w = gen_weierstrass_graph({1, 0.05, kDefaultWeierstrassTerms, 4e-6});
    out.push_back({"oscillating graph", w.points(), halving(0.08, 6), halving(0.32, 6)});
  }
  return out;
}

CheckResult check_dimension_comparison(const SuiteConfig&) {
  Recorder rec("measure", "euclidean_parabolic_comparison");
  std::string detail;
  for (const auto& f : dimension_fixtures()) {
    const double s = dimension_fit(f.cloud, f.euclid_scales, Metric::euclidean).fitted_dim;
    const double sp = dimension_fit(f.cloud, f.para_scales, Metric::parabolic).fitted_dim;
    detail += f.name + ": euclidean " + num(s) + " parabolic " + num(sp) + "; ";
    rec.expect(s - 0.2 <= sp && sp <= s + 1.0 + 0.2, f.name + ": euclidean " + num(s) + ", parabolic " + num(sp));
  }
  rec.detail(detail);
  return rec.done();
}

CheckResult check_vertical_graph_euclidean_dim(const SuiteConfig&) {
  Recorder rec("measure", "vertical_graph_euclidean_dimension");
  const auto w = gen_weierstrass_graph({1, 0.05, kDefaultWeierstrassTerms, 4e-6});
  const double s = dimension_fit(w.points(), halving(0.08, 6), Metric::euclidean).fitted_dim;
  rec.expect(s <= 1.6, "euclidean dimension " + num(s));
  rec.detail("euclidean dimension " + num(s));
  return rec.done();
}

CheckResult check_density_bounds(const SuiteConfig& cfg) {
  Recorder rec("measure", "upper_density_bounds");
  std::mt19937_64 rng(cfg.seed + 12);
  struct Case {
    DiscreteMeasure mu;
    double s;
  };
  std::vector<Case> cases;
  cases.push_back({gen_flat(HomPlane::coordinate(1, {0}, false), 1.0, 1e-4), 1.0});
  cases.push_back({gen_flat(HomPlane::vertical(1), 1.0, 4e-3), 2.0});
  cases.push_back({gen_flat(HomPlane::coordinate(2, {0, 1}, false), 1.0, 5e-3), 2.0});
  double lo = 1e9;
  double hi = 0.0;
  for (const auto& c : cases) {
    const double res = *c.mu.resolution();
    const std::vector<double> scales{64 * res, 32 * res, 16 * res, 8 * res};
    for (int k = 0; k < 8; ++k) {
      const auto idx = static_cast<std::size_t>(std::uniform_int_distribution<std::size_t>(0, c.mu.size() - 1)(rng));
      const auto est = density_profile(c.mu, c.mu.points().point(idx), c.s, scales);
      lo = std::min(lo, est.upper);
      hi = std::max(hi, est.upper);
      rec.expect(est.upper >= std::pow(2.0, -c.s) * 0.5 && est.upper <= 1.5,
                 "upper density " + num(est.upper) + " at s=" + num(c.s));
    }
  }
  rec.detail("upper densities in [" + num(lo) + ", " + num(hi) + "]");
  return rec.done();
}

// ---------------------------------------------------------------- rectify

DiscreteMeasure dilate_measure(const DiscreteMeasure& mu, double lambda, double m) {
  PointCloud pts(mu.n());
  std::vector<double> w;
  for (std::size_t i = 0; i < mu.size(); ++i) {
    pts.push_back(dilate(lambda, mu.points().point(i)));
    w.push_back(mu.weights()[i] * std::pow(lambda, m));
  }
  return DiscreteMeasure(std::move(pts), std::move(w), mu.nominal_dim(), mu.provenance());
}

CheckResult check_dilation_equivariance(const SuiteConfig& cfg) {
  Recorder rec("rectify", "dilation_equivariance");
  std::mt19937_64 rng(cfg.seed + 20);
  const auto mu = gen_weierstrass_graph({1, 0.05, kDefaultWeierstrassTerms, 1e-4});
  const double m = 2.0;
  for (const double lambda : {0.5, 2.0, 4.0}) {
    const auto nu = dilate_measure(mu, lambda, m);
    for (int k = 0; k < 6; ++k) {
      const auto idx = std::uniform_int_distribution<std::size_t>(0, mu.size() - 1)(rng);
      const Point a = mu.points().point(idx);
      const HomPlane plane = random_plane(rng, 1, k % 2 == 0, k % 2 == 0 ? 0 : 1);
      const double s = uniform(rng, 0.1, 0.6);
      const double r = uniform(rng, 0.05, 0.2);
      const double lhs = cone_defect(mu, a, plane, s, r, m);
      const double rhs = cone_defect(nu, dilate(lambda, a), plane, s, lambda * r, m);
      rec.expect(std::abs(lhs - rhs) <= 1e-12 * std::max(1.0, lhs), "lambda=" + num(lambda) + ": " + num(lhs) + " vs " + num(rhs));
    }
  }
  return rec.done();
}

CheckResult check_restriction_invariance(const SuiteConfig& cfg) {
  Recorder rec("rectify", "restriction_invariance");
  const auto mu = gen_cantor_segments({{}, 4, 0, 20000});
  TangentConfig tc;
  tc.m = 1;
  tc.seed = cfg.seed;
  tc = resolve_config(mu, tc);
  const double r_max = tc.r_list.front();
  for (const auto idx : seeded_subsample(mu.size(), 12, cfg.seed)) {
    const Point a = mu.points().point(idx);
    PointCloud pts(1);
    std::vector<double> w;
    for (std::size_t i = 0; i < mu.size(); ++i) {
      if (metric_eval(mu.points().point(i), a) <= r_max) {
        pts.push_back(mu.points()[i]);
        w.push_back(mu.weights()[i]);
      }
    }
    const DiscreteMeasure local(std::move(pts), std::move(w));
    const auto full = detect_tangent(mu, a, tc);
    const auto part = detect_tangent(local, a, tc);
    rec.expect(full.cls == part.cls && full.min_defect == part.min_defect,
               "atom " + std::to_string(idx) + ": " + to_string(full.cls) + " vs " + to_string(part.cls));
  }
  return rec.done();
}

CheckResult check_blowup_flatness(const SuiteConfig& cfg) {
  Recorder rec("rectify", "blowup_of_flat_measure");
  FlatnessConfig fc;
  fc.seed = cfg.seed;
  for (const auto& [plane, m, res] : {std::tuple{HomPlane::coordinate(1, {0}, false), 1, 1.0 / 2048},
                                      std::tuple{HomPlane::vertical(1), 2, 1.0 / 256}}) {
    fc.m = m;
    const auto flat = gen_flat(plane, 1.0, res);
    const auto base = flatness_defect(flat, fc);
    for (const double r : {0.5, 0.25}) {
      const auto blown = flatness_defect(blowup_measure(flat, Point::zero(1), r, Normalization::mass), fc);
      rec.expect(blown.defect == base.defect, "r=" + num(r) + ": " + num(blown.defect) + " vs " + num(base.defect));
    }
  }
  return rec.done();
}

CheckResult check_small_lipschitz_tangents(const SuiteConfig& cfg) {
  Recorder rec("rectify", "small_lipschitz_graph_tangents");
  TangentConfig tc;
  tc.seed = cfg.seed;
  tc.sample_points = 100;
  std::string detail;
  {
    GraphDomain dom{Eigen::VectorXd::Constant(1, -1.0), Eigen::VectorXd::Constant(1, 1.0), 0.0, 0.0};
    const auto plane = HomPlane::coordinate(2, {0}, false);
    const auto mu = gen_graph([](const Point& p) { return Point{Eigen::Vector2d(0.0, 0.03 * std::sin(3.0 * p.x[0])), 0.0}; },
                              plane, dom, 1e-4);
    tc.m = 1;
    const auto rep = classify_points(mu, tc);
    std::size_t good = 0;
    for (const auto& p : rep.points) good += p.result.best_plane && p.result.min_defect <= 0.05 ? 1 : 0;
    const double frac = static_cast<double>(good) / static_cast<double>(rep.points.size());
    detail += "horizontal graph " + num(frac) + "; ";
    rec.expect(frac >= 0.95, "horizontal graph: planes found at " + num(frac));
  }
  {
    const auto mu = gen_cantor_segments({{}, 5, 0, 100000});
    tc.m = 1;
    const auto rep = classify_points(mu, tc);
    const double frac = 1.0 - rep.none_fraction;
    detail += "segment Cantor set " + num(frac);
    rec.expect(frac <= 0.05, "segment Cantor set: planes found at " + num(frac));
  }
  rec.detail(detail);
  return rec.done();
}

GraphMap quartic_graph(const QuarticCantorResult& q) {
  GraphMap g{HomPlane::coordinate(1, {0}, false), {}, {}, 0.0, 0.0};
  for (std::size_t i = 0; i < q.x.size(); ++i) {
    g.base.push_back(Point{Eigen::VectorXd::Constant(1, q.x[i]), 0.0});
    g.value.push_back(Point{Eigen::VectorXd::Zero(1), q.fx[i]});
  }
  return g;
}

CheckResult check_differentiability_dichotomy(const SuiteConfig& cfg) {
  Recorder rec("rectify", "differentiability_dichotomy");
  const auto q = gen_quartic_cantor({});
  const GraphMap qg = quartic_graph(q);
  DifferentialConfig dc;
  dc.scales = default_differential_scales(*q.measure.resolution());
  std::size_t diff = 0;
  const auto qi = seeded_subsample(qg.base.size(), 100, cfg.seed);
  for (const auto i : qi) {
    const auto fit = fit_differential(qg, i, dc);
    diff += fit.differentiable.value_or(false) ? 1 : 0;
  }
  const double qf = static_cast<double>(diff) / static_cast<double>(qi.size());
  rec.expect(qf >= 0.9, "quartic graph differentiable at " + num(qf));

  const double dt = 1e-5;
  const auto f = weierstrass_samples(0.05, kDefaultWeierstrassTerms, dt);
  GraphMap wg{HomPlane::vertical(1), {}, {}, 0.0, 0.0};
  for (std::size_t i = 0; i < f.size(); ++i) {
    wg.base.push_back(Point{Eigen::VectorXd::Zero(1), static_cast<double>(i) * dt});
    wg.value.push_back(Point{Eigen::VectorXd::Constant(1, f[i]), 0.0});
  }
  dc.scales = default_differential_scales(std::sqrt(dt));
  std::size_t rough = 0;
  const auto wi = seeded_subsample(wg.base.size(), 100, cfg.seed);
  for (const auto i : wi) {
    const auto fit = fit_differential(wg, i, dc);
    bool all = true;
    for (const auto& [rho, res] : fit.residual_curve) all = all && res >= 0.1;
    rough += all ? 1 : 0;
  }
  const double wf = static_cast<double>(rough) / static_cast<double>(wi.size());
  rec.expect(wf >= 0.9, "oscillating graph residual >= 0.1 at " + num(wf));
  rec.detail("quartic differentiable " + num(qf) + ", oscillating rough " + num(wf));
  return rec.done();
}

// ---------------------------------------------------------------- generators

bool identical(const DiscreteMeasure& a, const DiscreteMeasure& b) {
  return a.points().raw() == b.points().raw() && a.weights() == b.weights();
}

std::vector<std::pair<std::string, std::function<DiscreteMeasure()>>> small_generators() {
  return {
      {"weierstrass_graph", [] { return gen_weierstrass_graph({1, 0.05, kDefaultWeierstrassTerms, 1e-4}); }},
      {"regular_defeater",
       [] {
         DefeaterSpec s;
         s.dt = 1e-4;
         s.depth = 2;
         return gen_regular_defeater(s).measure;
       }},
      {"cantor_segments", [] { return gen_cantor_segments({{}, 3, 0, 5000}); }},
      {"vertical_cantor", [] { return gen_vertical_cantor({{}, 3, 0.0, 5000}); }},
      {"quartic_cantor", [] { return gen_quartic_cantor({{}, 8}).measure; }},
      {"flat_plane", [] { return gen_flat(HomPlane::coordinate(2, {1}, true), 1.0, 0.02); }},
  };
}

CheckResult check_generator_determinism(const SuiteConfig&) {
  Recorder rec("generators", "determinism");
  for (const auto& [name, gen] : small_generators()) rec.expect(identical(gen(), gen()), name + " differs between runs");
  return rec.done();
}

CheckResult check_generator_labels(const SuiteConfig&) {
  Recorder rec("generators", "measure_invariants_and_labels");
  for (const auto& [name, gen] : small_generators()) {
    const auto mu = gen();
    bool good = !mu.empty() && !mu.provenance().tag.empty() && mu.provenance().notes.count("ground_truth") == 1;
    for (const double w : mu.weights()) good = good && std::isfinite(w) && w > 0.0;
    for (const double v : mu.points().raw()) good = good && std::isfinite(v);
    for (std::size_t i = 1; i < mu.size(); ++i) good = good && row_less(mu.points()[i - 1], mu.points()[i]);
    rec.expect(good, name);
  }
  return rec.done();
}

CheckResult check_oscillation_lower_bound(const SuiteConfig&) {
  Recorder rec("generators", "oscillation_lower_bound");
  const double dt = 1e-5;
  const auto f = weierstrass_samples(0.05, kDefaultWeierstrassTerms, dt);
  const double c = measure_oscillation_constant(f, dt, 10);
  rec.expect(c > 0.0, "measured constant " + num(c));
  const double h = measure_holder_constant(f, dt);
  rec.expect(h <= 1.0, "Hoelder constant " + num(h));
  rec.detail("c = " + num(c) + ", Hoelder constant " + num(h));
  return rec.done();
}

CheckResult check_segment_blowup(const SuiteConfig&) {
  Recorder rec("generators", "segment_cantor_blowup");
  const auto mu = gen_cantor_segments({{3, 4, 1600}, 3, 0, 100000});
  const double r = 1.0 / 12.0;
  const auto nu = blowup_measure(mu, Point::zero(1), r, Normalization::mass);
  double worst = 0.0;
  for (int i = 0; i <= 200; ++i) {
    const double y = 0.5 * i / 200.0;
    const Point target{Eigen::VectorXd::Constant(1, y), y};
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < nu.size(); ++j) best = std::min(best, metric_eval(nu.points().point(j), target));
    worst = std::max(worst, best);
  }
  rec.expect(worst <= 0.05, "one-sided distance " + num(worst));
  rec.detail("one-sided distance " + num(worst));
  return rec.done();
}

CheckResult check_nesting(const SuiteConfig&) {
  Recorder rec("generators", "nesting");
  const double tol = 1e-12;
  {
    const auto levels = cantor_segment_levels(default_cantor_sequence(4), 4);
    for (std::size_t k = 1; k < levels.size(); ++k) {
      for (const auto& s : levels[k]) {
        std::size_t parents = 0;
        for (const auto& p : levels[k - 1]) {
          const bool in_x = s.x0 >= p.x0 - tol && s.x0 + s.r <= p.x0 + p.r + tol;
          const bool in_t = s.t0 >= p.t0 - tol && s.t0 + s.r * s.r <= p.t0 + p.r * p.r + tol;
          parents += in_x && in_t && s.x0 < p.x0 + p.r - tol ? 1 : 0;
        }
        rec.expect(parents == 1, "segment level " + std::to_string(k + 1) + " has " + std::to_string(parents) + " parents");
      }
    }
  }
  {
    const auto levels = vertical_cantor_levels(default_vertical_sequence(3), 3);
    for (std::size_t k = 1; k < levels.size(); ++k) {
      for (const auto& R : levels[k]) {
        std::size_t parents = 0;
        for (const auto& P : levels[k - 1]) {
          parents += R.x0 >= P.x0 - tol && R.x1 <= P.x1 + tol && R.t0 >= P.t0 - tol && R.t1 <= P.t1 + tol ? 1 : 0;
        }
        rec.expect(parents == 1, "rectangle level " + std::to_string(k + 1) + " has " + std::to_string(parents) + " parents");
      }
    }
  }
  {
    const auto levels = quartic_cantor_levels(default_quartic_gaps(6), 6);
    for (std::size_t k = 1; k < levels.size(); ++k) {
      for (std::size_t i = 0; i < levels[k].source.size(); ++i) {
        const auto& parent_s = levels[k - 1].source[i / 2];
        const auto& parent_i = levels[k - 1].image[i / 2];
        const auto& s = levels[k].source[i];
        const auto& im = levels[k].image[i];
        rec.expect(s.first >= parent_s.first - tol && s.second <= parent_s.second + tol && im.first >= parent_i.first - tol &&
                       im.second <= parent_i.second + tol,
                   "quartic level " + std::to_string(k) + " interval " + std::to_string(i));
      }
    }
  }
  {
    DefeaterSpec spec;
    spec.dt = 1e-4;
    spec.depth = 3;
    const auto d = gen_regular_defeater(spec);
    for (std::size_t k = 1; k < d.levels.size(); ++k) {
      for (const auto& I : d.levels[k]) {
        const auto& P = d.levels[k - 1][I.parent];
        rec.expect(I.lo >= P.lo && I.hi <= P.hi, "defeater level " + std::to_string(k + 1));
      }
    }
  }
  return rec.done();
}

}  // namespace

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names{"geometry", "measure", "rectify", "generators"};
  return names;
}

std::vector<CheckResult> run_suite(const std::string& suite, const SuiteConfig& cfg) {
  std::vector<CheckResult> out;
  if (suite == "all") {
    for (const auto& s : suite_names()) {
      auto part = run_suite(s, cfg);
      out.insert(out.end(), part.begin(), part.end());
    }
    return out;
  }
  if (suite == "geometry") {
    out.push_back(check_homogeneity(cfg));
    out.push_back(check_norm_split(cfg));
    out.push_back(check_cone_complement(cfg));
    out.push_back(check_projection_lipschitz(cfg));
    out.push_back(check_graph_round_trip(cfg));
    out.push_back(check_translation_invariance(cfg));
  } else if (suite == "measure") {
    out.push_back(check_cover_validity(cfg));
    out.push_back(check_cover_monotonicity(cfg));
    out.push_back(check_dimension_comparison(cfg));
    out.push_back(check_vertical_graph_euclidean_dim(cfg));
    out.push_back(check_density_bounds(cfg));
  } else if (suite == "rectify") {
    out.push_back(check_dilation_equivariance(cfg));
    out.push_back(check_restriction_invariance(cfg));
    out.push_back(check_blowup_flatness(cfg));
    out.push_back(check_small_lipschitz_tangents(cfg));
    out.push_back(check_differentiability_dichotomy(cfg));
  } else if (suite == "generators") {
    out.push_back(check_generator_determinism(cfg));
    out.push_back(check_generator_labels(cfg));
    out.push_back(check_oscillation_lower_bound(cfg));
    out.push_back(check_segment_blowup(cfg));
    out.push_back(check_nesting(cfg));
  } else {
    throw std::invalid_argument("unknown suite '" + suite + "' (expected geometry, measure, rectify, generators or all)");
  }
  return out;
}

}  // namespace parabgmt
