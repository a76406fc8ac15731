#include "commands.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "parabgmt/checks.hpp"
#include "parabgmt/generators.hpp"
#include "parabgmt/io.hpp"
#include "parabgmt/parallel.hpp"
#include "parabgmt/rectify.hpp"
#include "report.hpp"

#ifndef PARABGMT_VERSION
#define PARABGMT_VERSION "0.0.0"
#endif

namespace parabgmt::cli {
namespace {

Json header(const std::string& command, const Settings& cfg) {
  Json config = Json::object();
  for (const auto& [k, v] : cfg.effective()) config[k] = v;
  return {{"tool", "parabgmt"},
          {"version", PARABGMT_VERSION},
          {"command", command},
          {"seed", cfg.integer("seed")},
          {"config", config}};
}

std::uint64_t seed_of(const Settings& cfg) {
  const auto s = cfg.integer("seed");
  if (s < 0) throw ConfigError("seed must be nonnegative");
  return static_cast<std::uint64_t>(s);
}

double positive(const Settings& cfg, const std::string& key) {
  const double v = cfg.real(key);
  if (!(v > 0.0)) throw ConfigError("'" + key + "' must be positive, got " + cfg.text(key));
  return v;
}

int positive_int(const Settings& cfg, const std::string& key) {
  const auto v = cfg.integer(key);
  if (v < 1 || v > 1'000'000'000) throw ConfigError("'" + key + "' must be a positive integer, got " + cfg.text(key));
  return static_cast<int>(v);
}

std::string require(const Settings& cfg, const std::string& key) {
  if (!cfg.has(key)) throw ConfigError("missing required setting '" + key + "'");
  return cfg.text(key);
}

Metric metric_of(const Settings& cfg) {
  return cfg.choice("metric", {"parabolic", "euclidean"}) == "parabolic" ? Metric::parabolic : Metric::euclidean;
}

PlaneFamily family_of(const Settings& cfg) {
  return cfg.choice("family", {"horizontal", "vertical"}) == "horizontal" ? PlaneFamily::horizontal : PlaneFamily::vertical;
}

/// The base point from `point` (x1,...,xn,t) or `atom` (index in canonical order).
Point base_point(const Settings& cfg, const DiscreteMeasure& mu) {
  if (cfg.has("point")) {
    const auto v = cfg.reals("point");
    if (v.size() != static_cast<std::size_t>(mu.n()) + 1) {
      throw ConfigError("'point' needs " + std::to_string(mu.n() + 1) + " coordinates");
    }
    return Point::from_row(v);
  }
  const auto atom = cfg.integer("atom");
  if (atom < 0 || static_cast<std::size_t>(atom) >= mu.size()) {
    throw ConfigError("'atom' must index one of the " + std::to_string(mu.size()) + " atoms");
  }
  return mu.points().point(static_cast<std::size_t>(atom));
}

double resolution_of(const Settings& cfg, const DiscreteMeasure& mu, Metric metric) {
  const double r = cfg.real("resolution");
  if (r < 0.0) throw ConfigError("'resolution' must be nonnegative");
  if (r > 0.0) return r;
  return estimate_resolution(mu.points(), metric);
}

std::vector<double> scales_of(const Settings& cfg, double resolution) {
  const double ratio = cfg.real("ratio");
  if (!(ratio > 0.0 && ratio < 1.0)) throw ConfigError("'ratio' must lie in (0, 1)");
  const int count = positive_int(cfg, "scales");
  const double finest = cfg.real("finest");
  if (finest > 0.0) return default_scales(finest / 4.0, count, ratio);
  return default_scales(resolution, count, ratio);
}

// ------------------------------------------------------------------ generate

Point user_graph_value(const std::string& family, double amplitude, const HomPlane& plane, const Eigen::VectorXd& dir,
                       const Point& p) {
  double v = 0.0;
  if (family == "sine") {
    v = plane.k() > 0 ? std::sin(3.0 * plane.basis().col(0).dot(p.x)) : std::sin(3.0 * p.t);
  } else if (family == "sqrt") {
    v = std::sqrt(std::abs(p.t));
  }
  return Point{amplitude * v * dir, 0.0};
}

DiscreteMeasure generate_user_graph(const Settings& cfg, double resolution) {
  const int n = positive_int(cfg, "n");
  const HomPlane plane = canonical_plane(n, static_cast<int>(cfg.integer("m")), family_of(cfg));
  if (plane.k() >= n) throw ConfigError("user_graph needs a plane with a horizontal complement direction");
  Eigen::VectorXd dir = Eigen::VectorXd::Zero(n);
  dir[plane.k()] = 1.0;  // canonical planes span the leading coordinates
  const std::string family = cfg.choice("graph", {"zero", "sine", "sqrt"});
  const double amplitude = cfg.real("amplitude");
  const double extent = positive(cfg, "extent");
  GraphDomain dom{Eigen::VectorXd::Constant(plane.k(), -extent), Eigen::VectorXd::Constant(plane.k(), extent), 0.0, 0.0};
  if (plane.is_vertical()) {
    dom.t_lo = -extent * extent;
    dom.t_hi = extent * extent;
  }
  return gen_graph([&](const Point& p) { return user_graph_value(family, amplitude, plane, dir, p); }, plane, dom,
                   resolution);
}

int run_generate(const Settings& cfg) {
  const std::string kind = cfg.choice(
      "kind", {"weierstrass_graph", "regular_defeater", "cantor_segments", "vertical_cantor", "quartic_cantor", "flat",
               "user_graph"});
  const std::string out = require(cfg, "out");
  const int n = positive_int(cfg, "n");
  const auto depth = cfg.integer("depth");
  const double res = cfg.real("resolution");
  if (res < 0.0) throw ConfigError("'resolution' must be nonnegative");
  const auto max_atoms = static_cast<std::size_t>(positive_int(cfg, "max_atoms"));
  std::optional<double> c_measured;
  Json spec = Json::object();
  std::optional<DiscreteMeasure> mu;

  if (kind == "weierstrass_graph") {
    WeierstrassSpec s;
    s.n = n;
    if (cfg.has("c0")) s.c0 = cfg.real("c0");
    s.terms = positive_int(cfg, "terms");
    if (res > 0.0) s.dt = res * res;
    spec = {{"n", s.n}, {"c0", number(s.c0)}, {"terms", s.terms}, {"dt", number(s.dt)}};
    mu = gen_weierstrass_graph(s);
    c_measured = std::stod(mu->provenance().notes.at("oscillation_constant"));
  } else if (kind == "regular_defeater") {
    DefeaterSpec s;
    s.n = n;
    if (cfg.has("c0")) s.c0 = cfg.real("c0");
    s.terms = positive_int(cfg, "terms");
    if (res > 0.0) s.dt = res * res;
    if (depth > 0) s.depth = static_cast<int>(depth);
    s.L = cfg.reals("l_seq");
    s.parts = cfg.integers("parts");
    spec = {{"n", s.n}, {"c0", number(s.c0)}, {"terms", s.terms}, {"dt", number(s.dt)}, {"depth", s.depth}};
    auto d = gen_regular_defeater(s);
    c_measured = d.oscillation_constant;
    spec["L"] = numbers(d.L);
    spec["c_levels"] = numbers(d.c_levels);
    mu = std::move(d.measure);
  } else if (kind == "cantor_segments") {
    CantorSegmentsSpec s;
    s.n_seq = cfg.integers("n_seq");
    if (depth > 0) s.depth = static_cast<int>(depth);
    s.max_atoms = max_atoms;
    if (res > 0.0) {
      const auto seq = s.n_seq.empty() ? default_cantor_sequence(s.depth) : s.n_seq;
      const double r = cantor_segment_levels(seq, s.depth).back().front().r;
      s.samples = std::max(2, static_cast<int>(std::ceil(r / res)) + 1);
    }
    spec = {{"depth", s.depth}, {"samples", s.samples}, {"max_atoms", s.max_atoms}};
    mu = gen_cantor_segments(s);
  } else if (kind == "vertical_cantor") {
    VerticalCantorSpec s;
    s.n_seq = cfg.integers("n_seq");
    if (depth > 0) s.depth = static_cast<int>(depth);
    s.max_atoms = max_atoms;
    if (res > 0.0) s.dt = res * res;
    spec = {{"depth", s.depth}, {"dt", number(s.dt)}, {"max_atoms", s.max_atoms}};
    mu = gen_vertical_cantor(s);
  } else if (kind == "quartic_cantor") {
    QuarticCantorSpec s;
    s.gaps = cfg.reals("gaps");
    if (depth > 0) s.depth = static_cast<int>(depth);
    spec = {{"depth", s.depth}};
    mu = gen_quartic_cantor(s).measure;
  } else if (kind == "flat") {
    const HomPlane plane = canonical_plane(n, static_cast<int>(cfg.integer("m")), family_of(cfg));
    const double r = res > 0.0 ? res : 0.01;
    spec = {{"plane", plane_json(plane)}, {"extent", number(positive(cfg, "extent"))}, {"resolution", number(r)}};
    mu = gen_flat(plane, cfg.real("extent"), r);
  } else {
    const double r = res > 0.0 ? res : 0.01;
    spec = {{"graph", cfg.text("graph")}, {"amplitude", number(cfg.real("amplitude"))}, {"resolution", number(r)}};
    mu = generate_user_graph(cfg, r);
  }
  mu->provenance().seed = seed_of(cfg);
  write_csv_file(out, *mu);

  const auto& notes = mu->provenance().notes;
  Json doc = header("generate", cfg);
  doc["kind"] = kind;
  doc["spec"] = spec;
  doc["atoms"] = mu->size();
  doc["total_mass"] = number(mu->total_mass());
  doc["resolution"] = mu->resolution() ? number(*mu->resolution()) : Json(nullptr);
  doc["measured"] = Json::object();
  if (c_measured) {
    doc["measured"]["c"] = number(*c_measured);
    doc["measured"]["c_tilde"] = number(std::pow(*c_measured, 4) / 128.0);
  }
  if (const auto it = notes.find("truncation_scale"); it != notes.end()) {
    doc["truncation_scale"] = number(std::stod(it->second));
  } else {
    doc["truncation_scale"] = mu->resolution() ? number(*mu->resolution()) : Json(nullptr);
  }
  doc["ground_truth"] = notes.count("ground_truth") ? Json(notes.at("ground_truth")) : Json(nullptr);
  doc["provenance"] = provenance_json(mu->provenance());
  write_text(out + ".json", dump(doc));
  return 0;
}

// ------------------------------------------------------------------ dim

Json covering_json(const CoveringReport& rep) {
  Json sums = Json::array();
  for (const auto& row : rep.sums) sums.push_back(numbers(row));
  Json counts = Json::array();
  for (const auto c : rep.counts) counts.push_back(c);
  return {{"metric", rep.metric == Metric::parabolic ? "parabolic" : "euclidean"},
          {"scales", numbers(rep.scales)},
          {"counts", counts},
          {"s_values", numbers(rep.s_values)},
          {"sums", sums},
          {"fitted_dim", number(rep.fitted_dim)},
          {"raw_slope", number(rep.raw_slope)},
          {"fit_residual", number(rep.fit_residual)}};
}

int run_dim(const Settings& cfg) {
  const auto mu = read_csv_file(require(cfg, "input"));
  const Metric metric = metric_of(cfg);
  const double res = resolution_of(cfg, mu, metric);
  const auto rep = dimension_fit(mu.points(), scales_of(cfg, res), metric, cfg.reals("s_values"));
  Json doc = header("dim", cfg);
  doc["atoms"] = mu.size();
  doc["resolution"] = number(res);
  doc["report"] = covering_json(rep);
  emit(doc, cfg.text("out"));
  return 0;
}

// ------------------------------------------------------------------ density

int run_density(const Settings& cfg) {
  const auto mu = read_csv_file(require(cfg, "input"));
  const Point a = base_point(cfg, mu);
  const double res = resolution_of(cfg, mu, Metric::parabolic);
  const auto est = density_profile(mu, a, positive(cfg, "s"), scales_of(cfg, res));
  Json doc = header("density", cfg);
  doc["atoms"] = mu.size();
  doc["resolution"] = number(res);
  doc["estimate"] = {{"a", point_json(est.a)},        {"s", number(est.s)},         {"scales", numbers(est.scales)},
                     {"values", numbers(est.values)}, {"upper", number(est.upper)}, {"lower", number(est.lower)}};
  emit(doc, cfg.text("out"));
  return 0;
}

// ------------------------------------------------------------------ tangent

int run_tangent(const Settings& cfg) {
  auto mu = read_csv_file(require(cfg, "input"));
  TangentConfig tc;
  tc.m = positive_int(cfg, "m");
  tc.s_list = cfg.reals("s_list");
  tc.r_list = cfg.reals("r_list");
  tc.plane_budget = positive_int(cfg, "plane_budget");
  tc.threshold = positive(cfg, "threshold");
  tc.seed = seed_of(cfg);
  tc.sample_points = static_cast<std::size_t>(positive_int(cfg, "sample_points"));
  tc.resolution = cfg.real("resolution");
  const auto rep = classify_points(mu, tc);

  Json points = Json::array();
  std::ostringstream curves;
  curves << "atom,r,s,defect\n";
  for (const auto& p : rep.points) {
    Json curve = Json::array();
    for (const auto& d : p.result.curve) {
      curve.push_back({{"r", number(d.r)}, {"s", number(d.s)}, {"defect", number(d.defect)}});
      curves << p.atom << ',' << shortest(d.r) << ',' << shortest(d.s) << ',' << shortest(d.defect) << '\n';
    }
    points.push_back({{"atom", p.atom},
                      {"a", point_json(p.a)},
                      {"class", to_string(p.result.cls)},
                      {"best_plane", p.result.best_plane ? plane_json(*p.result.best_plane) : Json(nullptr)},
                      {"min_defect", number(p.result.min_defect)},
                      {"defect_curve", curve}});
  }
  const auto& ec = rep.config;
  Json doc = header("tangent", cfg);
  doc["atoms"] = mu.size();
  doc["effective"] = {{"m", ec.m},
                      {"s_list", numbers(ec.s_list)},
                      {"r_list", numbers(ec.r_list)},
                      {"plane_budget", ec.plane_budget},
                      {"threshold", number(ec.threshold)},
                      {"sample_points", ec.sample_points},
                      {"resolution", number(ec.resolution)}};
  doc["per_point"] = points;
  doc["fractions"] = {{"horizontal", number(rep.horizontal_fraction)},
                      {"vertical", number(rep.vertical_fraction)},
                      {"none", number(rep.none_fraction)}};
  const std::string out = cfg.text("out");
  std::string curve_path = cfg.text("curves");
  if (curve_path.empty() && !out.empty()) curve_path = out + ".curves.csv";
  if (!curve_path.empty()) write_text(curve_path, curves.str());
  emit(doc, out);
  return 0;
}

// ------------------------------------------------------------------ blowup

int run_blowup(const Settings& cfg) {
  const auto mu = read_csv_file(require(cfg, "input"));
  const Point a = base_point(cfg, mu);
  const double r = positive(cfg, "r");
  const bool mass = cfg.choice("normalization", {"mass", "power"}) == "mass";
  const double m = positive(cfg, "m");
  const auto nu = blowup_measure(mu, a, r, mass ? Normalization::mass : Normalization::power, m);
  if (cfg.has("out")) write_csv_file(cfg.text("out"), nu);

  Json doc = header("blowup", cfg);
  doc["a"] = point_json(a);
  doc["atoms"] = nu.size();
  doc["total_mass"] = number(nu.total_mass());
  if (!nu.empty()) {
    FlatnessConfig fc;
    fc.m = static_cast<int>(std::lround(m));
    fc.plane_budget = positive_int(cfg, "plane_budget");
    fc.tube = positive(cfg, "tube");
    fc.cell = positive(cfg, "cell");
    fc.seed = seed_of(cfg);
    const auto fl = flatness_defect(nu, fc);
    doc["flatness"] = {{"plane", plane_json(fl.plane)},
                       {"plane_index", fl.plane_index},
                       {"defect", number(fl.defect)},
                       {"outside_mass", number(fl.outside_mass)},
                       {"empty_cells", number(fl.empty_cells)}};
  }
  emit(doc, cfg.text("report"));
  return 0;
}

// ------------------------------------------------------------------ vconst

int run_vconst(const Settings& cfg) {
  const auto est = flat_constant_estimate(positive_int(cfg, "n"), positive_int(cfg, "m"), family_of(cfg), cfg.reals("radii"));
  Json doc = header("vconst", cfg);
  doc["estimate"] = {{"n", est.n},
                     {"m", est.m},
                     {"family", est.family == PlaneFamily::horizontal ? "horizontal" : "vertical"},
                     {"value", number(est.value)},
                     {"band", number(est.band)},
                     {"cover", est.cover},
                     {"radii", numbers(est.radii)},
                     {"ball_premeasure", numbers(est.ball_premeasure)},
                     {"box_premeasure", numbers(est.box_premeasure)},
                     {"uncovered_fraction", numbers(est.uncovered_fraction)},
                     {"ball_intercept", number(est.ball_intercept)},
                     {"box_intercept", number(est.box_intercept)},
                     {"cloud_size", est.cloud_size},
                     {"resolution", number(est.resolution)}};
  emit(doc, cfg.text("out"));
  return 0;
}

// ------------------------------------------------------------------ verify

int run_verify(const Settings& cfg) {
  SuiteConfig sc;
  sc.cases = static_cast<std::size_t>(positive_int(cfg, "cases"));
  sc.seed = seed_of(cfg);
  const std::string suite = cfg.text("suite");
  if (suite != "all" && std::find(suite_names().begin(), suite_names().end(), suite) == suite_names().end()) {
    throw ConfigError("unknown suite '" + suite + "'");
  }
  const auto results = run_suite(suite, sc);
  Json checks = Json::array();
  Json violations = Json::array();
  bool passed = true;
  for (const auto& r : results) {
    passed = passed && r.passed();
    checks.push_back({{"suite", r.suite},
                      {"name", r.name},
                      {"cases", r.cases},
                      {"failures", r.failures},
                      {"passed", r.passed()},
                      {"detail", r.detail}});
    for (const auto& v : r.violations) violations.push_back({{"check", r.suite + "/" + r.name}, {"case", v}});
  }
  Json doc = header("verify", cfg);
  doc["checks"] = checks;
  doc["violations"] = violations;
  doc["passed"] = passed;
  emit(doc, cfg.text("out"));
  return passed ? 0 : 2;
}

// ------------------------------------------------------------------ defeater-bmo

/// Graph of f_k over each level-k interval, strided down to `cap` samples, checked at s = L_k + 0.01.
Json level_cone_checks(const DefeaterResult& d, std::size_t cap) {
  Json levels = Json::array();
  const HomPlane axis = HomPlane::vertical(1);
  for (std::size_t k = 0; k < d.levels.size(); ++k) {
    const auto& f = d.f[k + 1];
    const double L = d.L[k + 1];
    const double s = L + 0.01;
    const auto& pieces = d.levels[k];
    std::vector<char> ok(pieces.size(), 0);
    parallel_for(pieces.size(), [&](std::size_t i) {
      const auto& I = pieces[i];
      const std::size_t len = I.hi - I.lo + 1;
      const std::size_t stride = (len + cap - 1) / cap;
      PointCloud pts(1);
      for (std::size_t g = I.lo; g <= I.hi; g += stride) {
        pts.push_back(Point{Eigen::VectorXd::Constant(1, f[g]), static_cast<double>(g) * d.dt});
      }
      ok[i] = graph_cone_check(pts, axis, s).empty() ? 1 : 0;
    });
    const auto good = static_cast<std::size_t>(std::count(ok.begin(), ok.end(), 1));
    levels.push_back({{"level", k + 1},
                      {"L", number(L)},
                      {"s", number(s)},
                      {"pieces", pieces.size()},
                      {"passed_pieces", good},
                      {"passed", good == pieces.size()}});
  }
  return levels;
}

int run_defeater_bmo(const Settings& cfg) {
  DefeaterSpec s;
  s.c0 = cfg.real("c0");
  s.terms = positive_int(cfg, "terms");
  const double res = positive(cfg, "resolution");
  s.dt = res * res;
  s.depth = positive_int(cfg, "depth");
  s.L = cfg.reals("l_seq");
  s.parts = cfg.integers("parts");
  const auto d = gen_regular_defeater(s);

  double target = 0.0;
  for (std::size_t k = 0; k < d.L.size(); ++k) target += d.L[k] * d.L[k] / 16.0;

  const auto& finest = d.levels.back();
  const auto chosen = seeded_subsample(finest.size(), static_cast<std::size_t>(positive_int(cfg, "points")), seed_of(cfg));
  std::vector<std::vector<double>> energies(chosen.size());
  parallel_for(chosen.size(), [&](std::size_t i) {
    const auto& I = finest[chosen[i]];
    energies[i] = bmo_energy(d.f.back(), d.in_final, d.dt, (I.lo + I.hi) / 2);
  });
  Json points = Json::array();
  std::size_t exceeding = 0;
  for (std::size_t i = 0; i < chosen.size(); ++i) {
    const auto& I = finest[chosen[i]];
    const bool above = !energies[i].empty() && energies[i].back() > target;
    exceeding += above ? 1 : 0;
    points.push_back({{"t", number(static_cast<double>((I.lo + I.hi) / 2) * d.dt)},
                      {"interval", chosen[i]},
                      {"partial_sums", numbers(energies[i])},
                      {"exceeds", above}});
  }
  const auto required = static_cast<std::size_t>(positive_int(cfg, "required"));

  Json doc = header("defeater-bmo", cfg);
  doc["measured"] = {{"c", number(d.oscillation_constant)},
                     {"c_tilde", number(d.ctilde)},
                     {"holder_constant", number(d.holder_constant)}};
  doc["L"] = numbers(d.L);
  doc["c_levels"] = numbers(d.c_levels);
  doc["atoms"] = d.measure.size();
  Json counts = Json::array();
  for (const auto& lv : d.levels) counts.push_back(lv.size());
  doc["level_intervals"] = counts;
  doc["target"] = number(target);
  doc["points"] = points;
  doc["exceeding"] = exceeding;
  doc["bmo_passed"] = exceeding >= required;
  bool cone_ok = true;
  if (cfg.boolean("cone_check")) {
    doc["cone_checks"] = level_cone_checks(d, static_cast<std::size_t>(positive_int(cfg, "piece_samples")));
    for (const auto& lv : doc["cone_checks"]) cone_ok = cone_ok && lv["passed"].get<bool>();
    doc["cone_passed"] = cone_ok;
  }
  emit(doc, cfg.text("out"));
  return 0;
}

const std::vector<Param> kScaleParams{
    {"resolution", "0", "sampling spacing; 0 estimates it from nearest neighbours"},
    {"scales", "8", "number of radii"},
    {"ratio", "0.5", "ratio between successive radii"},
    {"finest", "0", "finest radius; 0 uses 4 x resolution"},
};

std::vector<Param> with(std::vector<Param> a, const std::vector<Param>& b) {
  a.insert(a.end(), b.begin(), b.end());
  return a;
}

}  // namespace

const std::vector<Command>& commands() {
  static const std::vector<Command> all{
      {"generate",
       "Generate a fixture point cloud (CSV) and its sidecar JSON",
       {{"kind", "", "weierstrass_graph, regular_defeater, cantor_segments, vertical_cantor, quartic_cantor, flat, user_graph"},
        {"out", "", "output CSV; the sidecar is <out>.json"},
        {"n", "1", "spatial dimension"},
        {"depth", "0", "construction depth; 0 keeps the generator default"},
        {"resolution", "0", "parabolic sampling spacing; 0 keeps the generator default"},
        {"c0", "", "amplitude of the oscillating function"},
        {"terms", "30", "terms of the oscillating series"},
        {"max_atoms", "100000", "atom budget for the Cantor constructions"},
        {"n_seq", "", "integer sequence for the Cantor constructions"},
        {"gaps", "", "gap sequence for quartic_cantor"},
        {"l_seq", "", "L_0..L_depth for regular_defeater"},
        {"parts", "", "pieces per level for regular_defeater"},
        {"family", "horizontal", "plane family for flat and user_graph"},
        {"m", "1", "plane dimension for flat and user_graph"},
        {"extent", "1", "radius of the flat piece or half-width of the graph domain"},
        {"graph", "sine", "user_graph function: zero, sine, sqrt"},
        {"amplitude", "0.05", "user_graph amplitude"}},
       run_generate},
      {"dim",
       "Box-counting dimension fit of a point cloud",
       with({{"input", "", "point cloud CSV"},
             {"out", "", "report path; stdout when empty"},
             {"metric", "parabolic", "parabolic or euclidean"},
             {"s_values", "", "exponents for the covering sums"}},
            kScaleParams),
       run_dim},
      {"density",
       "Density profile at a point",
       with({{"input", "", "point cloud CSV"},
             {"out", "", "report path; stdout when empty"},
             {"point", "", "x1,...,xn,t"},
             {"atom", "0", "atom index, used when point is empty"},
             {"s", "1", "density exponent"}},
            kScaleParams),
       run_density},
      {"tangent",
       "Approximate tangent detection at sampled atoms",
       {{"input", "", "point cloud CSV"},
        {"out", "", "report path; stdout when empty"},
        {"curves", "", "defect-curve CSV; defaults to <out>.curves.csv"},
        {"m", "1", "plane dimension"},
        {"s_list", "0.5,0.25,0.1", "cone apertures"},
        {"r_list", "", "radii; empty uses resolution x {8, 4, 2}"},
        {"plane_budget", "32", "planes sampled per point"},
        {"threshold", "0.05", "defect threshold"},
        {"sample_points", "200", "atoms classified"},
        {"resolution", "0", "sampling spacing; 0 estimates it"}},
       run_tangent},
      {"blowup",
       "Blow-up of a measure at a point and its flatness defect",
       {{"input", "", "point cloud CSV"},
        {"out", "", "blown-up CSV; skipped when empty"},
        {"report", "", "report path; stdout when empty"},
        {"point", "", "x1,...,xn,t"},
        {"atom", "0", "atom index, used when point is empty"},
        {"r", "0.1", "blow-up radius"},
        {"normalization", "mass", "mass or power"},
        {"m", "1", "exponent for power normalization and flatness"},
        {"plane_budget", "32", "planes sampled for flatness"},
        {"tube", "0.05", "tube width around the plane"},
        {"cell", "0.125", "grid cell on the plane"}},
       run_blowup},
      {"vconst",
       "Estimate the Hausdorff measure of a unit flat piece",
       {{"out", "", "report path; stdout when empty"},
        {"n", "1", "spatial dimension"},
        {"m", "2", "plane dimension"},
        {"family", "vertical", "horizontal or vertical"},
        {"radii", "", "cover radii; empty uses the built-in ladder"}},
       run_vconst},
      {"verify",
       "Run named property checks",
       {{"out", "", "report path; stdout when empty"},
        {"suite", "all", "geometry, measure, rectify, generators or all"},
        {"cases", "10000", "random cases per exact check"}},
       run_verify},
      {"defeater-bmo",
       "Build the regular-graph defeater and report energies and per-level cone checks",
       {{"out", "", "report path; stdout when empty"},
        {"depth", "6", "construction depth"},
        {"resolution", "0.001", "parabolic sampling spacing"},
        {"c0", "0.15", "amplitude of the oscillating function"},
        {"terms", "30", "terms of the oscillating series"},
        {"l_seq", "", "L_0..L_depth"},
        {"parts", "", "pieces per level"},
        {"points", "20", "density points sampled"},
        {"required", "10", "points that must exceed the target"},
        {"cone_check", "true", "run the per-level cone checks"},
        {"piece_samples", "256", "samples per piece for the cone checks"}},
       run_defeater_bmo},
  };
  return all;
}

std::string version() { return PARABGMT_VERSION; }

}  // namespace parabgmt::cli
