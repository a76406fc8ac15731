// Acceptance run: one PASS/FAIL line per criterion, followed by the measured figures.

#include <sys/wait.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iterator>
#include <limits>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "parabgmt/checks.hpp"
#include "parabgmt/generators.hpp"
#include "parabgmt/geometry.hpp"
#include "parabgmt/measure.hpp"
#include "parabgmt/rectify.hpp"

namespace fs = std::filesystem;
using namespace parabgmt;

namespace {

class Stopwatch {
 public:
  [[nodiscard]] double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

std::string fmt(double v, int digits = 4) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", digits, v);
  return buf;
}

struct Outcome {
  bool passed = true;
  std::string detail;

  void require(bool ok, const std::string& what) {
    passed = passed && ok;
    if (!detail.empty()) detail += "; ";
    detail += what + (ok ? "" : " [miss]");
  }
};

int failures = 0;

void report(int id, const std::string& title, const std::function<Outcome()>& body) {
  const Stopwatch clock;
  Outcome out;
  try {
    out = body();
  } catch (const std::exception& e) {
    out.passed = false;
    out.detail = std::string("exception: ") + e.what();
  }
  if (!out.passed) ++failures;
  std::printf("%s %2d %s (%.1f s): %s\n", out.passed ? "PASS" : "FAIL", id, title.c_str(), clock.seconds(),
              out.detail.c_str());
  std::fflush(stdout);
}

Point p1(double x, double t) { return Point{Eigen::VectorXd::Constant(1, x), t}; }

std::vector<double> halving(double first, int count) {
  std::vector<double> out;
  for (int i = 0; i < count; ++i) out.push_back(std::ldexp(first, -i));
  return out;
}

// ------------------------------------------------------------------ 1

Outcome exact_algebra() {
  const Stopwatch clock;
  SuiteConfig cfg;
  cfg.cases = 10000;
  Outcome out;
  for (const auto& check : {check_homogeneity, check_norm_split, check_cone_complement, check_projection_lipschitz}) {
    const auto r = check(cfg);
    out.require(r.passed() && r.cases >= 10000, r.name + " " + std::to_string(r.failures) + "/" + std::to_string(r.cases));
  }
  const double elapsed = clock.seconds();
  out.require(elapsed < 5.0, "runtime " + fmt(elapsed, 3) + " s");
  return out;
}

// ------------------------------------------------------------------ 2

Outcome cone_graph_round_trip() {
  Outcome out;
  std::mt19937_64 rng(2024);
  for (const double L : {0.1, 0.3, 0.5}) {
    const double s = L + 0.01;
    const double bound = s / std::sqrt(1.0 - s * s);
    std::size_t bad = 0;
    double worst = 0.0;
    for (int fixture = 0; fixture < 100; ++fixture) {
      const int n = 1 + static_cast<int>(rng() % 3);
      const HomPlane plane = random_plane(rng, n);
      const auto pts = lipschitz_graph_points(plane, L, 80, rng());
      if (!graph_cone_check(pts, plane, s).empty()) {
        ++bad;
        continue;
      }
      const GraphMap g = graph_extract(pts, plane, s);
      worst = std::max(worst, g.empirical_constant / bound);
      if (g.empirical_constant > bound + 1e-9) ++bad;
    }
    out.require(bad == 0, "L=" + fmt(L) + " failures " + std::to_string(bad) + "/100, max constant/bound " + fmt(worst));
  }
  return out;
}

// ------------------------------------------------------------------ 3

Outcome dimension_fits() {
  Outcome out;
  const auto timed = [&](const std::string& name, const std::function<CoveringReport()>& fit, double lo, double hi) {
    const Stopwatch clock;
    const auto r = fit();
    const double elapsed = clock.seconds();
    out.require(r.fitted_dim >= lo && r.fitted_dim <= hi && elapsed < 60.0,
                name + " " + fmt(r.fitted_dim) + " in " + fmt(elapsed, 3) + " s");
  };

  timed("unit square", [] {
    const auto scales = halving(0.48, 6);
    const double hx = 1.0 / std::ceil(4.0 / scales.back());
    const double ht = 1.0 / std::ceil(16.0 / (scales.back() * scales.back()));
    const long nx = std::lround(1.0 / hx);
    const long nt = std::lround(1.0 / ht);
    const RowSource lattice = [=](const std::function<void(std::span<const double>)>& visit) {
      double row[2];
      for (long i = 0; i <= nx; ++i) {
        row[0] = static_cast<double>(i) * hx;
        for (long j = 0; j <= nt; ++j) {
          row[1] = static_cast<double>(j) * ht;
          visit(row);
        }
      }
    };
    return dimension_fit(lattice, 1, scales, Metric::parabolic);
  }, 2.85, 3.15);

  timed("t-axis segment", [] {
    PointCloud c(1);
    for (int j = 0; j <= 1000000; ++j) c.push_back(p1(0.0, j * 1e-6));
    return dimension_fit(c, halving(0.32, 6), Metric::parabolic);
  }, 1.9, 2.1);

  timed("horizontal segment", [] {
    PointCloud c(1);
    for (int j = 0; j <= 100000; ++j) c.push_back(p1(j * 1e-5, 0.0));
    return dimension_fit(c, halving(0.08, 6), Metric::parabolic);
  }, 0.9, 1.1);

  const auto w = gen_weierstrass_graph({1, 0.05, kDefaultWeierstrassTerms, 1e-6});
  timed("oscillating graph parabolic", [&] { return dimension_fit(w.points(), halving(0.32, 6), Metric::parabolic); },
        1.85, 2.15);
  timed("oscillating graph euclidean", [&] { return dimension_fit(w.points(), halving(0.1, 6), Metric::euclidean); },
        -std::numeric_limits<double>::infinity(), 1.6);
  return out;
}

// ------------------------------------------------------------------ 4

Outcome flat_constants() {
  Outcome out;
  for (const int m : {1, 2}) {
    const auto e = flat_constant_estimate(m, m, PlaneFamily::horizontal);
    const double target = std::ldexp(1.0, m);
    out.require(std::abs(e.value - target) <= 0.05 * target, "horizontal m=" + std::to_string(m) + " " + fmt(e.value));
  }
  const auto v2 = flat_constant_estimate(1, 2, PlaneFamily::vertical);
  out.require(std::abs(v2.value - 2.0) <= 0.1, "vertical m=2 " + fmt(v2.value));
  const auto v3 = flat_constant_estimate(2, 3, PlaneFamily::vertical);
  for (const auto& e : {v2, v3}) {
    out.require(e.value >= 1.0 && e.value <= std::ldexp(1.0, e.m),
                "vertical m=" + std::to_string(e.m) + " in [1, " + fmt(std::ldexp(1.0, e.m)) + "]: " + fmt(e.value));
  }
  return out;
}

// ------------------------------------------------------------------ 5

Outcome lipschitz_image_scaling() {
  Outcome out;
  const auto f = sample_grid_map([](const Eigen::VectorXd& v) { return p1(v[0], v[1]); }, 1, 1.0, 257);
  std::vector<double> sums;
  bool flagged = false;
  for (const int N : {4, 16, 64}) {
    const auto r = lip_image_cover_sum(f, N);
    sums.push_back(r.sum);
    flagged = flagged || r.non_lipschitz;
  }
  for (std::size_t j = 1; j < sums.size(); ++j) {
    const double ratio = sums[j] / sums[j - 1];
    out.require(ratio >= 0.4 && ratio <= 0.6, "ratio " + fmt(ratio));
  }
  out.detail += std::string("; sums ") + fmt(sums[0]) + ", " + fmt(sums[1]) + ", " + fmt(sums[2]) +
                (flagged ? "; map flagged non-Lipschitz" : "");
  return out;
}

// ------------------------------------------------------------------ 6

Outcome tangent_detection() {
  const Stopwatch clock;
  Outcome out;
  TangentConfig tc;
  tc.sample_points = 200;

  const auto close_fraction = [&](const DiscreteMeasure& mu, int m, const std::function<HomPlane(const Point&)>& truth) {
    tc.m = m;
    const auto rep = classify_points(mu, tc);
    std::size_t good = 0;
    for (const auto& p : rep.points) {
      good += p.result.best_plane && plane_distance(*p.result.best_plane, truth(p.a)) <= 0.05 ? 1 : 0;
    }
    return static_cast<double>(good) / static_cast<double>(rep.points.size());
  };

  const HomPlane x_axis = HomPlane::coordinate(2, {0}, false);
  const double fh = close_fraction(gen_flat(x_axis, 1.0, 1e-3), 1, [&](const Point&) { return x_axis; });
  out.require(fh >= 0.95, "horizontal flat " + fmt(fh));
  const HomPlane t_axis = HomPlane::vertical(1);
  const double fv = close_fraction(gen_flat(t_axis, 1.0, 3e-3), 2, [&](const Point&) { return t_axis; });
  out.require(fv >= 0.95, "vertical flat " + fmt(fv));

  GraphDomain dom{Eigen::VectorXd::Constant(1, -1.0), Eigen::VectorXd::Constant(1, 1.0), 0.0, 0.0};
  const auto wave = gen_graph([](const Point& p) { return Point{Eigen::Vector2d(0.0, 0.03 * std::sin(3.0 * p.x[0])), 0.0}; },
                              x_axis, dom, 1e-4);
  // Planes closer than 0.05 are only told apart by apertures below 0.05.
  tc.plane_budget = 256;
  tc.s_list = {0.5, 0.25, 0.1, 0.04};
  const double fg = close_fraction(wave, 1, [](const Point& a) {
    return HomPlane::from_span(Eigen::Vector2d(1.0, 0.09 * std::cos(3.0 * a.x[0])), false);
  });
  tc.plane_budget = TangentConfig{}.plane_budget;
  tc.s_list = TangentConfig{}.s_list;
  out.require(fg >= 0.95, "small-constant graph " + fmt(fg));

  tc.m = 2;
  const auto w = classify_points(gen_weierstrass_graph({1, 0.05, kDefaultWeierstrassTerms, 1e-5}), tc);
  std::size_t w_none = 0;
  for (const auto& p : w.points) w_none += p.result.cls == TangentClass::none && p.result.min_defect >= 0.05 ? 1 : 0;
  const double fw = static_cast<double>(w_none) / static_cast<double>(w.points.size());
  out.require(fw >= 0.9, "oscillating graph none " + fmt(fw));

  tc.m = 1;
  const auto c = classify_points(gen_cantor_segments({{}, 5, 0, 100000}), tc);
  out.require(c.none_fraction >= 0.9, "segment Cantor set none " + fmt(c.none_fraction));

  tc.m = 2;
  const auto v = classify_points(gen_vertical_cantor({{}, 5, 0.0, 100000}), tc);
  std::size_t on_axis = 0;
  for (const auto& p : v.points) {
    on_axis += p.result.cls == TangentClass::vertical && p.result.best_plane && p.result.best_plane->same_as(t_axis) ? 1 : 0;
  }
  const double fc = static_cast<double>(on_axis) / static_cast<double>(v.points.size());
  out.require(fc >= 0.9, "vertical Cantor set t-axis " + fmt(fc));

  const double elapsed = clock.seconds();
  out.require(elapsed < 300.0, "runtime " + fmt(elapsed, 3) + " s");
  return out;
}

// ------------------------------------------------------------------ 7

Outcome segment_blowup() {
  Outcome out;
  const auto mu = gen_cantor_segments({{3, 4, 1600}, 3, 0, 100000});
  // r_2 = 1/(n_1 n_2); the large n_3 keeps the next-level sawtooth below the tolerance.
  for (const double r : {1.0 / 12.0}) {
    const auto nu = blowup_measure(mu, Point::zero(1), r, Normalization::mass);
    double worst = 0.0;
    for (int i = 0; i <= 500; ++i) {
      const double y = 0.5 * i / 500.0;
      const Point target = p1(y, y);
      double best = std::numeric_limits<double>::infinity();
      for (std::size_t j = 0; j < nu.size(); ++j) best = std::min(best, metric_eval(nu.points().point(j), target));
      worst = std::max(worst, best);
    }
    out.require(worst <= 0.05, "r=" + fmt(r) + " one-sided distance " + fmt(worst));
  }
  return out;
}

// ------------------------------------------------------------------ 8

Outcome differentiability() {
  Outcome out;
  const auto q = gen_quartic_cantor({});
  GraphMap qg{HomPlane::coordinate(1, {0}, false), {}, {}, 0.0, 0.0};
  for (std::size_t i = 0; i < q.x.size(); ++i) {
    qg.base.push_back(p1(q.x[i], 0.0));
    qg.value.push_back(p1(0.0, q.fx[i]));
  }
  DifferentialConfig dc;
  dc.scales = default_differential_scales(*q.measure.resolution());
  const auto qi = seeded_subsample(qg.base.size(), 200, 1);
  std::size_t smooth = 0;
  for (const auto i : qi) smooth += fit_differential(qg, i, dc).differentiable.value_or(false) ? 1 : 0;
  const double qf = static_cast<double>(smooth) / static_cast<double>(qi.size());
  out.require(qf >= 0.9, "quartic graph decreasing below 0.05 at " + fmt(qf));

  const double dt = 1e-5;
  const auto f = weierstrass_samples(0.05, kDefaultWeierstrassTerms, dt);
  GraphMap wg{HomPlane::vertical(1), {}, {}, 0.0, 0.0};
  for (std::size_t i = 0; i < f.size(); ++i) {
    wg.base.push_back(p1(0.0, static_cast<double>(i) * dt));
    wg.value.push_back(p1(f[i], 0.0));
  }
  dc.scales = default_differential_scales(std::sqrt(dt));
  const auto wi = seeded_subsample(wg.base.size(), 200, 1);
  std::size_t rough = 0;
  for (const auto i : wi) {
    const auto fit = fit_differential(wg, i, dc);
    rough += std::all_of(fit.residual_curve.begin(), fit.residual_curve.end(),
                         [](const auto& sample) { return sample.second >= 0.1; })
                 ? 1
                 : 0;
  }
  const double wf = static_cast<double>(rough) / static_cast<double>(wi.size());
  out.require(wf >= 0.9, "oscillating graph residual >= 0.1 at " + fmt(wf));
  return out;
}

// ------------------------------------------------------------------ CLI

class Sandbox {
 public:
  explicit Sandbox(const std::string& name) : path_(fs::temp_directory_path() / ("parabgmt_acceptance_" + name)) {
    fs::remove_all(path_);
    fs::create_directories(path_);
  }
  ~Sandbox() { fs::remove_all(path_); }
  Sandbox(const Sandbox&) = delete;
  Sandbox& operator=(const Sandbox&) = delete;

  [[nodiscard]] const fs::path& path() const { return path_; }

  int run(const std::string& args, const std::string& env = "") const {
    const std::string cmd =
        "cd '" + path_.string() + "' && " + env + " '" PARABGMT_EXE "' " + args + " > stdout.txt 2> stderr.txt";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  }

  [[nodiscard]] std::string file(const std::string& name) const {
    std::ifstream in(path_ / name, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
  }

 private:
  fs::path path_;
};

// ------------------------------------------------------------------ 9

Outcome defeater_ledger() {
  Outcome out;
  const Sandbox box("defeater");
  const int code = box.run("defeater-bmo --depth 6 -o bmo.json");
  out.require(code == 0, "exit " + std::to_string(code));
  if (code != 0) return out;
  const auto doc = nlohmann::json::parse(box.file("bmo.json"));
  std::size_t pieces = 0;
  std::size_t passed = 0;
  for (const auto& lv : doc["cone_checks"]) {
    pieces += lv["pieces"].get<std::size_t>();
    passed += lv["passed_pieces"].get<std::size_t>();
  }
  out.require(doc["cone_passed"].get<bool>(), "cone checks " + std::to_string(passed) + "/" + std::to_string(pieces) + " pieces");
  const auto exceeding = doc["exceeding"].get<std::size_t>();
  out.require(exceeding >= 10, "energy above " + fmt(doc["target"].get<double>()) + " at " + std::to_string(exceeding) + "/" +
                                   std::to_string(doc["points"].size()) + " points");
  return out;
}

// ------------------------------------------------------------------ 10

Outcome cli_determinism() {
  Outcome out;
  struct Run {
    std::string args;
    std::vector<std::string> outputs;
  };
  const std::vector<Run> runs{
      {"generate --kind weierstrass_graph --resolution 0.01 -o w.csv", {"w.csv", "w.csv.json"}},
      {"generate --kind regular_defeater --depth 2 --resolution 0.003 -o d.csv", {"d.csv", "d.csv.json"}},
      {"generate --kind cantor_segments --depth 3 --max-atoms 20000 -o c.csv", {"c.csv", "c.csv.json"}},
      {"generate --kind vertical_cantor --depth 3 --max-atoms 20000 -o v.csv", {"v.csv", "v.csv.json"}},
      {"generate --kind quartic_cantor --depth 8 -o q.csv", {"q.csv", "q.csv.json"}},
      {"dim -i w.csv --metric parabolic -o dim.json", {"dim.json"}},
      {"density -i v.csv --atom 100 --s 2 -o den.json", {"den.json"}},
      {"tangent -i c.csv --m 1 --sample-points 60 -o tan.json", {"tan.json", "tan.json.curves.csv"}},
      {"blowup -i v.csv --atom 5000 --r 0.05 --m 2 -o b.csv --report b.json", {"b.csv", "b.json"}},
      {"vconst --n 1 --m 2 --family vertical -o vc.json", {"vc.json"}},
      {"verify --suite geometry --cases 2000 -o ver.json", {"ver.json"}},
      {"defeater-bmo --depth 3 --resolution 0.003 --points 6 --required 3 -o bmo.json", {"bmo.json"}},
  };
  const Sandbox one("w1");
  const Sandbox eight("w8");
  const Sandbox again("rerun");
  std::size_t compared = 0;
  std::size_t mismatched = 0;
  for (const auto& [args, outputs] : runs) {
    const int a = one.run(args + " --threads 1");
    const int b = eight.run(args, "PARABGMT_THREADS=8");
    if (a != 0 || b != 0) {
      out.require(false, "'" + args + "' exited " + std::to_string(a) + "/" + std::to_string(b));
      return out;
    }
    for (const auto& f : outputs) {
      ++compared;
      if (one.file(f) != eight.file(f)) {
        ++mismatched;
        out.require(false, f + " differs between 1 and 8 workers");
      }
    }
  }
  for (const auto& input : {"w.csv", "c.csv", "v.csv"}) fs::copy_file(one.path() / input, again.path() / input);
  for (const auto& [args, outputs] : runs) {
    const auto report = std::find_if(outputs.begin(), outputs.end(), [](const std::string& f) { return f.ends_with(".json"); });
    fs::copy_file(one.path() / *report, again.path() / ("cfg_" + *report), fs::copy_options::overwrite_existing);
    const std::string command = args.substr(0, args.find(' '));
    if (again.run(command + " --config cfg_" + *report + " --threads 8") != 0) {
      out.require(false, "rerun of '" + args + "' failed");
      return out;
    }
    for (const auto& f : outputs) {
      ++compared;
      if (one.file(f) != again.file(f)) {
        ++mismatched;
        out.require(false, f + " differs on rerun from its embedded config");
      }
    }
  }
  out.require(mismatched == 0, std::to_string(compared - mismatched) + "/" + std::to_string(compared) + " outputs identical");
  return out;
}

}  // namespace

int main() {
  report(1, "exact algebra suite", exact_algebra);
  report(2, "cone-graph round trip", cone_graph_round_trip);
  report(3, "dimension fits", dimension_fits);
  report(4, "flat constants", flat_constants);
  report(5, "Lipschitz image covering scaling", lipschitz_image_scaling);
  report(6, "tangent detection", tangent_detection);
  report(7, "segment Cantor blow-up contains the diagonal half segment", segment_blowup);
  report(8, "differentiability dichotomy", differentiability);
  report(9, "defeater cone checks and energy", defeater_ledger);
  report(10, "CLI determinism across workers and reruns", cli_determinism);
  std::printf("%d of 10 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
