#include "parabgmt/generators.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <numeric>
#include <sstream>

#include "parabgmt/parallel.hpp"

namespace parabgmt {
namespace {

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(12);
  os << v;
  return os.str();
}

std::size_t grid_count(double dt) {
  if (!(dt > 0.0 && dt <= 1.0)) throw std::invalid_argument("grid step must lie in (0,1]");
  return static_cast<std::size_t>(std::llround(1.0 / dt)) + 1;
}

/// Sliding-window extremes over windows [i, i + len] for every i.
template <class Cmp>
std::vector<double> window_extreme(const std::vector<double>& f, std::size_t len, Cmp better) {
  std::vector<double> out;
  if (f.size() <= len) return out;
  out.reserve(f.size() - len);
  std::deque<std::size_t> dq;
  for (std::size_t i = 0; i < f.size(); ++i) {
    while (!dq.empty() && !better(f[dq.back()], f[i])) dq.pop_back();
    dq.push_back(i);
    if (dq.front() + len < i) dq.pop_front();
    if (i >= len) out.push_back(f[dq.front()]);
  }
  return out;
}

double unit_ball_volume(int k) { return std::pow(M_PI, k / 2.0) / std::tgamma(k / 2.0 + 1.0); }

/// H^m per unit of the plane's own Lebesgue measure, when known.
std::optional<double> flat_density(const HomPlane& plane) {
  if (plane.is_horizontal()) return std::pow(2.0, plane.k()) / unit_ball_volume(plane.k());
  if (plane.k() == 0) return 1.0;
  return std::nullopt;
}

void add_y_grid(int n, double dt, std::vector<std::vector<double>>& ys, double& dy) {
  ys.clear();
  dy = 1.0;
  if (n == 1) {
    ys.emplace_back();
    return;
  }
  const auto steps = static_cast<long>(std::ceil(1.0 / std::sqrt(dt) - 1e-9));
  dy = 1.0 / static_cast<double>(steps);
  std::vector<long> idx(static_cast<std::size_t>(n - 1), 0);
  for (;;) {
    std::vector<double> y(idx.size());
    for (std::size_t j = 0; j < idx.size(); ++j) y[j] = static_cast<double>(idx[j]) * dy;
    ys.push_back(std::move(y));
    std::size_t j = 0;
    while (j < idx.size()) {
      if (idx[j] < steps) {
        ++idx[j];
        break;
      }
      idx[j] = 0;
      ++j;
    }
    if (j == idx.size()) break;
  }
}

/// Cloud {(f(t), y, t)} over the grid points with mask set.
DiscreteMeasure graph_over_t(int n, const std::vector<double>& f, const std::vector<char>* mask, double dt,
                             Provenance prov) {
  std::vector<std::vector<double>> ys;
  double dy = 1.0;
  add_y_grid(n, dt, ys, dy);
  PointCloud cloud(n);
  std::vector<double> w;
  const double weight = dt * std::pow(dy, n - 1);
  for (std::size_t i = 0; i < f.size(); ++i) {
    if (mask != nullptr && !(*mask)[i]) continue;
    for (const auto& y : ys) {
      Eigen::VectorXd x(n);
      x[0] = f[i];
      for (int j = 1; j < n; ++j) x[j] = y[static_cast<std::size_t>(j - 1)];
      cloud.push_back(Point{x, static_cast<double>(i) * dt});
      w.push_back(weight);
    }
  }
  DiscreteMeasure mu(std::move(cloud), std::move(w), static_cast<double>(n + 1), std::move(prov));
  mu.set_resolution(std::sqrt(dt));
  return mu;
}

}  // namespace

double weierstrass_eval(double c0, int K, double t) {
  if (K < 1) throw std::invalid_argument("number of terms must be at least 1");
  CompensatedSum s;
  double freq = 1.0;
  for (int k = 1; k <= K; ++k) {
    freq *= 2.0;
    s.add(std::pow(2.0, -0.5 * k) * std::cos(freq * t));
  }
  return c0 * s.value();
}

double weierstrass_truncation_bound(double c0, int K) {
  return std::abs(c0) * std::pow(2.0, -0.5 * (K - 1)) * (2.0 + std::sqrt(2.0));
}

std::vector<double> weierstrass_samples(double c0, int K, double dt) {
  std::vector<double> f(grid_count(dt));
  parallel_for(f.size(), [&](std::size_t i) { f[i] = weierstrass_eval(c0, K, static_cast<double>(i) * dt); });
  return f;
}

DiscreteMeasure gen_weierstrass_graph(const WeierstrassSpec& spec) {
  if (spec.n < 1) throw std::invalid_argument("ambient dimension must be at least 1");
  const auto f = weierstrass_samples(spec.c0, spec.terms, spec.dt);
  Provenance prov;
  prov.tag = "weierstrass_graph";
  prov.notes["c0"] = fmt(spec.c0);
  prov.notes["terms"] = std::to_string(spec.terms);
  prov.notes["dt"] = fmt(spec.dt);
  prov.notes["truncation_bound"] = fmt(weierstrass_truncation_bound(spec.c0, spec.terms));
  prov.notes["holder_constant"] = fmt(measure_holder_constant(f, spec.dt));
  prov.notes["oscillation_constant"] = fmt(measure_oscillation_constant(f, spec.dt));
  prov.notes["ground_truth"] = "vertical Lipschitz graph without approximate tangent planes";
  return graph_over_t(spec.n, f, nullptr, spec.dt, std::move(prov));
}

double measure_oscillation_constant(const std::vector<double>& f, double dt, std::size_t min_steps) {
  if (f.size() < 2) throw std::invalid_argument("oscillation needs at least two samples");
  min_steps = std::max<std::size_t>(1, min_steps);
  double best = std::numeric_limits<double>::infinity();
  std::size_t len = std::min(min_steps, f.size() - 1);
  for (;;) {
    const auto hi = window_extreme(f, len, std::greater<>());
    const auto lo = window_extreme(f, len, std::less<>());
    const double scale = std::sqrt(static_cast<double>(len) * dt);
    for (std::size_t i = 0; i < hi.size(); ++i) best = std::min(best, (hi[i] - lo[i]) / scale);
    if (len == f.size() - 1) break;
    len = std::min(f.size() - 1, std::max(len + 1, static_cast<std::size_t>(std::floor(static_cast<double>(len) * 1.1))));
  }
  return best;
}

double measure_holder_constant(const std::vector<double>& f, double dt, std::size_t max_lag) {
  std::vector<std::size_t> lags;
  for (std::size_t l = 1; l <= max_lag && l < f.size(); ++l) lags.push_back(l);
  for (std::size_t l = max_lag * 2; l < f.size(); l *= 2) lags.push_back(l);
  std::vector<double> per(lags.size(), 0.0);
  parallel_for(lags.size(), [&](std::size_t j) {
    const std::size_t l = lags[j];
    double m = 0.0;
    for (std::size_t i = 0; i + l < f.size(); ++i) m = std::max(m, std::abs(f[i + l] - f[i]));
    per[j] = m / std::sqrt(static_cast<double>(l) * dt);
  });
  return per.empty() ? 0.0 : *std::max_element(per.begin(), per.end());
}

EqualPair find_equal_pair(const std::vector<double>& f, std::size_t lo, std::size_t hi, double ctilde) {
  if (hi >= f.size() || lo >= hi) throw std::invalid_argument("equal-pair search needs a proper index range");
  double step = 0.0;
  for (std::size_t i = lo; i < hi; ++i) step = std::max(step, std::abs(f[i + 1] - f[i]));
  const double tol = 2.0 * step;
  std::vector<std::size_t> order(hi - lo + 1);
  std::iota(order.begin(), order.end(), lo);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return f[a] < f[b]; });
  // Window [p, q) of sorted positions with value within tol above order[p]; track extreme indices.
  std::deque<std::size_t> maxq;
  std::deque<std::size_t> minq;
  std::size_t q = 0;
  std::size_t best_a = 0;
  std::size_t best_b = 0;
  std::size_t best_w = 0;
  for (std::size_t p = 0; p < order.size(); ++p) {
    while (q < order.size() && f[order[q]] - f[order[p]] <= tol) {
      while (!maxq.empty() && order[maxq.back()] <= order[q]) maxq.pop_back();
      maxq.push_back(q);
      while (!minq.empty() && order[minq.back()] >= order[q]) minq.pop_back();
      minq.push_back(q);
      ++q;
    }
    while (maxq.front() < p) maxq.pop_front();
    while (minq.front() < p) minq.pop_front();
    const std::size_t i = order[p];
    const std::size_t jmax = order[maxq.front()];
    const std::size_t jmin = order[minq.front()];
    auto consider = [&](std::size_t a, std::size_t b) {
      const std::size_t w = b - a;
      if (w > best_w || (w == best_w && w > 0 && a < best_a)) {
        best_w = w;
        best_a = a;
        best_b = b;
      }
    };
    if (jmax > i) consider(i, jmax);
    if (jmin < i) consider(jmin, i);
  }
  const double need = ctilde * static_cast<double>(hi - lo);
  if (best_w == 0 || static_cast<double>(best_w) < need) {
    throw NotFound("no equal pair of width " + fmt(need) + " grid steps in [" + std::to_string(lo) + ", " +
                   std::to_string(hi) + "]");
  }
  // Unless exactly equal, a genuine pair brackets a turning point; otherwise f is monotone across it.
  const double low = std::min(f[best_a], f[best_b]);
  const double high = std::max(f[best_a], f[best_b]);
  bool turns = f[best_a] == f[best_b];
  for (std::size_t c = best_a + 1; c < best_b && !turns; ++c) turns = f[c] < low || f[c] > high;
  if (!turns) {
    throw NotFound("f is monotone across the widest near-equal pair in [" + std::to_string(lo) + ", " +
                   std::to_string(hi) + "]");
  }
  return {best_a, best_b, std::abs(f[best_b] - f[best_a]), tol};
}

DefeaterResult gen_regular_defeater(const DefeaterSpec& spec) {
  if (spec.depth < 1) throw std::invalid_argument("depth must be at least 1");
  if (spec.n < 1) throw std::invalid_argument("ambient dimension must be at least 1");
  DefeaterResult res{DiscreteMeasure(PointCloud(spec.n), {}), {}, {}, {}, {}, {}, {}, spec.dt, 0.0, 0.0, 0.0};
  res.f0 = weierstrass_samples(spec.c0, spec.terms, spec.dt);
  res.oscillation_constant = measure_oscillation_constant(res.f0, spec.dt);
  res.holder_constant = measure_holder_constant(res.f0, spec.dt);
  const double c = res.oscillation_constant;
  res.ctilde = std::pow(c, 4) / 128.0;
  res.L = spec.L;
  if (res.L.empty()) {
    for (int k = 0; k <= spec.depth; ++k) res.L.push_back(1.0 / std::sqrt(k + 1.0));
  }
  if (static_cast<int>(res.L.size()) < spec.depth + 1) throw std::invalid_argument("need L_0..L_depth");
  for (std::size_t k = 1; k < res.L.size(); ++k) {
    if (!(res.L[k] > 0.0 && res.L[k] < res.L[k - 1])) throw std::invalid_argument("L must be strictly decreasing and positive");
  }
  res.c_levels = spec.c;
  if (res.c_levels.empty()) {
    for (int k = 1; k <= spec.depth; ++k) res.c_levels.push_back(c * (0.5 + std::pow(2.0, -k - 1)));
  }
  std::vector<int> parts = spec.parts;
  if (parts.empty()) parts.assign(static_cast<std::size_t>(spec.depth), 4);
  if (static_cast<int>(parts.size()) < spec.depth) throw std::invalid_argument("need N_k for every level");

  const std::size_t count = res.f0.size();
  res.f.push_back(res.f0);
  std::vector<LevelInterval> parents{{0, count - 1, 0}};
  for (int k = 0; k < spec.depth; ++k) {
    const auto& fk = res.f.back();
    std::vector<LevelInterval> level;
    for (std::size_t pi = 0; pi < parents.size(); ++pi) {
      const auto& P = parents[pi];
      const std::size_t len = P.hi - P.lo;
      const auto N = static_cast<std::size_t>(parts[static_cast<std::size_t>(k)]);
      for (std::size_t j = 0; j < N; ++j) {
        const std::size_t plo = P.lo + len * j / N + (j == 0 ? 0 : 1);
        const std::size_t phi = P.lo + len * (j + 1) / N;
        std::vector<std::pair<std::size_t, std::size_t>> todo{{plo, phi}};
        while (!todo.empty()) {
          const auto [u, v] = todo.back();
          todo.pop_back();
          if (v < u || v - u + 1 < spec.min_piece) continue;
          try {
            const EqualPair e = find_equal_pair(fk, u, v, res.ctilde);
            level.push_back({e.a, e.b, pi});
            if (e.a > u) todo.emplace_back(u, e.a - 1);
            if (e.b < v) todo.emplace_back(e.b + 1, v);
          } catch (const NotFound&) {
            // left outside A_{k+1}
          }
        }
      }
    }
    std::sort(level.begin(), level.end(), [](const auto& a, const auto& b) { return a.lo < b.lo; });
    if (level.empty()) throw std::runtime_error("no equal pairs found at level " + std::to_string(k + 1));
    std::vector<double> next = fk;
    const double ratio = res.L[static_cast<std::size_t>(k + 1)] / res.L[static_cast<std::size_t>(k)];
    for (const auto& I : level) {
      const double base = fk[I.lo];
      for (std::size_t t = I.lo; t <= I.hi; ++t) next[t] = ratio * (fk[t] - base) + base;
    }
    res.f.push_back(std::move(next));
    res.levels.push_back(level);
    parents = std::move(level);
  }
  res.in_final.assign(count, 0);
  for (const auto& I : res.levels.back()) {
    for (std::size_t t = I.lo; t <= I.hi; ++t) res.in_final[t] = 1;
  }
  Provenance prov;
  prov.tag = "regular_defeater";
  prov.notes["c0"] = fmt(spec.c0);
  prov.notes["dt"] = fmt(spec.dt);
  prov.notes["depth"] = std::to_string(spec.depth);
  prov.notes["c"] = fmt(res.oscillation_constant);
  prov.notes["ctilde"] = fmt(res.ctilde);
  prov.notes["holder_constant"] = fmt(res.holder_constant);
  prov.notes["ground_truth"] = "LG rectifiable, meets no regular Lipschitz graph in positive measure";
  res.measure = graph_over_t(spec.n, res.f.back(), &res.in_final, spec.dt, std::move(prov));
  return res;
}

std::vector<double> bmo_energy(const std::vector<double>& f, const std::vector<char>& mask, double dt,
                               std::size_t t_index) {
  if (t_index >= f.size() || mask.size() != f.size()) throw std::invalid_argument("bad energy arguments");
  std::vector<double> out;
  CompensatedSum total;
  const std::size_t count = f.size();
  for (std::size_t lag = 1; lag < count; lag *= 2) {
    for (std::size_t l = lag; l < 2 * lag && l < count; ++l) {
      const double denom = static_cast<double>(l) * dt;
      if (t_index + l < count && mask[t_index + l]) {
        const double d = f[t_index] - f[t_index + l];
        total.add(d * d / (denom * denom) * dt);
      }
      if (t_index >= l && mask[t_index - l]) {
        const double d = f[t_index] - f[t_index - l];
        total.add(d * d / (denom * denom) * dt);
      }
    }
    out.push_back(total.value());
  }
  return out;
}

std::vector<int> default_cantor_sequence(int depth) {
  std::vector<int> n;
  for (int j = 1; j <= depth; ++j) n.push_back(j + 1);
  return n;
}

std::vector<std::vector<CantorSegment>> cantor_segment_levels(const std::vector<int>& n_seq, int depth) {
  if (depth < 1) throw std::invalid_argument("depth must be at least 1");
  if (static_cast<int>(n_seq.size()) < depth) throw std::invalid_argument("need n_1..n_depth");
  for (int j = 0; j < depth; ++j) {
    if (n_seq[static_cast<std::size_t>(j)] < 1 || (j > 0 && n_seq[static_cast<std::size_t>(j)] <= n_seq[static_cast<std::size_t>(j - 1)])) {
      throw std::invalid_argument("n_j must be strictly increasing positive integers");
    }
  }
  std::vector<std::vector<CantorSegment>> levels;
  double r = 1.0 / n_seq[0];
  std::vector<CantorSegment> cur;
  for (int i = 0; i < n_seq[0]; ++i) cur.push_back({i * r, 0.0, r});
  levels.push_back(cur);
  for (int k = 1; k < depth; ++k) {
    const int nk = n_seq[static_cast<std::size_t>(k)];
    const double rk = r / nk;
    std::vector<CantorSegment> next;
    next.reserve(cur.size() * static_cast<std::size_t>(nk));
    for (const auto& p : cur) {
      for (int j = 0; j < nk; ++j) {
        const double x = p.x0 + j * rk;
        next.push_back({x, p.t0 + p.r * (x - p.x0), rk});
      }
    }
    levels.push_back(next);
    cur = std::move(next);
    r = rk;
  }
  return levels;
}

DiscreteMeasure gen_cantor_segments(const CantorSegmentsSpec& spec) {
  const auto n_seq = spec.n_seq.empty() ? default_cantor_sequence(spec.depth) : spec.n_seq;
  const auto levels = cantor_segment_levels(n_seq, spec.depth);
  const auto& segs = levels.back();
  int samples = spec.samples;
  if (samples <= 0) samples = static_cast<int>(std::max<std::size_t>(2, spec.max_atoms / segs.size()));
  const double r = segs.front().r;
  const double h = r / samples;
  const double weight = std::sqrt(2.0) * r / samples;
  PointCloud cloud(1);
  std::vector<double> w;
  cloud.reserve(segs.size() * static_cast<std::size_t>(samples));
  for (const auto& s : segs) {
    for (int j = 0; j < samples; ++j) {
      const double x = s.x0 + j * h;
      cloud.push_back(Point{Eigen::VectorXd::Constant(1, x), s.t0 + s.r * (x - s.x0)});
      w.push_back(weight);
    }
  }
  Provenance prov;
  prov.tag = "cantor_segments";
  std::string seq;
  for (int v : n_seq) seq += (seq.empty() ? "" : " ") + std::to_string(v);
  prov.notes["n_seq"] = seq;
  prov.notes["depth"] = std::to_string(spec.depth);
  prov.notes["samples_per_segment"] = std::to_string(samples);
  prov.notes["truncation_scale"] = fmt(r);
  prov.notes["ground_truth"] = "Euclidean 1-rectifiable, parabolically purely 1-unrectifiable";
  DiscreteMeasure mu(std::move(cloud), std::move(w), 1.0, std::move(prov));
  mu.set_resolution(std::sqrt(h * h + r * h));
  return mu;
}

std::vector<int> default_vertical_sequence(int depth) {
  std::vector<int> n;
  for (int k = 1; k <= depth; ++k) n.push_back(2 * k + 2);
  return n;
}

std::vector<std::vector<Rect>> vertical_cantor_levels(const std::vector<int>& n_seq, int depth) {
  if (depth < 1) throw std::invalid_argument("depth must be at least 1");
  if (static_cast<int>(n_seq.size()) < depth) throw std::invalid_argument("need n_1..n_depth");
  for (int k = 0; k < depth; ++k) {
    const int nk = n_seq[static_cast<std::size_t>(k)];
    if (nk < 2 || nk % 2 != 0) throw std::invalid_argument("n_k must be even integers of at least 2");
    if (k > 0 && nk <= n_seq[static_cast<std::size_t>(k - 1)]) throw std::invalid_argument("n_k must be strictly increasing");
  }
  std::vector<std::vector<Rect>> levels;
  std::vector<Rect> squares{{0.0, 1.0, 0.0, 1.0}};
  double rk = 1.0;
  for (int k = 0; k < depth; ++k) {
    const int nk = n_seq[static_cast<std::size_t>(k)];
    const double rn = rk / nk;
    std::vector<Rect> rects;
    rects.reserve(2 * squares.size());
    for (const auto& q : squares) {
      rects.push_back({q.x0, q.x0 + rn, q.t0, q.t0 + rk / 2.0});
      rects.push_back({q.x0 + rk - rn, q.x0 + rk, q.t0 + rk / 2.0, q.t0 + rk});
    }
    std::vector<Rect> next;
    next.reserve(rects.size() * static_cast<std::size_t>(nk / 2));
    for (const auto& R : rects) {
      for (int j = 0; j < nk / 2; ++j) next.push_back({R.x0, R.x0 + rn, R.t0 + j * rn, R.t0 + (j + 1) * rn});
    }
    levels.push_back(std::move(rects));
    squares = std::move(next);
    rk = rn;
  }
  return levels;
}

DiscreteMeasure gen_vertical_cantor(const VerticalCantorSpec& spec) {
  const auto n_seq = spec.n_seq.empty() ? default_vertical_sequence(spec.depth) : spec.n_seq;
  const auto levels = vertical_cantor_levels(n_seq, spec.depth);
  const auto& rects = levels.back();
  const double height = rects.front().t1 - rects.front().t0;
  std::size_t per = 0;
  if (spec.dt > 0.0) {
    per = static_cast<std::size_t>(std::max(1.0, std::floor(height / spec.dt + 1e-9)));
  } else {
    per = std::max<std::size_t>(2, spec.max_atoms / rects.size());
  }
  const double dt = height / static_cast<double>(per);
  PointCloud cloud(1);
  std::vector<double> w;
  cloud.reserve(rects.size() * per);
  for (const auto& R : rects) {
    const double xc = 0.5 * (R.x0 + R.x1);
    for (std::size_t j = 0; j < per; ++j) {
      cloud.push_back(Point{Eigen::VectorXd::Constant(1, xc), R.t0 + (static_cast<double>(j) + 0.5) * dt});
      w.push_back(dt);
    }
  }
  Provenance prov;
  prov.tag = "vertical_cantor";
  std::string seq;
  for (int v : n_seq) seq += (seq.empty() ? "" : " ") + std::to_string(v);
  prov.notes["n_seq"] = seq;
  prov.notes["depth"] = std::to_string(spec.depth);
  prov.notes["dt"] = fmt(dt);
  prov.notes["truncation_scale"] = fmt(rects.front().x1 - rects.front().x0);
  prov.notes["ground_truth"] = "vertically parabolic 2-rectifiable, Euclidean purely 1-unrectifiable";
  DiscreteMeasure mu(std::move(cloud), std::move(w), 2.0, std::move(prov));
  mu.set_resolution(std::sqrt(dt));
  return mu;
}

std::vector<double> default_quartic_gaps(int depth) {
  std::vector<double> g;
  for (int k = 0; k < depth; ++k) g.push_back(std::pow(4.0, -(k + 1)));
  return g;
}

std::vector<QuarticLevel> quartic_cantor_levels(const std::vector<double>& gaps, int depth) {
  if (depth < 1) throw std::invalid_argument("depth must be at least 1");
  if (static_cast<int>(gaps.size()) < depth) throw std::invalid_argument("need r'_0..r'_{depth-1}");
  std::vector<double> length{1.0};
  for (int k = 0; k < depth; ++k) {
    const double g = gaps[static_cast<std::size_t>(k)];
    const double child = (length.back() - g) / 2.0;
    if (!(g > 0.0) || !(child > 0.0)) throw std::invalid_argument("gaps must be positive and shorter than their interval");
    length.push_back(child);
  }
  std::vector<double> image(static_cast<std::size_t>(depth) + 1);
  image.back() = std::pow(length.back(), 4);
  for (int k = depth - 1; k >= 0; --k) {
    image[static_cast<std::size_t>(k)] = 2.0 * image[static_cast<std::size_t>(k) + 1] + std::pow(gaps[static_cast<std::size_t>(k)], 4);
  }
  std::vector<QuarticLevel> levels;
  levels.push_back({{{0.0, 1.0}}, {{0.0, image.front()}}});
  for (int k = 0; k < depth; ++k) {
    const auto& cur = levels.back();
    const double child = length[static_cast<std::size_t>(k) + 1];
    const double child_image = image[static_cast<std::size_t>(k) + 1];
    QuarticLevel next;
    for (std::size_t i = 0; i < cur.source.size(); ++i) {
      const auto [s0, s1] = cur.source[i];
      const auto [u0, u1] = cur.image[i];
      next.source.emplace_back(s0, s0 + child);
      next.source.emplace_back(s1 - child, s1);
      next.image.emplace_back(u0, u0 + child_image);
      next.image.emplace_back(u1 - child_image, u1);
    }
    levels.push_back(std::move(next));
  }
  return levels;
}

QuarticCantorResult gen_quartic_cantor(const QuarticCantorSpec& spec) {
  const auto gaps = spec.gaps.empty() ? default_quartic_gaps(spec.depth) : spec.gaps;
  auto levels = quartic_cantor_levels(gaps, spec.depth);
  const auto& last = levels.back();
  QuarticCantorResult res{DiscreteMeasure(PointCloud(1), {}), {}, {}, {}, {}};
  PointCloud cloud(1);
  std::vector<double> w;
  for (std::size_t i = 0; i < last.source.size(); ++i) {
    const auto [s0, s1] = last.source[i];
    const auto [u0, u1] = last.image[i];
    const double x = 0.5 * (s0 + s1);
    const double fx = 0.5 * (u0 + u1);
    res.x.push_back(x);
    res.fx.push_back(fx);
    res.piece.push_back(i);
    cloud.push_back(Point{Eigen::VectorXd::Constant(1, x), fx});
    w.push_back(s1 - s0);
  }
  const double cell = last.source.front().second - last.source.front().first;
  Provenance prov;
  prov.tag = "quartic_cantor";
  prov.notes["depth"] = std::to_string(spec.depth);
  prov.notes["truncation_scale"] = fmt(cell);
  prov.notes["ground_truth"] = "horizontally parabolic 1-rectifiable graph with Cantor t-projection";
  res.measure = DiscreteMeasure(std::move(cloud), std::move(w), 1.0, std::move(prov));
  res.measure.set_resolution(cell);
  res.levels = std::move(levels);
  return res;
}

DiscreteMeasure gen_flat(const HomPlane& plane, double extent, double resolution) {
  PointCloud cloud = flat_lattice(plane, extent, resolution);
  const double m = plane.dim();
  double weight = 0.0;
  std::string calibration;
  if (plane.is_horizontal() || plane.k() == 0) {
    const double p = plane.is_horizontal() ? std::pow(2.0, m) : 2.0;
    weight = p * std::pow(extent, m) / static_cast<double>(cloud.size());
    calibration = "exact";
  } else {
    weight = std::pow(resolution, plane.k()) * resolution * resolution;
    calibration = "uniform lattice cell";
  }
  std::vector<double> w(cloud.size(), weight);
  Provenance prov;
  prov.tag = "flat_plane";
  prov.notes["extent"] = fmt(extent);
  prov.notes["resolution"] = fmt(resolution);
  prov.notes["calibration"] = calibration;
  prov.notes["ground_truth"] = plane.is_vertical() ? "vertical flat" : "horizontal flat";
  DiscreteMeasure mu(std::move(cloud), std::move(w), m, std::move(prov));
  mu.set_resolution(resolution);
  return mu;
}

GraphMap graph_samples(const GraphFunction& g, const HomPlane& plane, const GraphDomain& domain, double resolution) {
  if (!(resolution > 0.0)) throw std::invalid_argument("resolution must be positive");
  const int k = plane.k();
  if (domain.lo.size() != k || domain.hi.size() != k) throw std::invalid_argument("domain must match the plane dimension");
  std::vector<long> steps(static_cast<std::size_t>(k));
  for (int j = 0; j < k; ++j) {
    if (domain.hi[j] < domain.lo[j]) throw std::invalid_argument("empty domain");
    steps[static_cast<std::size_t>(j)] = static_cast<long>(std::floor((domain.hi[j] - domain.lo[j]) / resolution + 1e-9));
  }
  const double dt = resolution * resolution;
  const long tsteps = plane.is_vertical() ? static_cast<long>(std::floor((domain.t_hi - domain.t_lo) / dt + 1e-9)) : 0;
  if (tsteps < 0) throw std::invalid_argument("empty time range");
  GraphMap out{plane, {}, {}, 0.0, 0.0};
  std::vector<long> idx(static_cast<std::size_t>(k), 0);
  for (;;) {
    Eigen::VectorXd u(k);
    for (int j = 0; j < k; ++j) u[j] = domain.lo[j] + static_cast<double>(idx[static_cast<std::size_t>(j)]) * resolution;
    for (long it = 0; it <= tsteps; ++it) {
      const double t = plane.is_vertical() ? domain.t_lo + static_cast<double>(it) * dt : 0.0;
      Point base{plane.basis() * u, t};
      Point value = project(plane, g(base), Part::complement);
      out.base.push_back(std::move(base));
      out.value.push_back(std::move(value));
    }
    int j = 0;
    while (j < k) {
      if (idx[static_cast<std::size_t>(j)] < steps[static_cast<std::size_t>(j)]) {
        ++idx[static_cast<std::size_t>(j)];
        break;
      }
      idx[static_cast<std::size_t>(j)] = 0;
      ++j;
    }
    if (j == k) break;
  }
  return out;
}

DiscreteMeasure gen_graph(const GraphFunction& g, const HomPlane& plane, const GraphDomain& domain, double resolution) {
  const GraphMap map = graph_samples(g, plane, domain, resolution);
  const double cell = std::pow(resolution, plane.k()) * (plane.is_vertical() ? resolution * resolution : 1.0);
  const auto density = flat_density(plane);
  std::vector<double> w(map.base.size(), cell * density.value_or(1.0));
  Provenance prov;
  prov.tag = "user_graph";
  prov.notes["resolution"] = fmt(resolution);
  prov.notes["calibration"] = density ? "flat density of the base plane" : "uniform lattice cell";
  prov.notes["ground_truth"] = plane.is_vertical() ? "graph over a vertical plane" : "graph over a horizontal plane";
  DiscreteMeasure mu(PointCloud::from_points(map.reassemble()), std::move(w), static_cast<double>(plane.dim()),
                     std::move(prov));
  mu.set_resolution(resolution);
  return mu;
}

}  // namespace parabgmt
