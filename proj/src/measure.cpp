#include "parabgmt/measure.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "parabgmt/parallel.hpp"
#include "parabgmt/spatial.hpp"

namespace parabgmt {
namespace {

void require_positive(double r, const char* what) {
  if (!(r > 0.0) || !std::isfinite(r)) throw std::invalid_argument(std::string(what) + " must be positive");
}

std::vector<double> sorted_decreasing(std::vector<double> scales) {
  for (double r : scales) require_positive(r, "scale");
  std::sort(scales.begin(), scales.end(), std::greater<>());
  scales.erase(std::unique(scales.begin(), scales.end()), scales.end());
  return scales;
}

std::vector<std::size_t> cover_counts(const PointCloud& cloud, const std::vector<double>& scales, Metric metric) {
  std::vector<std::size_t> counts(scales.size());
  parallel_for(scales.size(), [&](std::size_t j) { counts[j] = greedy_cover(cloud, scales[j], metric).size(); });
  return counts;
}

double horizontal_norm(std::span<const double> row) {
  double s = 0.0;
  for (std::size_t i = 0; i + 1 < row.size(); ++i) s += row[i] * row[i];
  return std::sqrt(s);
}

/// Coordinates of a lattice point in the plane's own frame: horizontal basis coefficients, then t.
std::vector<double> plane_coords(const HomPlane& plane, std::span<const double> row) {
  const int n = plane.n();
  std::vector<double> c(static_cast<std::size_t>(plane.k()) + (plane.includes_t_axis() ? 1 : 0));
  for (int j = 0; j < plane.k(); ++j) {
    double v = 0.0;
    for (int i = 0; i < n; ++i) v += plane.basis()(i, j) * row[static_cast<std::size_t>(i)];
    c[static_cast<std::size_t>(j)] = v;
  }
  if (plane.includes_t_axis()) c.back() = row[static_cast<std::size_t>(n)];
  return c;
}

struct PackingLevel {
  double radius;
  std::size_t balls;
  double uncovered;            // fraction of lattice points outside every packed ball
};

/// Multi-scale packing of V cap B(0,1) by pairwise disjoint balls contained in B(0,1), coarse to
/// fine with ratio 1/2.
std::vector<PackingLevel> vitali_packing(const PointCloud& cloud, const HomPlane& plane, double coarse,
                                         double finest) {
  const std::size_t count = cloud.size();
  const auto order = canonical_order(cloud);
  std::vector<char> covered(count, 0);
  std::size_t covered_count = 0;
  const bool has_horizontal = plane.k() >= 1;
  std::vector<GridIndex> centers;  // one index per finished level, cell = its radius
  std::vector<PackingLevel> levels;
  for (double r = coarse; r >= finest * (1.0 - 1e-12); r *= 0.5) {
    const GridIndex all(cloud, r, Metric::parabolic);
    GridIndex current(cloud.n(), 2.0 * r, Metric::parabolic);
    std::size_t balls = 0;
    for (const std::size_t idx : order) {
      if (covered[idx]) continue;
      const auto p = cloud[idx];
      const double px = horizontal_norm(p);
      // B(p, r) cap V lies in B(0,1) iff |x|^2 + |t| + 2|x| r [k >= 1] + r^2 <= 1.
      const double reach = px * px + std::abs(p.back()) + (has_horizontal ? 2.0 * px * r : 0.0) + r * r;
      if (reach > 1.0) continue;
      bool clash = current.any_within(p, 2.0 * r);
      for (std::size_t j = 0; j < centers.size() && !clash; ++j) {
        clash = centers[j].any_within(p, levels[j].radius + r);
      }
      if (clash) continue;
      ++balls;
      current.insert(p, static_cast<std::uint32_t>(idx));
      all.for_each_within(p, r, [&](std::uint32_t id, double) {
        if (!covered[id]) {
          covered[id] = 1;
          ++covered_count;
        }
      });
    }
    levels.push_back({r, balls, static_cast<double>(count - covered_count) / static_cast<double>(count)});
    centers.push_back(std::move(current));
  }
  return levels;
}

}  // namespace

DiscreteMeasure::DiscreteMeasure(PointCloud points, std::vector<double> weights, std::optional<double> nominal_dim,
                                 Provenance provenance)
    : points_(points.n()), nominal_dim_(nominal_dim), provenance_(std::move(provenance)) {
  if (weights.size() != points.size()) throw std::invalid_argument("one weight per atom is required");
  for (std::size_t i = 0; i < points.size(); ++i) {
    for (double v : points[i]) {
      if (!std::isfinite(v)) throw std::invalid_argument("atom coordinates must be finite");
    }
    if (!(weights[i] > 0.0) || !std::isfinite(weights[i])) throw std::invalid_argument("atom weights must be positive and finite");
  }
  const auto order = canonical_order(points);
  points_.reserve(points.size());
  weights_.reserve(points.size());
  std::size_t i = 0;
  while (i < order.size()) {
    CompensatedSum w;
    const auto row = points[order[i]];
    std::size_t j = i;
    while (j < order.size() && std::equal(row.begin(), row.end(), points[order[j]].begin())) {
      w.add(weights[order[j]]);
      ++j;
    }
    points_.push_back(row);
    weights_.push_back(w.value());
    i = j;
  }
}

double DiscreteMeasure::total_mass() const {
  CompensatedSum s;
  for (double w : weights_) s.add(w);
  return s.value();
}

double DiscreteMeasure::mass_in_ball(const Point& a, double r) const {
  if (a.n() != n()) throw std::invalid_argument("dimension mismatch");
  std::vector<double> row(points_.stride());
  a.write_row(row);
  CompensatedSum s;
  for (std::size_t i = 0; i < size(); ++i) {
    if (row_distance(points_[i], row, Metric::parabolic) <= r) s.add(weights_[i]);
  }
  return s.value();
}

std::vector<std::size_t> greedy_cover(const PointCloud& cloud, double r, Metric metric) {
  require_positive(r, "cover radius");
  std::vector<std::size_t> centers;
  if (cloud.empty()) return centers;
  GridIndex index(cloud.n(), r, metric);
  for (const std::size_t idx : canonical_order(cloud)) {
    const auto row = cloud[idx];
    if (index.any_within(row, r)) continue;
    index.insert(row, static_cast<std::uint32_t>(idx));
    centers.push_back(idx);
  }
  return centers;
}

std::vector<double> default_scales(double resolution, int count, double ratio) {
  require_positive(resolution, "resolution");
  if (count < 1) throw std::invalid_argument("scale count must be positive");
  if (!(ratio > 0.0 && ratio < 1.0)) throw std::invalid_argument("scale ratio must lie in (0,1)");
  std::vector<double> out(static_cast<std::size_t>(count));
  double r = 4.0 * resolution;
  for (int j = count - 1; j >= 0; --j) {
    out[static_cast<std::size_t>(j)] = r;
    r /= ratio;
  }
  return out;
}

double estimate_resolution(const PointCloud& cloud, Metric metric, std::size_t max_samples) {
  if (cloud.size() < 2) throw std::invalid_argument("resolution needs at least two points");
  const std::size_t count = cloud.size();
  const std::size_t samples = std::min(count, std::max<std::size_t>(1, max_samples));
  // Bounding box extent gives an initial guess for the spacing.
  double extent = 0.0;
  for (std::size_t a = 0; a < cloud.stride(); ++a) {
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    for (std::size_t i = 0; i < count; ++i) {
      lo = std::min(lo, cloud[i][a]);
      hi = std::max(hi, cloud[i][a]);
    }
    const double span = hi - lo;
    const bool t_axis = a + 1 == cloud.stride();
    extent = std::max(extent, t_axis && metric == Metric::parabolic ? std::sqrt(span) : span);
  }
  if (extent == 0.0) return 0.0;
  double cell = extent / std::pow(static_cast<double>(count), 1.0 / static_cast<double>(cloud.stride()));
  std::vector<double> nn(samples, std::numeric_limits<double>::infinity());
  std::vector<std::size_t> idx_of(samples);
  for (std::size_t s = 0; s < samples; ++s) idx_of[s] = s * count / samples;
  std::vector<std::size_t> todo(samples);
  std::iota(todo.begin(), todo.end(), std::size_t{0});
  while (!todo.empty() && cell <= 4.0 * extent) {
    const GridIndex index(cloud, cell, metric);
    parallel_for(todo.size(), [&](std::size_t k) {
      const std::size_t s = todo[k];
      const std::size_t self = idx_of[s];
      double best = std::numeric_limits<double>::infinity();
      index.for_each_within(cloud[self], cell, [&](std::uint32_t id, double d) {
        if (id != self && d > 0.0) best = std::min(best, d);
      });
      nn[s] = best;
    });
    std::vector<std::size_t> next;
    for (std::size_t s : todo) {
      if (!std::isfinite(nn[s])) next.push_back(s);
    }
    todo = std::move(next);
    cell *= 2.0;
  }
  std::vector<double> finite;
  for (double v : nn) {
    if (std::isfinite(v)) finite.push_back(v);
  }
  if (finite.empty()) return 0.0;
  auto mid = finite.begin() + static_cast<std::ptrdiff_t>(finite.size() / 2);
  std::nth_element(finite.begin(), mid, finite.end());
  return *mid;
}

LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) throw std::invalid_argument("line fit needs matching samples");
  const double count = static_cast<double>(x.size());
  const double mx = std::accumulate(x.begin(), x.end(), 0.0) / count;
  const double my = std::accumulate(y.begin(), y.end(), 0.0) / count;
  double sxx = 0.0;
  double sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  LineFit f;
  f.slope = sxx > 0.0 ? sxy / sxx : 0.0;
  f.intercept = my - f.slope * mx;
  double rss = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double e = y[i] - f.intercept - f.slope * x[i];
    rss += e * e;
  }
  f.rms = std::sqrt(rss / count);
  if (x.size() > 2 && sxx > 0.0) {
    const double sigma2 = rss / (count - 2.0);
    f.intercept_se = std::sqrt(sigma2 * (1.0 / count + mx * mx / sxx));
  }
  return f;
}

namespace {

void check_fit_scales(const std::vector<double>& scales) {
  if (scales.size() < 4) throw std::invalid_argument("dimension fit needs at least 4 scales");
  if (std::log10(scales.front() / scales.back()) < 1.5 - 1e-9) {
    throw std::invalid_argument("dimension fit scales must span at least 1.5 decades");
  }
}

CoveringReport fit_counts(int n, std::vector<double> scales, std::vector<std::size_t> counts, Metric metric,
                          std::vector<double> s_values) {
  CoveringReport rep;
  rep.metric = metric;
  rep.scales = std::move(scales);
  rep.counts = std::move(counts);
  rep.s_values = std::move(s_values);
  for (double s : rep.s_values) {
    std::vector<double> row;
    for (std::size_t j = 0; j < rep.scales.size(); ++j) {
      row.push_back(static_cast<double>(rep.counts[j]) * std::pow(2.0 * rep.scales[j], s));
    }
    rep.sums.push_back(std::move(row));
  }
  const double cap = static_cast<double>(n) + (metric == Metric::parabolic ? 2.0 : 1.0);
  if (std::all_of(rep.counts.begin(), rep.counts.end(), [&](std::size_t c) { return c == rep.counts.front(); })) {
    rep.raw_slope = 0.0;
    rep.fitted_dim = 0.0;
    rep.fit_residual = std::numeric_limits<double>::infinity();
    return rep;
  }
  std::vector<double> lx;
  std::vector<double> ly;
  for (std::size_t j = 0; j < rep.scales.size(); ++j) {
    lx.push_back(-std::log(rep.scales[j]));
    ly.push_back(std::log(static_cast<double>(std::max<std::size_t>(rep.counts[j], 1))));
  }
  const LineFit f = fit_line(lx, ly);
  rep.raw_slope = f.slope;
  rep.fitted_dim = std::clamp(f.slope, 0.0, cap);
  rep.fit_residual = f.rms;
  return rep;
}

}  // namespace

CoveringReport dimension_fit(const PointCloud& cloud, std::vector<double> scales, Metric metric,
                             std::vector<double> s_values) {
  scales = sorted_decreasing(std::move(scales));
  check_fit_scales(scales);
  auto counts = cover_counts(cloud, scales, metric);
  return fit_counts(cloud.n(), std::move(scales), std::move(counts), metric, std::move(s_values));
}

std::size_t greedy_cover_count(const RowSource& rows, int n, double r, Metric metric) {
  require_positive(r, "cover radius");
  GridIndex index(n, r, metric);
  std::size_t count = 0;
  rows([&](std::span<const double> row) {
    if (static_cast<int>(row.size()) != n + 1) throw std::invalid_argument("row length does not match the dimension");
    if (index.any_within(row, r)) return;
    index.insert(row, static_cast<std::uint32_t>(count));
    ++count;
  });
  return count;
}

CoveringReport dimension_fit(const RowSource& rows, int n, std::vector<double> scales, Metric metric,
                             std::vector<double> s_values) {
  scales = sorted_decreasing(std::move(scales));
  check_fit_scales(scales);
  std::vector<std::size_t> counts(scales.size());
  parallel_for(scales.size(), [&](std::size_t j) { counts[j] = greedy_cover_count(rows, n, scales[j], metric); });
  return fit_counts(n, std::move(scales), std::move(counts), metric, std::move(s_values));
}

std::vector<double> hausdorff_sum(const PointCloud& cloud, double s, std::vector<double> scales, Metric metric) {
  if (!(s >= 0.0)) throw std::invalid_argument("exponent must be nonnegative");
  scales = sorted_decreasing(std::move(scales));
  const auto counts = cover_counts(cloud, scales, metric);
  std::vector<double> out;
  for (std::size_t j = 0; j < scales.size(); ++j) {
    out.push_back(static_cast<double>(counts[j]) * std::pow(2.0 * scales[j], s));
  }
  return out;
}

DensityEstimate density_profile(const DiscreteMeasure& mu, const Point& a, double s, std::vector<double> scales) {
  if (a.n() != mu.n()) throw std::invalid_argument("dimension mismatch");
  scales = sorted_decreasing(std::move(scales));
  if (scales.empty()) throw std::invalid_argument("density profile needs scales");
  DensityEstimate est{a, s, scales, {}, 0.0, 0.0};
  std::vector<double> row(mu.points().stride());
  a.write_row(row);
  std::vector<CompensatedSum> mass(scales.size());
  for (std::size_t i = 0; i < mu.size(); ++i) {
    const double d = row_distance(mu.points()[i], row, Metric::parabolic);
    if (d > scales.front()) continue;
    for (std::size_t j = 0; j < scales.size() && d <= scales[j]; ++j) mass[j].add(mu.weights()[i]);
  }
  for (std::size_t j = 0; j < scales.size(); ++j) {
    est.values.push_back(mass[j].value() / std::pow(2.0 * scales[j], s));
  }
  const std::size_t tail = (scales.size() + 2) / 3;
  const auto first = est.values.end() - static_cast<std::ptrdiff_t>(tail);
  est.upper = *std::max_element(first, est.values.end());
  est.lower = *std::min_element(first, est.values.end());
  return est;
}

HomPlane canonical_plane(int n, int m, PlaneFamily family) {
  if (n < 1) throw std::invalid_argument("ambient dimension must be at least 1");
  const bool vertical = family == PlaneFamily::vertical;
  const int k = vertical ? m - 2 : m;
  if (vertical ? (m < 2 || m > n + 1) : (m < 1 || m > n)) {
    throw std::invalid_argument("no plane of this family and dimension");
  }
  std::vector<int> axes(static_cast<std::size_t>(k));
  std::iota(axes.begin(), axes.end(), 0);
  return HomPlane::coordinate(n, axes, vertical);
}

PointCloud flat_lattice(const HomPlane& plane, double extent, double resolution) {
  require_positive(extent, "extent");
  require_positive(resolution, "resolution");
  const int k = plane.k();
  const bool vertical = plane.includes_t_axis();
  const auto steps_x = static_cast<long>(std::floor(extent / resolution + 1e-9));
  const double dt = resolution * resolution;
  const auto steps_t = vertical ? static_cast<long>(std::floor(extent * extent / dt + 1e-9)) : 0L;
  const double limit = extent * extent * (1.0 + 1e-12);
  PointCloud cloud(plane.n());
  std::vector<long> idx(static_cast<std::size_t>(k), -steps_x);
  Eigen::VectorXd u(k);
  for (;;) {
    double usq = 0.0;
    for (int j = 0; j < k; ++j) {
      u[j] = static_cast<double>(idx[static_cast<std::size_t>(j)]) * resolution;
      usq += u[j] * u[j];
    }
    if (usq <= limit) {
      const Eigen::VectorXd x = plane.basis() * u;
      for (long it = -steps_t; it <= steps_t; ++it) {
        const double t = static_cast<double>(it) * dt;
        if (usq + std::abs(t) <= limit) cloud.push_back(Point{x, t});
      }
    }
    int j = 0;
    while (j < k) {
      if (idx[static_cast<std::size_t>(j)] < steps_x) {
        ++idx[static_cast<std::size_t>(j)];
        break;
      }
      idx[static_cast<std::size_t>(j)] = -steps_x;
      ++j;
    }
    if (j == k) break;
  }
  return cloud;
}

FlatConstantEstimate flat_constant_estimate(int n, int m, PlaneFamily family, std::vector<double> radii) {
  const HomPlane plane = canonical_plane(n, m, family);
  const int k = plane.k();
  const bool vertical = plane.includes_t_axis();
  const double dm0 = static_cast<double>(m);
  FlatConstantEstimate est;
  est.n = n;
  est.m = m;
  est.family = family;
  if (radii.empty()) {
    // Lattice of about 3e5 points: lambda(V cap B(0,1)) is at most 2^m.
    double h = std::pow(std::pow(2.0, dm0) / 3.0e5, 1.0 / dm0);
    if (m <= 2) h = std::min(h, 0.01);
    const double finest = 4.0 * h;
    for (int j = 3; j >= 0; --j) radii.push_back(finest * std::pow(2.0, j));
  }
  radii = sorted_decreasing(std::move(radii));
  if (radii.size() < 2) throw std::invalid_argument("flat constant estimate needs at least two radii");
  est.radii = radii;
  est.resolution = radii.back() / 4.0;
  const PointCloud cloud = flat_lattice(plane, 1.0, est.resolution);
  est.cloud_size = cloud.size();
  const double slice = unit_ball_slice_diameter(plane);
  const double dm = static_cast<double>(m);

  // Ball packing, coarse to fine, with exact slice diameters D_V r. The packed balls exhaust the
  // slice up to a null set, so the packed sum is extrapolated to zero uncovered fraction.
  double coarse = radii.back();
  while (coarse * 2.0 <= 0.5 + 1e-12) coarse *= 2.0;
  const auto levels = vitali_packing(cloud, plane, coarse, radii.back());
  std::vector<double> uncovered;
  for (double r : radii) {
    CompensatedSum sum;
    const PackingLevel* last = nullptr;
    for (const auto& lv : levels) {
      if (lv.radius < r * (1.0 - 1e-9)) break;
      sum.add(static_cast<double>(lv.balls) * std::pow(slice * lv.radius, dm));
      last = &lv;
    }
    uncovered.push_back(last != nullptr ? last->uncovered : 1.0);
    est.ball_premeasure.push_back(sum.value());
  }
  est.uncovered_fraction = uncovered;

  // Isodiametric boxes: horizontal side a r, t side b r^2, a^2 k + b = 1 with the optimal split.
  const double kk = static_cast<double>(k);
  const double a = vertical ? 1.0 / std::sqrt(kk + 2.0) : 1.0 / std::sqrt(kk);
  const double b = vertical ? 2.0 / (kk + 2.0) : 0.0;
  for (double r : radii) {
    std::vector<std::vector<long>> cells;
    cells.reserve(cloud.size());
    for (std::size_t i = 0; i < cloud.size(); ++i) {
      const auto c = plane_coords(plane, cloud[i]);
      std::vector<long> key(c.size());
      for (int j = 0; j < k; ++j) {
        key[static_cast<std::size_t>(j)] = static_cast<long>(std::floor(c[static_cast<std::size_t>(j)] / (a * r)));
      }
      if (vertical) key.back() = static_cast<long>(std::floor(c.back() / (b * r * r)));
      cells.push_back(std::move(key));
    }
    std::sort(cells.begin(), cells.end());
    cells.erase(std::unique(cells.begin(), cells.end()), cells.end());
    est.box_premeasure.push_back(static_cast<double>(cells.size()) * std::pow(r, dm));
  }

  const std::size_t use = std::min<std::size_t>(4, radii.size());
  const std::vector<double> rx(radii.end() - static_cast<std::ptrdiff_t>(use), radii.end());
  const std::vector<double> ux(uncovered.end() - static_cast<std::ptrdiff_t>(use), uncovered.end());
  const std::vector<double> by(est.ball_premeasure.end() - static_cast<std::ptrdiff_t>(use), est.ball_premeasure.end());
  const std::vector<double> xy(est.box_premeasure.end() - static_cast<std::ptrdiff_t>(use), est.box_premeasure.end());
  const LineFit fb = fit_line(ux, by);
  const LineFit fx = fit_line(rx, xy);
  est.ball_intercept = fb.intercept;
  est.box_intercept = fx.intercept;
  if (fb.intercept <= fx.intercept) {
    est.value = fb.intercept;
    est.band = fb.intercept_se;
    est.cover = "balls";
  } else {
    est.value = fx.intercept;
    est.band = fx.intercept_se;
    est.cover = "boxes";
  }
  return est;
}

GridMap sample_grid_map(const std::function<Point(const Eigen::VectorXd&)>& f, int n, double side, int per_side) {
  if (n < 1) throw std::invalid_argument("target dimension must be at least 1");
  require_positive(side, "cube side");
  if (per_side < 2) throw std::invalid_argument("grid needs at least two nodes per axis");
  const int d = n + 1;
  std::size_t total = 1;
  for (int i = 0; i < d; ++i) total *= static_cast<std::size_t>(per_side);
  GridMap g{n, side, per_side, std::vector<Point>(total)};
  const double h = side / (per_side - 1);
  parallel_for(total, [&](std::size_t id) {
    Eigen::VectorXd u(d);
    std::size_t rest = id;
    for (int a = d - 1; a >= 0; --a) {
      u[a] = static_cast<double>(rest % static_cast<std::size_t>(per_side)) * h;
      rest /= static_cast<std::size_t>(per_side);
    }
    Point p = f(u);
    if (p.n() != n || !p.finite()) throw std::invalid_argument("map values must be finite points of the target space");
    g.values[id] = std::move(p);
  });
  return g;
}

LipCoverResult lip_image_cover_sum(const GridMap& f, int N) {
  if (N < 1) throw std::invalid_argument("refinement N must be positive");
  const int d = f.n + 1;
  const int M = f.per_side;
  if ((M - 1) % N != 0) throw std::invalid_argument("grid nodes per axis minus one must be a multiple of N");
  std::size_t total = 1;
  for (int i = 0; i < d; ++i) total *= static_cast<std::size_t>(M);
  if (f.values.size() != total) throw std::invalid_argument("grid map has the wrong number of samples");

  LipCoverResult res;
  res.N = N;
  const double R = f.side;
  const double rho = std::sqrt(R * (R / N));
  res.diameter = rho;
  const PointCloud image = PointCloud::from_points(f.values);
  // Difference quotients along grid edges at spacing h and 2h.
  const double h = R / (M - 1);
  std::vector<std::size_t> stride(static_cast<std::size_t>(d), 1);
  for (int a = d - 2; a >= 0; --a) stride[static_cast<std::size_t>(a)] = stride[static_cast<std::size_t>(a) + 1] * static_cast<std::size_t>(M);
  std::vector<double> fine(total, 0.0);
  std::vector<double> coarse(total, 0.0);
  parallel_for(total, [&](std::size_t id) {
    for (int a = 0; a < d; ++a) {
      const std::size_t sa = stride[static_cast<std::size_t>(a)];
      const std::size_t coord = (id / sa) % static_cast<std::size_t>(M);
      if (coord + 1 < static_cast<std::size_t>(M)) {
        fine[id] = std::max(fine[id], metric_eval(f.values[id], f.values[id + sa]) / h);
      }
      if (coord + 2 < static_cast<std::size_t>(M)) {
        coarse[id] = std::max(coarse[id], metric_eval(f.values[id], f.values[id + 2 * sa]) / (2.0 * h));
      }
    }
  });
  res.lipschitz_fine = *std::max_element(fine.begin(), fine.end());
  res.lipschitz_coarse = *std::max_element(coarse.begin(), coarse.end());

  const auto centers = greedy_cover(image, rho / 2.0, Metric::parabolic);
  res.balls = centers.size();

  // Each ball is charged the diameter of the image piece it covers: its box, widened by the
  // largest gap between adjacent samples, capped at the ball diameter.
  const double gap = res.lipschitz_fine * h;
  GridIndex index(f.n, rho / 2.0, Metric::parabolic);
  for (std::size_t c = 0; c < centers.size(); ++c) index.insert(image[centers[c]], static_cast<std::uint32_t>(c));
  const std::size_t stride_x = image.stride();
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> lo(centers.size() * stride_x, inf);
  std::vector<double> hi(centers.size() * stride_x, -inf);
  for (std::size_t i = 0; i < image.size(); ++i) {
    const auto row = image[i];
    std::uint32_t owner = 0;
    double best = inf;
    index.for_each_within(row, rho / 2.0, [&](std::uint32_t id, double dist) {
      if (dist < best || (dist == best && id < owner)) {
        best = dist;
        owner = id;
      }
    });
    for (std::size_t a = 0; a < stride_x; ++a) {
      lo[owner * stride_x + a] = std::min(lo[owner * stride_x + a], row[a]);
      hi[owner * stride_x + a] = std::max(hi[owner * stride_x + a], row[a]);
    }
  }
  CompensatedSum sum;
  for (std::size_t c = 0; c < centers.size(); ++c) {
    double x2 = 0.0;
    for (std::size_t a = 0; a + 1 < stride_x; ++a) x2 += std::pow(hi[c * stride_x + a] - lo[c * stride_x + a], 2);
    const double span_t = hi[c * stride_x + stride_x - 1] - lo[c * stride_x + stride_x - 1];
    sum.add(std::pow(std::min(rho, std::sqrt(x2 + span_t) + gap), d));
  }
  res.sum = sum.value();

  res.non_lipschitz = res.lipschitz_fine > 1.25 * res.lipschitz_coarse + 1e-12;
  return res;
}

}  // namespace parabgmt
