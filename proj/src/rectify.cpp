#include "parabgmt/rectify.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <random>
#include <stdexcept>

#include "parabgmt/parallel.hpp"
#include "parabgmt/spatial.hpp"

namespace parabgmt {
namespace {

/// Atoms of B(a, r_max) other than a, in atom order, as differences q - a.
struct Neighbourhood {
  Eigen::MatrixXd dx;  // n x N
  Eigen::VectorXd dt;
  Eigen::VectorXd dist;
  std::vector<double> weight;
};

Neighbourhood gather(const DiscreteMeasure& mu, std::span<const double> a, const std::vector<std::size_t>& ids,
                     double r_max) {
  const int n = mu.n();
  std::vector<std::size_t> keep;
  std::vector<double> dists;
  for (const std::size_t id : ids) {
    const double d = row_distance(mu.points()[id], a, Metric::parabolic);
    if (d > 0.0 && d <= r_max) {
      keep.push_back(id);
      dists.push_back(d);
    }
  }
  Neighbourhood nb;
  const auto count = static_cast<Eigen::Index>(keep.size());
  nb.dx.resize(n, count);
  nb.dt.resize(count);
  nb.dist.resize(count);
  for (Eigen::Index j = 0; j < count; ++j) {
    const auto row = mu.points()[keep[static_cast<std::size_t>(j)]];
    for (int i = 0; i < n; ++i) nb.dx(i, j) = row[static_cast<std::size_t>(i)] - a[static_cast<std::size_t>(i)];
    nb.dt[j] = row[static_cast<std::size_t>(n)] - a[static_cast<std::size_t>(n)];
    nb.dist[j] = dists[static_cast<std::size_t>(j)];
    nb.weight.push_back(mu.weights()[keep[static_cast<std::size_t>(j)]]);
  }
  return nb;
}

/// d(q - a, V) for every neighbour.
Eigen::VectorXd plane_gaps(const Neighbourhood& nb, const HomPlane& plane) {
  const Eigen::MatrixXd comp = nb.dx - plane.projector() * nb.dx;
  Eigen::VectorXd sq = comp.colwise().squaredNorm().transpose();
  if (plane.is_horizontal()) sq += nb.dt.cwiseAbs();
  return sq.cwiseSqrt();
}

std::vector<DefectSample> defect_curve(const Neighbourhood& nb, const Eigen::VectorXd& gaps, const TangentConfig& cfg) {
  std::vector<DefectSample> curve;
  for (const double r : cfg.r_list) {
    for (const double s : cfg.s_list) {
      CompensatedSum outside;
      for (Eigen::Index j = 0; j < nb.dist.size(); ++j) {
        if (nb.dist[j] <= kConeBand * r || nb.dist[j] > r) continue;  // the apex
        if (!(gaps[j] < s * nb.dist[j])) outside.add(nb.weight[static_cast<std::size_t>(j)]);
      }
      curve.push_back({r, s, outside.value() / std::pow(r, cfg.m)});
    }
  }
  return curve;
}

TangentResult evaluate(const Neighbourhood& nb, const std::vector<HomPlane>& planes, const TangentConfig& cfg) {
  TangentResult res;
  if (nb.dist.size() == 0) return res;
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < planes.size(); ++i) {
    auto curve = defect_curve(nb, plane_gaps(nb, planes[i]), cfg);
    double worst = 0.0;
    for (const auto& c : curve) worst = std::max(worst, c.defect);
    if (worst < best) {
      best = worst;
      res.plane_index = i;
      res.argmin_plane = planes[i];
      res.curve = std::move(curve);
    }
  }
  res.min_defect = best;
  if (best <= cfg.threshold) {
    res.best_plane = res.argmin_plane;
    res.cls = res.best_plane->is_vertical() ? TangentClass::vertical : TangentClass::horizontal;
  }
  return res;
}

std::vector<double> point_row(const Point& a) {
  std::vector<double> row(static_cast<std::size_t>(a.n()) + 1);
  a.write_row(row);
  return row;
}

}  // namespace

const char* to_string(TangentClass c) {
  switch (c) {
    case TangentClass::horizontal:
      return "horizontal";
    case TangentClass::vertical:
      return "vertical";
    case TangentClass::none:
      return "none";
  }
  return "none";
}

double cone_defect(const DiscreteMeasure& mu, const Point& a, const HomPlane& plane, double s, double r, double m) {
  if (!(s > 0.0 && s < 1.0)) throw std::invalid_argument("cone aperture must lie in (0,1)");
  if (!(r > 0.0)) throw std::invalid_argument("radius must be positive");
  if (a.n() != mu.n() || plane.n() != mu.n()) throw std::invalid_argument("dimension mismatch");
  std::vector<std::size_t> all(mu.size());
  std::iota(all.begin(), all.end(), std::size_t{0});
  const auto row = point_row(a);
  const Neighbourhood nb = gather(mu, row, all, r);
  const Eigen::VectorXd gaps = plane_gaps(nb, plane);
  CompensatedSum outside;
  for (Eigen::Index j = 0; j < nb.dist.size(); ++j) {
    if (nb.dist[j] <= kConeBand * r) continue;  // the apex
    if (!(gaps[j] < s * nb.dist[j])) outside.add(nb.weight[static_cast<std::size_t>(j)]);
  }
  return outside.value() / std::pow(r, m);
}

TangentConfig resolve_config(const DiscreteMeasure& mu, TangentConfig cfg) {
  if (cfg.m < 1 || cfg.m > mu.n() + 1) throw std::invalid_argument("plane dimension out of range");
  if (cfg.s_list.empty()) throw std::invalid_argument("aperture list must not be empty");
  for (double s : cfg.s_list) {
    if (!(s > 0.0 && s < 1.0)) throw std::invalid_argument("apertures must lie in (0,1)");
  }
  if (cfg.plane_budget < 1) throw std::invalid_argument("plane budget must be positive");
  if (cfg.r_list.empty()) {
    double res = cfg.resolution;
    if (!(res > 0.0)) res = mu.resolution().value_or(0.0);
    if (!(res > 0.0)) res = estimate_resolution(mu.points(), Metric::parabolic);
    if (!(res > 0.0)) throw std::invalid_argument("cannot determine the cloud resolution");
    cfg.resolution = res;
    cfg.r_list = {8.0 * res, 4.0 * res, 2.0 * res};
  }
  for (double r : cfg.r_list) {
    if (!(r > 0.0)) throw std::invalid_argument("radii must be positive");
  }
  std::sort(cfg.r_list.begin(), cfg.r_list.end(), std::greater<>());
  return cfg;
}

TangentResult detect_tangent(const DiscreteMeasure& mu, const Point& a, const TangentConfig& config) {
  if (a.n() != mu.n()) throw std::invalid_argument("dimension mismatch");
  const TangentConfig cfg = resolve_config(mu, config);
  const auto planes = sample_planes(mu.n(), cfg.m, cfg.plane_budget, cfg.seed);
  std::vector<std::size_t> all(mu.size());
  std::iota(all.begin(), all.end(), std::size_t{0});
  return evaluate(gather(mu, point_row(a), all, cfg.r_list.front()), planes, cfg);
}

std::vector<std::size_t> seeded_subsample(std::size_t count, std::size_t wanted, std::uint64_t seed) {
  std::vector<std::size_t> idx(count);
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  if (wanted >= count) return idx;
  std::mt19937_64 rng(seed);
  for (std::size_t i = 0; i < wanted; ++i) {
    const std::size_t j = i + static_cast<std::size_t>(rng() % (count - i));
    std::swap(idx[i], idx[j]);
  }
  idx.resize(wanted);
  std::sort(idx.begin(), idx.end());
  return idx;
}

TangentReport classify_points(const DiscreteMeasure& mu, const TangentConfig& config) {
  TangentReport rep;
  rep.config = resolve_config(mu, config);
  const TangentConfig& cfg = rep.config;
  const auto planes = sample_planes(mu.n(), cfg.m, cfg.plane_budget, cfg.seed);
  const auto sample = seeded_subsample(mu.size(), cfg.sample_points, cfg.seed);
  const double r_max = cfg.r_list.front();
  const GridIndex index(mu.points(), r_max, Metric::parabolic);
  rep.points.resize(sample.size());
  parallel_for(sample.size(), [&](std::size_t k) {
    const std::size_t atom = sample[k];
    const auto row = mu.points()[atom];
    std::vector<std::size_t> ids;
    index.for_each_within(row, r_max, [&](std::uint32_t id, double) { ids.push_back(id); });
    std::sort(ids.begin(), ids.end());
    rep.points[k] = {atom, mu.points().point(atom), evaluate(gather(mu, row, ids, r_max), planes, cfg)};
  });
  std::size_t h = 0;
  std::size_t v = 0;
  for (const auto& p : rep.points) {
    h += p.result.cls == TangentClass::horizontal ? 1 : 0;
    v += p.result.cls == TangentClass::vertical ? 1 : 0;
  }
  const double total = static_cast<double>(rep.points.size());
  if (total > 0.0) {
    rep.horizontal_fraction = static_cast<double>(h) / total;
    rep.vertical_fraction = static_cast<double>(v) / total;
    rep.none_fraction = static_cast<double>(rep.points.size() - h - v) / total;
  }
  return rep;
}

DiscreteMeasure blowup_measure(const DiscreteMeasure& mu, const Point& a, double r, Normalization normalization, double m) {
  if (!(r > 0.0)) throw std::invalid_argument("blow-up radius must be positive");
  if (a.n() != mu.n()) throw std::invalid_argument("dimension mismatch");
  const auto arow = point_row(a);
  PointCloud pts(mu.n());
  std::vector<double> w;
  CompensatedSum mass;
  for (std::size_t i = 0; i < mu.size(); ++i) {
    if (row_distance(mu.points()[i], arow, Metric::parabolic) > r) continue;
    Point q = blowup_map(a, r, mu.points().point(i));
    if (norm(q) > 1.0) continue;
    pts.push_back(q);
    w.push_back(mu.weights()[i]);
    mass.add(mu.weights()[i]);
  }
  double c = 0.0;
  if (normalization == Normalization::mass) {
    if (w.empty()) throw std::invalid_argument("blow-up ball contains no atoms");
    c = 1.0 / mass.value();
  } else {
    c = std::pow(r, -m);
  }
  for (double& x : w) x *= c;
  Provenance prov = mu.provenance();
  prov.notes["blowup_radius"] = std::to_string(r);
  DiscreteMeasure out(std::move(pts), std::move(w), mu.nominal_dim(), std::move(prov));
  if (mu.resolution()) out.set_resolution(*mu.resolution() / r);
  return out;
}

FlatnessResult flatness_defect(const DiscreteMeasure& nu, const FlatnessConfig& cfg) {
  if (nu.empty()) throw std::invalid_argument("flatness needs a nonempty measure");
  if (!(cfg.tube > 0.0) || !(cfg.cell > 0.0)) throw std::invalid_argument("tube width and cell size must be positive");
  const auto planes = sample_planes(nu.n(), cfg.m, cfg.plane_budget, cfg.seed);
  const double total = nu.total_mass();
  std::vector<FlatnessResult> results(planes.size(), FlatnessResult{planes.front(), 0, 1.0, 1.0, 1.0});
  parallel_for(planes.size(), [&](std::size_t pi) {
    const HomPlane& plane = planes[pi];
    const int k = plane.k();
    const bool vertical = plane.is_vertical();
    const double cx = cfg.cell;
    const double ct = cfg.cell * cfg.cell;
    using Key = std::vector<long>;
    auto key_of = [&](const Eigen::VectorXd& u, double t) {
      Key key(static_cast<std::size_t>(k) + (vertical ? 1 : 0));
      for (int j = 0; j < k; ++j) key[static_cast<std::size_t>(j)] = static_cast<long>(std::floor(u[j] / cx));
      if (vertical) key.back() = static_cast<long>(std::floor(t / ct));
      return key;
    };
    CompensatedSum outside;
    std::vector<Key> occupied;
    for (std::size_t i = 0; i < nu.size(); ++i) {
      const Point q = nu.points().point(i);
      if (distance_to_plane(q, plane) > cfg.tube) {
        outside.add(nu.weights()[i]);
        continue;
      }
      const Eigen::VectorXd u = plane.basis().transpose() * q.x;
      occupied.push_back(key_of(u, q.t));
    }
    std::sort(occupied.begin(), occupied.end());
    occupied.erase(std::unique(occupied.begin(), occupied.end()), occupied.end());
    // Cells of the fixed grid whose centers lie in V cap B(0,1).
    const long lx = static_cast<long>(std::ceil(1.0 / cx));
    const long lt = vertical ? static_cast<long>(std::ceil(1.0 / ct)) : 0;
    std::size_t cells = 0;
    std::size_t empty = 0;
    std::vector<long> idx(static_cast<std::size_t>(k), -lx);
    for (;;) {
      double usq = 0.0;
      for (int j = 0; j < k; ++j) {
        const double c = (static_cast<double>(idx[static_cast<std::size_t>(j)]) + 0.5) * cx;
        usq += c * c;
      }
      for (long it = -lt; it <= (vertical ? lt - 1 : 0); ++it) {
        const double tc = vertical ? (static_cast<double>(it) + 0.5) * ct : 0.0;
        if (usq + std::abs(tc) > 1.0) continue;
        Key key(idx.begin(), idx.end());
        if (vertical) key.push_back(it);
        ++cells;
        if (!std::binary_search(occupied.begin(), occupied.end(), key)) ++empty;
      }
      int j = 0;
      while (j < k) {
        if (idx[static_cast<std::size_t>(j)] < lx - 1) {
          ++idx[static_cast<std::size_t>(j)];
          break;
        }
        idx[static_cast<std::size_t>(j)] = -lx;
        ++j;
      }
      if (j == k) break;
    }
    FlatnessResult& r = results[pi];
    r.plane = plane;
    r.plane_index = pi;
    r.outside_mass = outside.value() / total;
    r.empty_cells = cells > 0 ? static_cast<double>(empty) / static_cast<double>(cells) : 0.0;
    r.defect = std::min(1.0, r.outside_mass + r.empty_cells);
  });
  std::size_t best = 0;
  for (std::size_t i = 1; i < results.size(); ++i) {
    if (results[i].defect < results[best].defect) best = i;
  }
  return results[best];
}

UniquenessScan tangent_uniqueness_scan(const DiscreteMeasure& mu, const Point& a, std::vector<double> scales,
                                       const FlatnessConfig& cfg) {
  if (scales.size() < 3) throw std::invalid_argument("uniqueness scan needs at least 3 scales");
  std::sort(scales.begin(), scales.end(), std::greater<>());
  UniquenessScan scan;
  scan.scales = scales;
  for (const double r : scales) {
    scan.per_scale.push_back(flatness_defect(blowup_measure(mu, a, r, Normalization::mass), cfg));
    scan.max_defect = std::max(scan.max_defect, scan.per_scale.back().defect);
  }
  for (std::size_t i = 0; i < scan.per_scale.size(); ++i) {
    for (std::size_t j = i + 1; j < scan.per_scale.size(); ++j) {
      scan.spread = std::max(scan.spread, plane_distance(scan.per_scale[i].plane, scan.per_scale[j].plane));
    }
  }
  return scan;
}

std::vector<double> default_differential_scales(double resolution) {
  if (!(resolution > 0.0)) throw std::invalid_argument("resolution must be positive");
  return {32.0 * resolution, 16.0 * resolution, 8.0 * resolution};
}

DifferentialFit fit_differential(const GraphMap& graph, std::size_t index, const DifferentialConfig& cfg) {
  if (index >= graph.base.size()) throw std::out_of_range("base point index out of range");
  if (cfg.scales.empty()) throw std::invalid_argument("differential fit needs scales");
  const HomPlane& plane = graph.plane;
  const int n = plane.n();
  const int k = plane.k();
  auto scales = cfg.scales;
  std::sort(scales.begin(), scales.end(), std::greater<>());
  const Eigen::MatrixXd comp = Eigen::MatrixXd::Identity(n, n) - plane.projector();
  const Point& p = graph.base[index];
  const Point& gp = graph.value[index];

  struct Sample {
    double dist;
    Eigen::VectorXd dy;
    Eigen::VectorXd dvx;
    double dvt;
  };
  std::vector<Sample> near;
  for (std::size_t j = 0; j < graph.base.size(); ++j) {
    if (j == index) continue;
    const Point db = graph.base[j] - p;
    const double d = norm(db);
    if (d == 0.0 || d > scales.front()) continue;
    const Point dv = graph.value[j] - gp;
    near.push_back({d, plane.basis().transpose() * db.x, dv.x, dv.t});
  }

  DifferentialFit fit;
  fit.base = p;
  fit.index = index;
  fit.lambda = Eigen::MatrixXd::Zero(n, k);
  bool finest_deficient = false;
  for (const double rho : scales) {
    Eigen::MatrixXd A = Eigen::MatrixXd::Zero(k, k);
    Eigen::MatrixXd C = Eigen::MatrixXd::Zero(n, k);
    std::size_t count = 0;
    for (const auto& s : near) {
      if (s.dist > rho) continue;
      const double w = 1.0 / (s.dist * s.dist);
      A += w * s.dy * s.dy.transpose();
      C += w * s.dvx * s.dy.transpose();
      ++count;
    }
    fit.neighbours.push_back(count);
    Eigen::MatrixXd lambda = Eigen::MatrixXd::Zero(n, k);
    bool deficient = count == 0 || count < static_cast<std::size_t>(k);
    if (!deficient && k > 0) {
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(A);
      const double top = eig.eigenvalues().maxCoeff();
      deficient = !(top > 0.0) || eig.eigenvalues().minCoeff() < 1e-10 * top;
      if (!deficient) lambda = comp * (C * A.inverse());
    }
    finest_deficient = deficient;
    if (deficient) {
      fit.residual_curve.emplace_back(rho, std::numeric_limits<double>::infinity());
      continue;
    }
    double worst = 0.0;
    for (const auto& s : near) {
      if (s.dist > rho) continue;
      const Point err{s.dvx - lambda * s.dy, s.dvt};
      worst = std::max(worst, norm(err) / s.dist);
    }
    fit.residual_curve.emplace_back(rho, worst);
    fit.lambda = lambda;
  }
  fit.rank_deficient = finest_deficient;
  if (!finest_deficient) {
    bool decreasing = true;
    for (std::size_t i = 1; i < fit.residual_curve.size(); ++i) {
      decreasing = decreasing && fit.residual_curve[i].second <= fit.residual_curve[i - 1].second + 1e-12;
    }
    fit.differentiable = decreasing && fit.residual_curve.back().second < cfg.threshold;
  }
  return fit;
}

HomPlane tilted_plane(const HomPlane& plane, const Eigen::MatrixXd& lambda) {
  if (plane.k() == 0) return plane;
  return HomPlane::from_span(plane.basis() + lambda, plane.includes_t_axis());
}

SplitResult split_lipschitz(const GraphMap& graph, const std::vector<DifferentialFit>& fits, double L) {
  if (!(L > 0.0 && L < 1.0)) throw std::invalid_argument("L must lie in (0,1)");
  const std::size_t count = graph.base.size();
  if (fits.size() != count) throw std::invalid_argument("one differential fit per graph point is required");
  for (const auto& f : fits) {
    if (f.rank_deficient) throw std::invalid_argument("every point needs a successful differential fit");
  }
  const HomPlane& plane = graph.plane;
  const int n = plane.n();
  const int k = plane.k();
  SplitResult out;
  out.certified_constant = L / std::sqrt(1.0 - L * L);
  out.aperture = out.certified_constant / std::sqrt(1.0 + out.certified_constant * out.certified_constant);

  // Radius class: largest 2^{-i} on which the point's own differential is accurate to L/4.
  constexpr int kMaxClass = 60;
  constexpr int kUnbounded = -1;  // differential accurate against every other point
  std::vector<int> radius_class(count, kMaxClass);
  parallel_for(count, [&](std::size_t p) {
    std::vector<std::pair<double, double>> rel;
    for (std::size_t q = 0; q < count; ++q) {
      if (q == p) continue;
      const Point db = graph.base[q] - graph.base[p];
      const double d = norm(db);
      if (d == 0.0) continue;
      const Point dv = graph.value[q] - graph.value[p];
      const Eigen::VectorXd dy = plane.basis().transpose() * db.x;
      const Point err{dv.x - fits[p].lambda * dy, dv.t};
      rel.emplace_back(d, norm(err) / d);
    }
    std::sort(rel.begin(), rel.end());
    std::vector<double> prefix(rel.size());
    double m = 0.0;
    for (std::size_t j = 0; j < rel.size(); ++j) {
      m = std::max(m, rel[j].second);
      prefix[j] = m;
    }
    if (prefix.empty() || prefix.back() <= L / 4.0) {
      radius_class[p] = kUnbounded;
      return;
    }
    for (int i = 0; i <= kMaxClass; ++i) {
      const double radius = std::ldexp(1.0, -i);
      const auto it = std::upper_bound(rel.begin(), rel.end(), std::make_pair(radius, std::numeric_limits<double>::infinity()));
      const auto within = static_cast<std::size_t>(it - rel.begin());
      if (within == 0 || prefix[within - 1] <= L / 4.0) {
        radius_class[p] = i;
        return;
      }
    }
  });

  // Differential net: entries rounded to cells of side L / (2 sqrt(entries)).
  const double entries = std::max(1.0, static_cast<double>(n * k));
  const double step = L / (2.0 * std::sqrt(entries));
  const Eigen::MatrixXd comp = Eigen::MatrixXd::Identity(n, n) - plane.projector();
  std::map<std::vector<long>, std::size_t> lookup;
  for (std::size_t p = 0; p < count; ++p) {
    const int i = radius_class[p];
    const double side = std::ldexp(1.0, -i) / (2.0 * std::sqrt(static_cast<double>(k) + 1.0));
    std::vector<long> key{static_cast<long>(i)};
    const Eigen::VectorXd u = plane.basis().transpose() * graph.base[p].x;
    const bool bounded = i != kUnbounded;
    for (int j = 0; j < k; ++j) key.push_back(bounded ? static_cast<long>(std::floor(u[j] / side)) : 0L);
    if (plane.is_vertical()) {
      key.push_back(bounded ? static_cast<long>(std::floor(graph.base[p].t / (side * side))) : 0L);
    }
    for (Eigen::Index c = 0; c < fits[p].lambda.cols(); ++c) {
      for (Eigen::Index r = 0; r < fits[p].lambda.rows(); ++r) {
        key.push_back(static_cast<long>(std::floor(fits[p].lambda(r, c) / step)));
      }
    }
    auto [it, inserted] = lookup.emplace(key, out.pieces.size());
    if (inserted) {
      Eigen::MatrixXd lambda(n, k);
      std::size_t pos = static_cast<std::size_t>(1 + k + (plane.is_vertical() ? 1 : 0));
      for (Eigen::Index c = 0; c < k; ++c) {
        for (Eigen::Index r = 0; r < n; ++r) lambda(r, c) = (static_cast<double>(key[pos++]) + 0.5) * step;
      }
      lambda = comp * lambda;
      out.pieces.push_back({{}, i, lambda, tilted_plane(plane, lambda)});
    }
    out.pieces[it->second].members.push_back(p);
  }

  for (const auto& piece : out.pieces) {
    std::vector<Point> pts;
    for (const std::size_t p : piece.members) pts.push_back(graph.base[p] + graph.value[p]);
    const auto bad = graph_cone_check(pts, piece.tilted, out.aperture);
    if (!bad.empty()) {
      const IndexPair w{piece.members[bad.front().first], piece.members[bad.front().second]};
      throw SplitFailure("piece fails the cone condition at points " + std::to_string(w.first) + " and " +
                             std::to_string(w.second),
                         w);
    }
  }
  return out;
}

}  // namespace parabgmt
