#include <algorithm>
#include <cmath>
#include <random>

#include "parabgmt/geometry.hpp"
#include "parabgmt/parallel.hpp"

namespace parabgmt {
namespace {

/// Complement coordinates: (I - P) x and, for horizontal planes, t. Linear in the point.
struct ComplementCoords {
  Eigen::MatrixXd comp_x;  // n x N
  Eigen::MatrixXd full_x;  // n x N
  Eigen::VectorXd t;       // N
  bool keep_t;
};

ComplementCoords complement_coords(const PointCloud& pts, const HomPlane& plane) {
  const auto n = static_cast<Eigen::Index>(pts.n());
  const auto count = static_cast<Eigen::Index>(pts.size());
  ComplementCoords cc;
  cc.full_x.resize(n, count);
  cc.t.resize(count);
  for (Eigen::Index i = 0; i < count; ++i) {
    const auto row = pts[static_cast<std::size_t>(i)];
    for (Eigen::Index d = 0; d < n; ++d) cc.full_x(d, i) = row[static_cast<std::size_t>(d)];
    cc.t[i] = row[static_cast<std::size_t>(n)];
  }
  cc.comp_x = cc.full_x - plane.projector() * cc.full_x;
  cc.keep_t = !plane.includes_t_axis();
  return cc;
}

/// true when q - p lies strictly inside X(0, V, s) outside the tolerance band.
bool pair_inside(const ComplementCoords& cc, Eigen::Index i, Eigen::Index j, double s, bool& coincident) {
  const double dt = std::abs(cc.t[j] - cc.t[i]);
  const double full_sq = (cc.full_x.col(j) - cc.full_x.col(i)).squaredNorm() + dt;
  coincident = full_sq == 0.0;
  if (coincident) return true;
  const double lhs = std::sqrt((cc.comp_x.col(j) - cc.comp_x.col(i)).squaredNorm() + (cc.keep_t ? dt : 0.0));
  return lhs < s * std::sqrt(full_sq) - kConeBand;
}

double uniform01(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

/// Deterministic unit vectors in the column span of `basis` (dimension d = basis.cols()).
std::vector<Eigen::VectorXd> sphere_samples(const Eigen::MatrixXd& basis, double tol, std::uint64_t seed) {
  std::vector<Eigen::VectorXd> out;
  const auto d = basis.cols();
  if (d == 0) return out;
  if (d == 1) {
    out.emplace_back(basis.col(0));
    out.emplace_back(-basis.col(0));
    return out;
  }
  if (d == 2) {
    const int steps = std::clamp(static_cast<int>(std::ceil(2.0 * M_PI / tol)), 8, 100000);
    for (int i = 0; i < steps; ++i) {
      const double a = 2.0 * M_PI * i / steps;
      out.emplace_back(std::cos(a) * basis.col(0) + std::sin(a) * basis.col(1));
    }
    return out;
  }
  std::mt19937_64 rng(seed);
  const int count = std::clamp(static_cast<int>(std::ceil(8.0 * static_cast<double>(d) / tol)), 64, 20000);
  for (int i = 0; i < count; ++i) {
    Eigen::VectorXd c(d);
    for (Eigen::Index j = 0; j < d; ++j) {
      const double u1 = 1.0 - uniform01(rng);
      const double u2 = uniform01(rng);
      c[j] = std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
    }
    if (c.norm() < 1e-12) continue;
    out.emplace_back(basis * c.normalized());
  }
  return out;
}

}  // namespace

std::vector<IndexPair> graph_cone_check(const PointCloud& points, const HomPlane& plane, double s) {
  if (!(s > 0.0 && s < 1.0)) throw std::invalid_argument("cone aperture must lie in (0,1)");
  if (points.n() != plane.n()) throw std::invalid_argument("dimension mismatch between points and plane");
  const std::size_t count = points.size();
  if (count < 2) return {};
  const ComplementCoords cc = complement_coords(points, plane);
  std::vector<std::vector<IndexPair>> per_row(count);
  parallel_for(count, [&](std::size_t i) {
    for (std::size_t j = i + 1; j < count; ++j) {
      bool same = false;
      if (!pair_inside(cc, static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j), s, same)) {
        per_row[i].emplace_back(i, j);
      }
    }
  });
  std::vector<IndexPair> out;
  for (auto& v : per_row) out.insert(out.end(), v.begin(), v.end());
  return out;
}

std::vector<IndexPair> graph_cone_check(const std::vector<Point>& points, const HomPlane& plane, double s) {
  if (points.size() < 2) {
    if (!(s > 0.0 && s < 1.0)) throw std::invalid_argument("cone aperture must lie in (0,1)");
    return {};
  }
  return graph_cone_check(PointCloud::from_points(points), plane, s);
}

std::vector<Point> GraphMap::reassemble() const {
  std::vector<Point> out;
  out.reserve(base.size());
  for (std::size_t i = 0; i < base.size(); ++i) out.push_back(base[i] + value[i]);
  return out;
}

GraphMap graph_extract(const std::vector<Point>& points, const HomPlane& plane, double s) {
  const auto violations = graph_cone_check(points, plane, s);
  if (!violations.empty()) {
    const auto [i, j] = violations.front();
    throw GraphRejected("cone condition fails for points " + std::to_string(i) + " and " +
                            std::to_string(j) + " (" + std::to_string(violations.size()) +
                            " violating pairs)",
                        violations.front());
  }
  GraphMap g{plane, {}, {}, s / std::sqrt(1.0 - s * s), 0.0};
  g.base.reserve(points.size());
  g.value.reserve(points.size());
  for (const auto& p : points) {
    g.base.push_back(project(plane, p, Part::onto));
    g.value.push_back(project(plane, p, Part::complement));
  }
  const std::size_t count = points.size();
  std::vector<double> row_max(count, 0.0);
  parallel_for(count, [&](std::size_t i) {
    for (std::size_t j = i + 1; j < count; ++j) {
      const double db = norm(g.base[j] - g.base[i]);
      if (db == 0.0) {
        if (norm(g.value[j] - g.value[i]) > 0.0) {
          throw GraphRejected("projection onto the plane is not injective", {i, j});
        }
        continue;
      }
      row_max[i] = std::max(row_max[i], norm(g.value[j] - g.value[i]) / db);
    }
  });
  for (double v : row_max) g.empirical_constant = std::max(g.empirical_constant, v);
  return g;
}

EuclidConeResult euclid_cone_radius(const Eigen::MatrixXd& subspace, double s, double tol) {
  if (!(s > 0.0 && s < 1.0)) throw std::invalid_argument("aperture must lie in (0,1)");
  if (!(tol > 0.0 && tol < 1.0)) throw std::invalid_argument("tolerance must lie in (0,1)");
  const auto dim = subspace.rows();
  const auto k = subspace.cols();
  if (dim < 2 || k < 1) throw std::invalid_argument("subspace must be a nonzero subspace of R^{n+1}");
  const Eigen::MatrixXd gram = subspace.transpose() * subspace;
  if ((gram - Eigen::MatrixXd::Identity(k, k)).cwiseAbs().maxCoeff() > 1e-10) {
    throw std::invalid_argument("subspace columns must be orthonormal");
  }
  const Eigen::Index n = dim - 1;
  const Eigen::RowVectorXd t_row = subspace.row(n);
  if (t_row.norm() < 1e-12) throw std::invalid_argument("subspace lies inside the horizontal hyperplane");

  // V cap H: combinations of the columns with vanishing t-component.
  const Eigen::VectorXd tdir = t_row.transpose().normalized();
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(tdir);
  const Eigen::MatrixXd qk = qr.householderQ() * Eigen::MatrixXd::Identity(k, k);
  const Eigen::MatrixXd kernel = qk.rightCols(k - 1);
  Eigen::MatrixXd horiz = (subspace * kernel).topRows(n);
  if (horiz.cols() > 0) {
    Eigen::HouseholderQR<Eigen::MatrixXd> qh(horiz);
    horiz = qh.householderQ() * Eigen::MatrixXd::Identity(n, horiz.cols());
  }
  if (horiz.cols() > n - 1) throw std::invalid_argument("subspace is the whole space; no proper vertical plane");
  EuclidConeResult res{false, 0.0, HomPlane::vertical(horiz), std::nullopt, 0};

  // Directions u = cos(a) v + sin(a) w, v in V, w in V-perp, sin(a) < s^2.
  Eigen::HouseholderQR<Eigen::MatrixXd> qv(subspace);
  const Eigen::MatrixXd qfull = qv.householderQ() * Eigen::MatrixXd::Identity(dim, dim);
  const Eigen::MatrixXd perp = qfull.rightCols(dim - k);
  const auto v_dirs = sphere_samples(subspace, tol, 0x5eedULL);
  const auto w_dirs = sphere_samples(perp, tol, 0x5eedULL + 1);
  const double a_max = std::asin(s * s);
  const int steps = std::max(2, static_cast<int>(std::ceil(a_max / tol)));
  std::vector<double> angles;
  for (int j = 0; j < steps; ++j) angles.push_back(a_max * j / steps);
  angles.push_back(a_max * (1.0 - 1e-9));

  std::vector<Eigen::VectorXd> dirs;
  for (const auto& v : v_dirs) {
    dirs.push_back(v);
    for (const auto& w : w_dirs) {
      for (std::size_t j = 1; j < angles.size(); ++j) {
        dirs.emplace_back(std::cos(angles[j]) * v + std::sin(angles[j]) * w);
      }
    }
  }
  res.directions = dirs.size();
  const HomPlane& W = res.verticalized;

  // The ratio |P_{W-perp} q| / ||q|| grows along each ray, so only the point where the ray
  // leaves B(0, r) needs checking.
  auto violation = [&](double r) -> std::optional<Point> {
    for (const auto& u : dirs) {
      const double ax = u.head(n).squaredNorm();
      const double at = std::abs(u[n]);
      double rho = 0.0;
      if (ax > 0.0) {
        rho = (-at + std::sqrt(at * at + 4.0 * ax * r * r)) / (2.0 * ax);
      } else {
        rho = r * r / at;
      }
      rho *= 1.0 - 1e-12;
      const Point q{rho * u.head(n), rho * u[n]};
      if (!(distance_to_plane(q, W) < s * norm(q))) return q;
    }
    return std::nullopt;
  };

  double hi = 1.0;
  std::optional<Point> witness;
  while (hi >= tol) {
    witness = violation(hi);
    if (!witness) break;
    hi *= 0.5;
  }
  if (witness) {
    res.witness = witness;
    return res;
  }
  double lo = hi;
  if (hi < 1.0) {
    double up = std::min(1.0, 2.0 * hi);
    while (up - lo > tol * lo) {
      const double mid = 0.5 * (lo + up);
      if (violation(mid)) {
        up = mid;
      } else {
        lo = mid;
      }
    }
  }
  res.certified = true;
  res.radius = lo;
  return res;
}

}  // namespace parabgmt
