#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "parabgmt/geometry.hpp"

namespace parabgmt {
namespace {

constexpr double kOrthoTol = 1e-10;

void check_orthonormal(const Eigen::MatrixXd& basis) {
  if (basis.cols() == 0) return;
  const Eigen::MatrixXd gram = basis.transpose() * basis;
  const double err = (gram - Eigen::MatrixXd::Identity(basis.cols(), basis.cols())).cwiseAbs().maxCoeff();
  if (!(err <= kOrthoTol)) {
    throw std::invalid_argument("plane basis is not orthonormal (max deviation " +
                                std::to_string(err) + ")");
  }
}

/// Columns completing `basis` to an orthonormal basis of R^n.
Eigen::MatrixXd orthogonal_complement(const Eigen::MatrixXd& basis) {
  const auto n = basis.rows();
  const auto k = basis.cols();
  if (k == 0) return Eigen::MatrixXd::Identity(n, n);
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(basis);
  const Eigen::MatrixXd q = qr.householderQ() * Eigen::MatrixXd::Identity(n, n);
  return q.rightCols(n - k);
}

double uniform01(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

double gaussian(std::mt19937_64& rng) {
  const double u1 = 1.0 - uniform01(rng);
  const double u2 = uniform01(rng);
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
}

void combinations(int n, int k, int start, std::vector<int>& cur, std::vector<std::vector<int>>& out) {
  if (static_cast<int>(cur.size()) == k) {
    out.push_back(cur);
    return;
  }
  for (int i = start; i < n; ++i) {
    cur.push_back(i);
    combinations(n, k, i + 1, cur, out);
    cur.pop_back();
  }
}

}  // namespace

HomPlane::HomPlane(Eigen::MatrixXd basis, bool t_axis) : basis_(std::move(basis)), t_axis_(t_axis) {
  const int n = static_cast<int>(basis_.rows());
  const int k = static_cast<int>(basis_.cols());
  if (n < 1) throw std::invalid_argument("plane ambient dimension must be at least 1");
  check_orthonormal(basis_);
  if (!basis_.allFinite()) throw std::invalid_argument("plane basis must be finite");
  if (t_axis_) {
    if (k > n - 1) throw std::invalid_argument("vertical plane dimension must satisfy 2 <= m <= n+1");
  } else if (k < 1 || k > n) {
    throw std::invalid_argument("horizontal plane dimension must satisfy 1 <= m <= n");
  }
  projector_ = basis_ * basis_.transpose();
  if (k == 0) projector_ = Eigen::MatrixXd::Zero(n, n);
}

HomPlane HomPlane::horizontal(Eigen::MatrixXd basis) { return {std::move(basis), false}; }
HomPlane HomPlane::vertical(Eigen::MatrixXd basis) { return {std::move(basis), true}; }
HomPlane HomPlane::vertical(int n) { return {Eigen::MatrixXd(n, 0), true}; }

HomPlane HomPlane::from_span(const Eigen::MatrixXd& columns, bool includes_t_axis) {
  const auto n = columns.rows();
  const auto k = columns.cols();
  if (k == 0) return {Eigen::MatrixXd(n, 0), includes_t_axis};
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> rank_check(columns);
  rank_check.setThreshold(1e-12);
  if (rank_check.rank() < k) throw std::invalid_argument("spanning columns are linearly dependent");
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(columns);
  Eigen::MatrixXd q = qr.householderQ() * Eigen::MatrixXd::Identity(n, k);
  // Re-orthonormalize once more to push the Gram error well below the 1e-10 check.
  Eigen::HouseholderQR<Eigen::MatrixXd> qr2(q);
  q = qr2.householderQ() * Eigen::MatrixXd::Identity(n, k);
  return {std::move(q), includes_t_axis};
}

HomPlane HomPlane::coordinate(int n, const std::vector<int>& axes, bool includes_t_axis) {
  Eigen::MatrixXd b = Eigen::MatrixXd::Zero(n, static_cast<Eigen::Index>(axes.size()));
  for (std::size_t j = 0; j < axes.size(); ++j) {
    if (axes[j] < 0 || axes[j] >= n) throw std::invalid_argument("coordinate axis out of range");
    b(axes[j], static_cast<Eigen::Index>(j)) = 1.0;
  }
  return {std::move(b), includes_t_axis};
}

bool HomPlane::same_as(const HomPlane& other, double tol) const {
  return n() == other.n() && t_axis_ == other.t_axis_ && k() == other.k() &&
         (projector_ - other.projector_).cwiseAbs().maxCoeff() <= tol;
}

Point project(const HomPlane& plane, const Point& p, Part part) {
  if (p.n() != plane.n()) throw std::invalid_argument("dimension mismatch between point and plane");
  Point onto{plane.projector() * p.x, plane.includes_t_axis() ? p.t : 0.0};
  if (part == Part::onto) return onto;
  return {p.x - onto.x, p.t - onto.t};
}

double distance_to_plane(const Point& p, const HomPlane& plane) {
  return norm(project(plane, p, Part::complement));
}

double row_distance_to_plane(std::span<const double> q, std::span<const double> base,
                             const HomPlane& plane) {
  const auto n = static_cast<Eigen::Index>(plane.n());
  Eigen::VectorXd d(n);
  for (Eigen::Index i = 0; i < n; ++i) d[i] = q[static_cast<std::size_t>(i)] - base[static_cast<std::size_t>(i)];
  const double dt = q[static_cast<std::size_t>(n)] - base[static_cast<std::size_t>(n)];
  const Eigen::VectorXd c = d - plane.projector() * d;
  return std::sqrt(c.squaredNorm() + (plane.includes_t_axis() ? 0.0 : std::abs(dt)));
}

double plane_distance(const HomPlane& a, const HomPlane& b) {
  if (a.n() != b.n()) throw std::invalid_argument("planes live in different ambient spaces");
  const Eigen::MatrixXd diff = a.projector() - b.projector();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(diff, Eigen::EigenvaluesOnly);
  const double op = es.eigenvalues().cwiseAbs().maxCoeff();
  if (a.includes_t_axis() != b.includes_t_axis()) return std::max(op, 1.0);
  return op;
}

HomPlane complement_plane(const HomPlane& plane) {
  return plane.includes_t_axis() ? HomPlane::horizontal(orthogonal_complement(plane.basis()))
                                 : HomPlane::vertical(orthogonal_complement(plane.basis()));
}

double unit_ball_slice_diameter(const HomPlane& plane) {
  return plane.k() >= 1 ? 2.0 : std::sqrt(2.0);
}

std::vector<HomPlane> sample_planes(int n, int m, int count, std::uint64_t seed) {
  if (n < 1) throw std::invalid_argument("ambient dimension must be at least 1");
  if (m < 1 || m > n + 1) throw std::invalid_argument("plane dimension must satisfy 0 < m < n+2");
  if (count < 1) throw std::invalid_argument("plane count must be positive");
  const bool has_h = m <= n;
  const bool has_v = m >= 2;

  std::vector<HomPlane> out;
  auto add_unique = [&out](HomPlane p) {
    for (const auto& q : out) {
      if (q.same_as(p, 1e-9)) return;
    }
    out.push_back(std::move(p));
  };

  std::vector<std::vector<int>> combos;
  std::vector<int> cur;
  if (has_h) {
    combinations(n, m, 0, cur, combos);
    for (const auto& c : combos) add_unique(HomPlane::coordinate(n, c, false));
  }
  if (has_v) {
    combos.clear();
    combinations(n, m - 2, 0, cur, combos);
    for (const auto& c : combos) add_unique(HomPlane::coordinate(n, c, true));
  }

  std::mt19937_64 rng(seed);
  const int attempts = 20 * count + 20;
  bool next_vertical = !has_h;
  for (int a = 0; a < attempts && static_cast<int>(out.size()) < count; ++a) {
    const bool vertical = has_h && has_v ? next_vertical : has_v;
    next_vertical = !next_vertical;
    const int k = vertical ? m - 2 : m;
    if (k == 0) {
      add_unique(HomPlane::vertical(n));
      continue;
    }
    Eigen::MatrixXd g(n, k);
    for (Eigen::Index c = 0; c < g.cols(); ++c)
      for (Eigen::Index r = 0; r < g.rows(); ++r) g(r, c) = gaussian(rng);
    try {
      add_unique(HomPlane::from_span(g, vertical));
    } catch (const std::invalid_argument&) {
      // degenerate draw; try again
    }
  }
  return out;
}

Cone::Cone(Point vertex_, HomPlane plane_, double aperture_)
    : vertex(std::move(vertex_)), plane(std::move(plane_)), aperture(aperture_) {
  if (!(aperture > 0.0 && aperture < 1.0)) throw std::invalid_argument("cone aperture must lie in (0,1)");
  if (vertex.n() != plane.n()) throw std::invalid_argument("cone vertex and plane dimensions differ");
}

ConeSide cone_membership(const Cone& cone, const Point& q) {
  const Point d = q - cone.vertex;
  const double full = norm(d);
  if (full == 0.0) return ConeSide::boundary;
  const double lhs = distance_to_plane(d, cone.plane);
  const double rhs = cone.aperture * full;
  if (lhs < rhs - kConeBand) return ConeSide::inside;
  if (lhs > rhs + kConeBand) return ConeSide::outside;
  return ConeSide::boundary;
}

}  // namespace parabgmt
