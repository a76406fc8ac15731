#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "parabgmt/point.hpp"

namespace parabgmt {

/// Homogeneous plane: an orthonormal horizontal basis in R^n plus a t-axis flag.
/// Horizontal planes lie in {t = 0}; vertical planes contain the t-axis.
class HomPlane {
 public:
  /// basis: n x k matrix with orthonormal columns (checked to 1e-10).
  static HomPlane horizontal(Eigen::MatrixXd basis);
  static HomPlane vertical(Eigen::MatrixXd basis);
  static HomPlane vertical(int n);  // the t-axis itself
  /// Orthonormalizes arbitrary spanning columns (must be linearly independent).
  static HomPlane from_span(const Eigen::MatrixXd& columns, bool includes_t_axis);
  /// Coordinate plane spanned by e_i for i in axes (0-based), optionally with the t-axis.
  static HomPlane coordinate(int n, const std::vector<int>& axes, bool includes_t_axis);

  [[nodiscard]] int n() const { return static_cast<int>(basis_.rows()); }
  [[nodiscard]] int k() const { return static_cast<int>(basis_.cols()); }
  /// Parabolic Hausdorff dimension m = k + 2 [t-axis].
  [[nodiscard]] int dim() const { return k() + (t_axis_ ? 2 : 0); }
  [[nodiscard]] bool includes_t_axis() const { return t_axis_; }
  [[nodiscard]] bool is_vertical() const { return t_axis_; }
  [[nodiscard]] bool is_horizontal() const { return !t_axis_; }
  [[nodiscard]] const Eigen::MatrixXd& basis() const { return basis_; }
  /// Orthogonal projector of R^n onto the horizontal part.
  [[nodiscard]] const Eigen::MatrixXd& projector() const { return projector_; }

  /// Same family and projectors equal to 1e-10.
  [[nodiscard]] bool same_as(const HomPlane& other, double tol = 1e-10) const;

 private:
  HomPlane(Eigen::MatrixXd basis, bool t_axis);
  Eigen::MatrixXd basis_;
  Eigen::MatrixXd projector_;
  bool t_axis_ = false;
};

enum class Part { onto, complement };

/// P_V p, or p - P_V p for the complement.
Point project(const HomPlane& plane, const Point& p, Part part);
/// Parabolic norm of the complement part: d(p, V).
double distance_to_plane(const Point& p, const HomPlane& plane);
/// Same on a packed row, relative to a base row.
double row_distance_to_plane(std::span<const double> q, std::span<const double> base,
                             const HomPlane& plane);

/// Operator norm of the difference of the horizontal projectors; at least 1 across families.
double plane_distance(const HomPlane& a, const HomPlane& b);

/// Horizontal <-> vertical complement with the orthogonal complement as horizontal part.
HomPlane complement_plane(const HomPlane& plane);

/// Diameter of B(0,1) intersected with the plane (2 if it has a horizontal direction, else sqrt 2).
double unit_ball_slice_diameter(const HomPlane& plane);

/// Deterministic sample of P(n, m): canonical coordinate planes first, then seeded random frames.
std::vector<HomPlane> sample_planes(int n, int m, int count, std::uint64_t seed);

/// Cone X(p, V, s) = {q : d(q - p, V) < s ||q - p||}.
struct Cone {
  Point vertex;
  HomPlane plane;
  double aperture;

  Cone(Point vertex_, HomPlane plane_, double aperture_);
};

enum class ConeSide { inside, boundary, outside };

inline constexpr double kConeBand = 1e-9;

ConeSide cone_membership(const Cone& cone, const Point& q);

/// Unordered index pair (i < j); the cone condition is symmetric in p and q.
using IndexPair = std::pair<std::size_t, std::size_t>;

/// All pairs violating q in X(p, V, s). Empty means the points form a cone-conditioned set.
std::vector<IndexPair> graph_cone_check(const std::vector<Point>& points, const HomPlane& plane,
                                        double s);
std::vector<IndexPair> graph_cone_check(const PointCloud& points, const HomPlane& plane, double s);

class GraphRejected : public std::runtime_error {
 public:
  GraphRejected(const std::string& what, IndexPair witness)
      : std::runtime_error(what), witness_(witness) {}
  [[nodiscard]] IndexPair witness() const { return witness_; }

 private:
  IndexPair witness_;
};

/// Finite graph map g = P_{V-perp} o (P_V restricted to the points)^{-1}.
struct GraphMap {
  HomPlane plane;
  std::vector<Point> base;   // P_V p
  std::vector<Point> value;  // P_{V-perp} p
  double lipschitz_bound = 0.0;     // s / sqrt(1 - s^2)
  double empirical_constant = 0.0;  // max ||g(p) - g(q)|| / ||P_V p - P_V q||

  [[nodiscard]] std::vector<Point> reassemble() const;
};

GraphMap graph_extract(const std::vector<Point>& points, const HomPlane& plane, double s);

/// Result of the Euclidean-cone inclusion search.
struct EuclidConeResult {
  bool certified = false;
  double radius = 0.0;
  HomPlane verticalized;          // W = (V cap H) + t-axis
  std::optional<Point> witness;   // violating point when no radius was certified
  std::size_t directions = 0;
};

/// Search r with X_E(0, V, s^2) cap B(0, r) inside X(0, W, s). V: (n+1) x k orthonormal columns
/// of a Euclidean subspace of R^{n+1} (last coordinate is t) not contained in {t = 0}.
EuclidConeResult euclid_cone_radius(const Eigen::MatrixXd& subspace, double s, double tol);

}  // namespace parabgmt
