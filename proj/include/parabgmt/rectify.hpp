#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "parabgmt/geometry.hpp"
#include "parabgmt/measure.hpp"

namespace parabgmt {

/// r^{-m} times the mass of atoms in B(a, r) \ X(a, V, s), the atom at a excluded.
double cone_defect(const DiscreteMeasure& mu, const Point& a, const HomPlane& plane, double s, double r, double m);

enum class TangentClass { horizontal, vertical, none };

const char* to_string(TangentClass c);

struct DefectSample {
  double r = 0.0;
  double s = 0.0;
  double defect = 0.0;
};

struct TangentConfig {
  int m = 1;  // dimension of the planes searched
  std::vector<double> s_list{0.5, 0.25, 0.1};
  std::vector<double> r_list;  // empty: resolution * {8, 4, 2}
  int plane_budget = 32;
  double threshold = 0.05;
  std::uint64_t seed = 1;
  std::size_t sample_points = 200;
  double resolution = 0.0;  // 0: declared by the measure, else estimated
};

/// Fills r_list from the resolution when empty and validates the grid.
TangentConfig resolve_config(const DiscreteMeasure& mu, TangentConfig cfg);

struct TangentResult {
  std::optional<HomPlane> best_plane;  // set when the minimal defect is within the threshold
  std::optional<HomPlane> argmin_plane;
  std::size_t plane_index = 0;
  double min_defect = 0.0;
  std::vector<DefectSample> curve;  // for the argmin plane; empty when every ball is empty
  TangentClass cls = TangentClass::none;
};

/// Max over the (s, r) grid of the cone defect, minimized over sample_planes (ties: lowest index).
TangentResult detect_tangent(const DiscreteMeasure& mu, const Point& a, const TangentConfig& cfg);

struct PointVerdict {
  std::size_t atom = 0;
  Point a;
  TangentResult result;
};

struct TangentReport {
  TangentConfig config;  // effective configuration
  std::vector<PointVerdict> points;
  double horizontal_fraction = 0.0;
  double vertical_fraction = 0.0;
  double none_fraction = 0.0;
};

/// detect_tangent at a seeded subsample of atoms.
TangentReport classify_points(const DiscreteMeasure& mu, const TangentConfig& cfg);

/// Atom indices of a seeded subsample without replacement, in increasing order.
std::vector<std::size_t> seeded_subsample(std::size_t count, std::size_t wanted, std::uint64_t seed);

enum class Normalization { mass, power };

/// Push-forward under T_{a,r} restricted to B(0,1), weights scaled by 1/mu(B(a,r)) or r^{-m}.
DiscreteMeasure blowup_measure(const DiscreteMeasure& mu, const Point& a, double r, Normalization norm,
                               double m = 1.0);

struct FlatnessConfig {
  int m = 1;
  int plane_budget = 32;
  double tube = 0.05;
  double cell = 0.125;  // parabolic grid cell on V cap B(0,1): side `cell`, t-side cell^2
  std::uint64_t seed = 1;
};

struct FlatnessResult {
  HomPlane plane;
  std::size_t plane_index = 0;
  double defect = 0.0;  // min(1, outside_mass + empty_cells)
  double outside_mass = 0.0;
  double empty_cells = 0.0;
};

FlatnessResult flatness_defect(const DiscreteMeasure& nu, const FlatnessConfig& cfg);

struct UniquenessScan {
  std::vector<double> scales;
  std::vector<FlatnessResult> per_scale;
  double spread = 0.0;       // max pairwise plane distance of the per-scale best planes
  double max_defect = 0.0;
};

UniquenessScan tangent_uniqueness_scan(const DiscreteMeasure& mu, const Point& a, std::vector<double> scales,
                                       const FlatnessConfig& cfg);

struct DifferentialConfig {
  std::vector<double> scales;  // decreasing radii in the base plane
  double threshold = 0.05;
};

struct DifferentialFit {
  Point base;
  std::size_t index = 0;
  Eigen::MatrixXd lambda;  // n x k: horizontal coordinates of V into V-perp cap H
  std::vector<std::pair<double, double>> residual_curve;  // (scale, max normalized residual)
  std::vector<std::size_t> neighbours;  // per scale
  bool rank_deficient = false;
  std::optional<bool> differentiable;  // empty when rank deficient
};

/// resolution * {32, 16, 8}: enough neighbours per scale for a stable fit.
std::vector<double> default_differential_scales(double resolution);

/// Weighted least squares for the differential at base point `index` of the graph.
DifferentialFit fit_differential(const GraphMap& graph, std::size_t index, const DifferentialConfig& cfg);

struct LipschitzPiece {
  std::vector<std::size_t> members;
  int radius_class = 0;  // cells of side ~2^{-class}; -1 when unbounded
  Eigen::MatrixXd lambda;  // net point of the differential class
  HomPlane tilted;         // graph of lambda over V
};

struct SplitResult {
  std::vector<LipschitzPiece> pieces;
  double certified_constant = 0.0;  // L (1 - L^2)^{-1/2}
  double aperture = 0.0;            // matching cone aperture
};

class SplitFailure : public std::runtime_error {
 public:
  SplitFailure(const std::string& what, IndexPair witness) : std::runtime_error(what), witness_(witness) {}
  [[nodiscard]] IndexPair witness() const { return witness_; }

 private:
  IndexPair witness_;
};

/// Splits the graph into radius, cell and differential classes and certifies each piece by the
/// cone condition over the graph of its net differential.
SplitResult split_lipschitz(const GraphMap& graph, const std::vector<DifferentialFit>& fits, double L);

/// Horizontal plane spanned by (b_j, lambda b_j)-tilted columns, keeping V's t-axis flag.
HomPlane tilted_plane(const HomPlane& plane, const Eigen::MatrixXd& lambda);

}  // namespace parabgmt
