#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "parabgmt/geometry.hpp"
#include "parabgmt/point.hpp"

namespace parabgmt {

/// Generator tag, seed and free-form measured quantities.
struct Provenance {
  std::string tag;
  std::uint64_t seed = 0;
  std::map<std::string, std::string> notes;
};

/// Weighted point cloud in canonical (lexicographic) order with coincident atoms merged.
class DiscreteMeasure {
 public:
  DiscreteMeasure(PointCloud points, std::vector<double> weights, std::optional<double> nominal_dim = {},
                  Provenance provenance = {});

  [[nodiscard]] int n() const { return points_.n(); }
  [[nodiscard]] std::size_t size() const { return points_.size(); }
  [[nodiscard]] bool empty() const { return points_.empty(); }
  [[nodiscard]] const PointCloud& points() const { return points_; }
  [[nodiscard]] const std::vector<double>& weights() const { return weights_; }
  [[nodiscard]] double total_mass() const;
  [[nodiscard]] const std::optional<double>& nominal_dim() const { return nominal_dim_; }
  [[nodiscard]] const Provenance& provenance() const { return provenance_; }
  [[nodiscard]] Provenance& provenance() { return provenance_; }

  /// Parabolic sampling spacing declared by the producer, if any.
  [[nodiscard]] const std::optional<double>& resolution() const { return resolution_; }
  void set_resolution(double r) { resolution_ = r; }

  /// Sum of weights of atoms in the closed ball B(a, r), compensated, in atom order.
  [[nodiscard]] double mass_in_ball(const Point& a, double r) const;

 private:
  PointCloud points_;
  std::vector<double> weights_;
  std::optional<double> nominal_dim_;
  Provenance provenance_;
  std::optional<double> resolution_;
};

struct CoveringReport {
  Metric metric = Metric::parabolic;
  std::vector<double> scales;  // decreasing
  std::vector<std::size_t> counts;
  std::vector<double> s_values;
  std::vector<std::vector<double>> sums;  // sums[i][j]: s_values[i] at scales[j]
  double fitted_dim = 0.0;                // slope clamped to [0, n+2] or [0, n+1]
  double raw_slope = 0.0;
  double fit_residual = 0.0;  // RMS of the log-log fit; infinity when degenerate
};

struct DensityEstimate {
  Point a;
  double s = 0.0;
  std::vector<double> scales;
  std::vector<double> values;
  double upper = 0.0;
  double lower = 0.0;
};

/// Greedy cover: scan in canonical order, a point becomes a center unless it lies within r of
/// an existing center. Returns center indices into the cloud, in selection order.
std::vector<std::size_t> greedy_cover(const PointCloud& cloud, double r, Metric metric);

/// Geometric radii, finest = 4 * resolution, each coarser by 1/ratio; returned decreasing.
std::vector<double> default_scales(double resolution, int count = 8, double ratio = 0.5);

/// Median nearest-neighbour distance over a deterministic subsample.
double estimate_resolution(const PointCloud& cloud, Metric metric, std::size_t max_samples = 2048);

/// Box-counting slope of log N(r) against log(1/r), plus covering sums N(r)(2r)^s.
CoveringReport dimension_fit(const PointCloud& cloud, std::vector<double> scales, Metric metric,
                             std::vector<double> s_values = {});

/// Rows handed to the callback one at a time, in the order the greedy cover should scan them.
using RowSource = std::function<void(const std::function<void(std::span<const double>)>&)>;

/// Greedy cover count over a streamed cloud of dimension n (the rows are never stored).
std::size_t greedy_cover_count(const RowSource& rows, int n, double r, Metric metric);
CoveringReport dimension_fit(const RowSource& rows, int n, std::vector<double> scales, Metric metric,
                             std::vector<double> s_values = {});

/// N(r) (2r)^s per scale.
std::vector<double> hausdorff_sum(const PointCloud& cloud, double s, std::vector<double> scales, Metric metric);

DensityEstimate density_profile(const DiscreteMeasure& mu, const Point& a, double s, std::vector<double> scales);

enum class PlaneFamily { horizontal, vertical };

/// Canonical plane of the family: span{e_1..e_k}, plus the t-axis for vertical planes.
HomPlane canonical_plane(int n, int m, PlaneFamily family);

/// Lattice on V cap closed B(0, extent): spacing `resolution` along the horizontal basis and
/// resolution^2 along t.
PointCloud flat_lattice(const HomPlane& plane, double extent, double resolution);

struct FlatConstantEstimate {
  int n = 0;
  int m = 0;
  PlaneFamily family = PlaneFamily::horizontal;
  double value = 0.0;  // min over cover families of the r -> 0 intercept
  double band = 0.0;   // standard error of the chosen intercept
  std::string cover;   // "balls" or "boxes"
  std::vector<double> radii;  // finest radii used for the extrapolation, decreasing
  std::vector<double> ball_premeasure;  // packed sum down to each radius
  std::vector<double> box_premeasure;
  std::vector<double> uncovered_fraction;  // lattice fraction outside the packed balls, per radius
  double ball_intercept = 0.0;
  double box_intercept = 0.0;
  std::size_t cloud_size = 0;
  double resolution = 0.0;
};

/// Estimates H^m(V cap B(0,1)) for the canonical plane by two families of covers and keeps the
/// smaller limit: multi-scale disjoint ball packings (packed sum extrapolated linearly to zero
/// uncovered fraction) and isodiametric box tilings (extrapolated linearly to r = 0).
FlatConstantEstimate flat_constant_estimate(int n, int m, PlaneFamily family, std::vector<double> radii = {});

/// Samples of a map from the cube [0, side]^{n+1} into P^n on a lattice with per_side nodes per
/// axis (last axis fastest).
struct GridMap {
  int n = 1;
  double side = 1.0;
  int per_side = 2;
  std::vector<Point> values;
};

GridMap sample_grid_map(const std::function<Point(const Eigen::VectorXd&)>& f, int n, double side, int per_side);

struct LipCoverResult {
  int N = 0;
  double sum = 0.0;
  std::size_t balls = 0;
  double diameter = 0.0;
  double lipschitz_fine = 0.0;
  double lipschitz_coarse = 0.0;
  bool non_lipschitz = false;
};

/// Covers the image of the cube by parabolic balls of diameter sqrt(R r), r = R / N, and returns
/// the sum of d(E)^{n+1} over the covered pieces E (each at most the ball diameter). Flags maps whose difference quotients grow under refinement.
LipCoverResult lip_image_cover_sum(const GridMap& f, int N);

/// Ordinary least squares y = a + b x. Returns {intercept, slope, rms residual, intercept std error}.
struct LineFit {
  double intercept = 0.0;
  double slope = 0.0;
  double rms = 0.0;
  double intercept_se = 0.0;
};
LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace parabgmt
