#pragma once

#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include "parabgmt/geometry.hpp"
#include "parabgmt/measure.hpp"

namespace parabgmt {

/// c0 * sum_{k=1}^{K} 2^{-k/2} cos(2^k t).
double weierstrass_eval(double c0, int K, double t);
/// Bound on the discarded tail: c0 2^{-(K-1)/2} (2 + sqrt 2).
double weierstrass_truncation_bound(double c0, int K);

inline constexpr int kDefaultWeierstrassTerms = 30;

/// Samples f on the grid t_i = i * dt, i = 0..round(1/dt).
std::vector<double> weierstrass_samples(double c0, int K, double dt);

struct WeierstrassSpec {
  int n = 1;
  double c0 = 0.05;
  int terms = kDefaultWeierstrassTerms;
  double dt = 1e-3;  // t-step; the y-step is sqrt(dt)
};

/// {(f(t), y, t) : y in [0,1]^{n-1}, t in [0,1]} with weights dt * dy^{n-1}.
DiscreteMeasure gen_weierstrass_graph(const WeierstrassSpec& spec);

/// min over subintervals I (at least min_steps grid steps long) of osc_I f / sqrt(d(I)), lengths
/// sampled geometrically with ratio 1.1.
double measure_oscillation_constant(const std::vector<double>& f, double dt, std::size_t min_steps = 10);
/// max |f(t) - f(t')| / sqrt|t - t'| over pairs at lag <= max_lag steps and dyadic lags beyond.
double measure_holder_constant(const std::vector<double>& f, double dt, std::size_t max_lag = 64);

class NotFound : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct EqualPair {
  std::size_t a = 0;  // grid indices, a < b
  std::size_t b = 0;
  double mismatch = 0.0;
  double tolerance = 0.0;
};

/// Widest grid pair in [lo, hi] with |f(a) - f(b)| <= 2 * max local step; fails with NotFound
/// unless b - a >= ctilde * (hi - lo).
EqualPair find_equal_pair(const std::vector<double>& f, std::size_t lo, std::size_t hi, double ctilde);

struct LevelInterval {
  std::size_t lo = 0;  // grid indices, inclusive
  std::size_t hi = 0;
  std::size_t parent = 0;  // index into the previous level
};

struct DefeaterSpec {
  int n = 1;
  double c0 = 0.15;
  int terms = kDefaultWeierstrassTerms;
  double dt = 1e-6;
  int depth = 6;
  std::vector<double> L;   // L_0 = 1, L_1, ..., L_depth; empty: 1/sqrt(k+1)
  std::vector<double> c;   // c_1..c_depth; empty: c (1/2 + 2^{-k-1}) from the measured c
  std::vector<int> parts;  // N_0..N_{depth-1}; empty: 4 per level
  std::size_t min_piece = 8;  // smallest grid piece searched for an equal pair
};

struct DefeaterResult {
  DiscreteMeasure measure;
  std::vector<std::vector<LevelInterval>> levels;  // levels[k-1]: the level-k intervals
  std::vector<double> f0;                          // samples of f_0
  std::vector<std::vector<double>> f;              // f[k]: samples of f_k, k = 0..depth
  std::vector<char> in_final;                      // grid mask of A_depth
  std::vector<double> L;
  std::vector<double> c_levels;
  double dt = 0.0;
  double oscillation_constant = 0.0;  // measured c for f_0
  double ctilde = 0.0;                // c^4 / 128
  double holder_constant = 0.0;       // measured for f_0
};

DefeaterResult gen_regular_defeater(const DefeaterSpec& spec);

/// Cumulative sums of the grid quadrature of |f(t)-f(u)|^2 / |t-u|^2 over u in the mask, by dyadic
/// annuli 2^j dt <= |u - t| < 2^{j+1} dt around the grid point t; u = t is excluded.
std::vector<double> bmo_energy(const std::vector<double>& f, const std::vector<char>& mask, double dt,
                               std::size_t t_index);

struct CantorSegmentsSpec {
  std::vector<int> n_seq;  // strictly increasing; empty: n_j = j + 1
  int depth = 5;
  int samples = 0;  // per segment; 0: chosen from max_atoms
  std::size_t max_atoms = 100000;
};

struct CantorSegment {
  double x0 = 0.0;  // left end of I_{k,i}
  double t0 = 0.0;  // t at the left end
  double r = 0.0;   // length and slope
};

/// Level-k segments J_{k,i}, k = 1..depth.
std::vector<std::vector<CantorSegment>> cantor_segment_levels(const std::vector<int>& n_seq, int depth);
std::vector<int> default_cantor_sequence(int depth);
DiscreteMeasure gen_cantor_segments(const CantorSegmentsSpec& spec);

struct Rect {
  double x0, x1, t0, t1;
};

struct VerticalCantorSpec {
  std::vector<int> n_seq;  // even, strictly increasing; empty: n_k = 2k + 2
  int depth = 5;
  double dt = 0.0;  // 0: chosen from max_atoms
  std::size_t max_atoms = 100000;
};

/// Level-k rectangles R_{k,i}, k = 1..depth.
std::vector<std::vector<Rect>> vertical_cantor_levels(const std::vector<int>& n_seq, int depth);
std::vector<int> default_vertical_sequence(int depth);
/// Columns at the x-centers of the level-depth rectangles, t-step dt, weight dt per atom.
DiscreteMeasure gen_vertical_cantor(const VerticalCantorSpec& spec);

struct QuarticCantorSpec {
  std::vector<double> gaps;  // r'_0, r'_1, ...; empty: 4^{-(k+1)}
  int depth = 12;
};

struct QuarticLevel {
  std::vector<std::pair<double, double>> source;  // I'_{k,i}
  std::vector<std::pair<double, double>> image;   // I_{k,i}
};

/// Source intervals I'_{k,i} and image intervals I_{k,i}, k = 0..depth. Image gaps are r'_k^4; image
/// lengths follow bottom-up from d(I_depth) = d(I'_depth)^4.
std::vector<QuarticLevel> quartic_cantor_levels(const std::vector<double>& gaps, int depth);
std::vector<double> default_quartic_gaps(int depth);

struct QuarticCantorResult {
  DiscreteMeasure measure;  // one atom (x, f(x)) at the center of each level-depth interval
  std::vector<QuarticLevel> levels;
  std::vector<double> x;
  std::vector<double> fx;
  std::vector<std::size_t> piece;  // level-depth interval of each sample
};

QuarticCantorResult gen_quartic_cantor(const QuarticCantorSpec& spec);

/// Calibrated uniform lattice on V cap B(0, extent).
DiscreteMeasure gen_flat(const HomPlane& plane, double extent, double resolution);

struct GraphDomain {
  Eigen::VectorXd lo;  // in the plane's horizontal basis coordinates
  Eigen::VectorXd hi;
  double t_lo = 0.0;  // used for vertical planes
  double t_hi = 0.0;
};

using GraphFunction = std::function<Point(const Point&)>;

/// {p + g(p) : p on a lattice of the domain in V}; weights from the flat density where it is known.
DiscreteMeasure gen_graph(const GraphFunction& g, const HomPlane& plane, const GraphDomain& domain, double resolution);

/// Graph samples as a base/value map (no cone check) for differential fits.
GraphMap graph_samples(const GraphFunction& g, const HomPlane& plane, const GraphDomain& domain, double resolution);

}  // namespace parabgmt
