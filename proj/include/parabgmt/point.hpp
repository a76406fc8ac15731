#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

namespace parabgmt {

enum class Metric { parabolic, euclidean };

/// A point (x, t) of the parabolic space with spatial part x in R^n.
struct Point {
  Eigen::VectorXd x;
  double t = 0.0;

  Point() = default;
  Point(Eigen::VectorXd x_, double t_) : x(std::move(x_)), t(t_) {}

  [[nodiscard]] int n() const { return static_cast<int>(x.size()); }
  [[nodiscard]] bool finite() const { return x.allFinite() && std::isfinite(t); }

  static Point zero(int n) { return {Eigen::VectorXd::Zero(n), 0.0}; }
  /// Build from a packed coordinate row (x_1..x_n, t).
  static Point from_row(std::span<const double> row);
  void write_row(std::span<double> row) const;

  Point& operator+=(const Point& o);
  Point& operator-=(const Point& o);
};

Point operator+(Point a, const Point& b);
Point operator-(Point a, const Point& b);
bool operator==(const Point& a, const Point& b);

void require_same_dim(const Point& a, const Point& b);

/// Parabolic norm sqrt(|x|^2 + |t|) or the Euclidean norm of R^{n+1}.
double norm(const Point& p, Metric metric = Metric::parabolic);
double metric_eval(const Point& p, const Point& q, Metric metric = Metric::parabolic);

/// Dilation (x, t) -> (r x, r^2 t).
Point dilate(double r, const Point& p);
/// Blow-up map p -> dilate(1/r, p - a); sends B(a, r) onto B(0, 1).
Point blowup_map(const Point& a, double r, const Point& p);

/// Distance on packed rows of length n+1.
double row_distance(std::span<const double> a, std::span<const double> b, Metric metric);

/// Packed, contiguous storage of points in R^n x R (row length n+1, t last).
class PointCloud {
 public:
  explicit PointCloud(int n = 1);

  [[nodiscard]] int n() const { return n_; }
  [[nodiscard]] std::size_t stride() const { return static_cast<std::size_t>(n_) + 1; }
  [[nodiscard]] std::size_t size() const { return data_.size() / stride(); }
  [[nodiscard]] bool empty() const { return data_.empty(); }

  [[nodiscard]] std::span<const double> operator[](std::size_t i) const {
    return {data_.data() + i * stride(), stride()};
  }
  [[nodiscard]] std::span<double> row(std::size_t i) { return {data_.data() + i * stride(), stride()}; }
  [[nodiscard]] Point point(std::size_t i) const { return Point::from_row((*this)[i]); }
  [[nodiscard]] double t(std::size_t i) const { return data_[i * stride() + static_cast<std::size_t>(n_)]; }

  void reserve(std::size_t count) { data_.reserve(count * stride()); }
  void push_back(const Point& p);
  void push_back(std::span<const double> row);
  [[nodiscard]] const std::vector<double>& raw() const { return data_; }

  static PointCloud from_points(const std::vector<Point>& pts);
  [[nodiscard]] std::vector<Point> to_points() const;

 private:
  int n_;
  std::vector<double> data_;
};

/// Lexicographic comparison of packed rows (x_1, ..., x_n, t).
bool row_less(std::span<const double> a, std::span<const double> b);

/// Indices of the cloud in canonical lexicographic order.
std::vector<std::size_t> canonical_order(const PointCloud& cloud);

/// Neumaier compensated accumulator; results depend only on the order of add() calls.
class CompensatedSum {
 public:
  void add(double v) {
    const double t = sum_ + v;
    if (std::abs(sum_) >= std::abs(v)) {
      comp_ += (sum_ - t) + v;
    } else {
      comp_ += (v - t) + sum_;
    }
    sum_ = t;
  }
  [[nodiscard]] double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

}  // namespace parabgmt
