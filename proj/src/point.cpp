#include "parabgmt/point.hpp"

#include <algorithm>
#include <numeric>

namespace parabgmt {

Point Point::from_row(std::span<const double> row) {
  const auto n = static_cast<Eigen::Index>(row.size()) - 1;
  Point p;
  p.x = Eigen::Map<const Eigen::VectorXd>(row.data(), n);
  p.t = row[static_cast<std::size_t>(n)];
  return p;
}

void Point::write_row(std::span<double> row) const {
  for (Eigen::Index i = 0; i < x.size(); ++i) row[static_cast<std::size_t>(i)] = x[i];
  row[static_cast<std::size_t>(x.size())] = t;
}

Point& Point::operator+=(const Point& o) {
  require_same_dim(*this, o);
  x += o.x;
  t += o.t;
  return *this;
}

Point& Point::operator-=(const Point& o) {
  require_same_dim(*this, o);
  x -= o.x;
  t -= o.t;
  return *this;
}

Point operator+(Point a, const Point& b) { return a += b; }
Point operator-(Point a, const Point& b) { return a -= b; }

bool operator==(const Point& a, const Point& b) {
  return a.x.size() == b.x.size() && a.t == b.t && (a.x.array() == b.x.array()).all();
}

void require_same_dim(const Point& a, const Point& b) {
  if (a.x.size() != b.x.size()) {
    throw std::invalid_argument("dimension mismatch: " + std::to_string(a.x.size()) + " vs " +
                                std::to_string(b.x.size()));
  }
}

double norm(const Point& p, Metric metric) {
  if (metric == Metric::parabolic) return std::sqrt(p.x.squaredNorm() + std::abs(p.t));
  return std::sqrt(p.x.squaredNorm() + p.t * p.t);
}

double metric_eval(const Point& p, const Point& q, Metric metric) {
  require_same_dim(p, q);
  return norm(p - q, metric);
}

Point dilate(double r, const Point& p) {
  if (!(r > 0.0)) throw std::invalid_argument("dilation factor must be positive");
  return {r * p.x, r * r * p.t};
}

Point blowup_map(const Point& a, double r, const Point& p) {
  if (!(r > 0.0)) throw std::invalid_argument("blow-up radius must be positive");
  return dilate(1.0 / r, p - a);
}

double row_distance(std::span<const double> a, std::span<const double> b, Metric metric) {
  const std::size_t n = a.size() - 1;
  double sq = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double d = a[i] - b[i];
    sq += d * d;
  }
  const double dt = a[n] - b[n];
  return std::sqrt(sq + (metric == Metric::parabolic ? std::abs(dt) : dt * dt));
}

PointCloud::PointCloud(int n) : n_(n) {
  if (n < 1) throw std::invalid_argument("ambient dimension must be at least 1");
}

void PointCloud::push_back(const Point& p) {
  if (p.n() != n_) throw std::invalid_argument("dimension mismatch in point cloud");
  const std::size_t off = data_.size();
  data_.resize(off + stride());
  p.write_row({data_.data() + off, stride()});
}

void PointCloud::push_back(std::span<const double> row) {
  if (row.size() != stride()) throw std::invalid_argument("row length mismatch in point cloud");
  data_.insert(data_.end(), row.begin(), row.end());
}

PointCloud PointCloud::from_points(const std::vector<Point>& pts) {
  if (pts.empty()) throw std::invalid_argument("cannot infer dimension of an empty point list");
  PointCloud cloud(pts.front().n());
  cloud.reserve(pts.size());
  for (const auto& p : pts) cloud.push_back(p);
  return cloud;
}

std::vector<Point> PointCloud::to_points() const {
  std::vector<Point> out;
  out.reserve(size());
  for (std::size_t i = 0; i < size(); ++i) out.push_back(point(i));
  return out;
}

bool row_less(std::span<const double> a, std::span<const double> b) {
  return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
}

std::vector<std::size_t> canonical_order(const PointCloud& cloud) {
  std::vector<std::size_t> order(cloud.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t i, std::size_t j) { return row_less(cloud[i], cloud[j]); });
  return order;
}

}  // namespace parabgmt
