#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <deque>
#include <span>
#include <unordered_map>
#include <vector>

#include "parabgmt/point.hpp"

namespace parabgmt {

/// Uniform hash grid for ball queries. Cells have side `cell` in each spatial coordinate and
/// `cell^2` (parabolic) or `cell` (Euclidean) in t, so a ball of radius <= cell meets at most
/// 3^{n+1} cells.
class GridIndex {
 public:
  GridIndex(int n, double cell, Metric metric);
  /// Indexes every row of the cloud with its row number as id.
  GridIndex(const PointCloud& cloud, double cell, Metric metric);

  void insert(std::span<const double> row, std::uint32_t id);
  [[nodiscard]] std::size_t size() const { return ids_.size(); }
  [[nodiscard]] Metric metric() const { return metric_; }

  /// Calls fn(id, distance) for every indexed point within distance r of q (inclusive).
  /// Visit order is deterministic: by cell, then by insertion order within a cell.
  template <class Fn>
  void for_each_within(std::span<const double> q, double r, Fn&& fn) const {
    visit(q, r, [&](std::uint32_t slot, double d) {
      fn(ids_[slot], d);
      return true;
    });
  }

  /// True if some indexed point lies within r of q (inclusive).
  [[nodiscard]] bool any_within(std::span<const double> q, double r) const;

  /// True if pred(id) holds for some indexed point within r of q; stops at the first hit.
  template <class Pred>
  [[nodiscard]] bool any_within_if(std::span<const double> q, double r, Pred&& pred) const {
    return !visit(q, r, [&](std::uint32_t slot, double) { return !pred(ids_[slot]); });
  }

 private:
  using Key = std::uint64_t;

  [[nodiscard]] std::int64_t cell_coord(double v, std::size_t axis) const {
    return static_cast<std::int64_t>(std::floor(v / (axis == static_cast<std::size_t>(n_) ? cell_t_ : cell_)));
  }
  static Key hash_coords(std::span<const std::int64_t> c);

  /// fn(slot, dist) returns false to stop early. Returns false if stopped.
  template <class Fn>
  bool visit(std::span<const double> q, double r, Fn&& fn) const;

  int n_;
  double cell_;
  double cell_t_;
  Metric metric_;
  std::vector<double> coords_;
  std::vector<std::uint32_t> ids_;
  std::unordered_map<Key, std::vector<std::uint32_t>> buckets_;
};

template <class Fn>
bool GridIndex::visit(std::span<const double> q, double r, Fn&& fn) const {
  const std::size_t dims = static_cast<std::size_t>(n_) + 1;
  const double rt = metric_ == Metric::parabolic ? r * r : r;
  // Per-thread scratch, one slot per nesting level so callbacks may query again.
  struct Scratch {
    std::vector<std::int64_t> lo, hi, cur;
    std::vector<Key> keys;
  };
  thread_local std::deque<Scratch> pool;
  thread_local std::size_t depth = 0;
  if (pool.size() <= depth) pool.emplace_back();
  auto& [lo, hi, cur, keys] = pool[depth];
  struct Guard {
    std::size_t& d;
    explicit Guard(std::size_t& v) : d(++v) {}
    ~Guard() { --d; }
  } guard(depth);
  lo.resize(dims);
  hi.resize(dims);
  cur.resize(dims);
  keys.clear();
  for (std::size_t a = 0; a < dims; ++a) {
    const double ext = a == static_cast<std::size_t>(n_) ? rt : r;
    lo[a] = cell_coord(q[a] - ext, a);
    hi[a] = cell_coord(q[a] + ext, a);
    cur[a] = lo[a];
  }
  for (;;) {
    keys.push_back(hash_coords(cur));
    std::size_t a = 0;
    while (a < dims) {
      if (cur[a] < hi[a]) {
        ++cur[a];
        break;
      }
      cur[a] = lo[a];
      ++a;
    }
    if (a == dims) break;
  }
  // Colliding cells share a bucket; visiting each key once keeps every point visited once.
  std::sort(keys.begin(), keys.end());
  keys.erase(std::unique(keys.begin(), keys.end()), keys.end());
  for (const Key key : keys) {
    const auto it = buckets_.find(key);
    if (it == buckets_.end()) continue;
    for (const std::uint32_t slot : it->second) {
      const std::span<const double> p{coords_.data() + static_cast<std::size_t>(slot) * dims, dims};
      const double d = row_distance(q, p, metric_);
      if (d <= r && !fn(slot, d)) return false;
    }
  }
  return true;
}

}  // namespace parabgmt
