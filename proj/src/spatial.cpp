#include "parabgmt/spatial.hpp"

#include <stdexcept>

namespace parabgmt {

GridIndex::GridIndex(int n, double cell, Metric metric)
    : n_(n), cell_(cell), cell_t_(metric == Metric::parabolic ? cell * cell : cell), metric_(metric) {
  if (!(cell > 0.0) || !std::isfinite(cell)) throw std::invalid_argument("grid cell size must be positive");
}

GridIndex::GridIndex(const PointCloud& cloud, double cell, Metric metric) : GridIndex(cloud.n(), cell, metric) {
  coords_.reserve(cloud.raw().size());
  ids_.reserve(cloud.size());
  for (std::size_t i = 0; i < cloud.size(); ++i) insert(cloud[i], static_cast<std::uint32_t>(i));
}

GridIndex::Key GridIndex::hash_coords(std::span<const std::int64_t> c) {
  std::uint64_t h = 0x9e3779b97f4a7c15ULL;
  for (const std::int64_t v : c) {
    std::uint64_t z = static_cast<std::uint64_t>(v) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    h ^= z ^ (z >> 31);
  }
  return h;
}

void GridIndex::insert(std::span<const double> row, std::uint32_t id) {
  const std::size_t dims = static_cast<std::size_t>(n_) + 1;
  if (row.size() != dims) throw std::invalid_argument("row length mismatch in grid index");
  std::vector<std::int64_t> c(dims);
  for (std::size_t a = 0; a < dims; ++a) c[a] = cell_coord(row[a], a);
  const auto slot = static_cast<std::uint32_t>(ids_.size());
  coords_.insert(coords_.end(), row.begin(), row.end());
  ids_.push_back(id);
  buckets_[hash_coords(c)].push_back(slot);
}

bool GridIndex::any_within(std::span<const double> q, double r) const {
  return !visit(q, r, [](std::uint32_t, double) { return false; });
}

}  // namespace parabgmt
