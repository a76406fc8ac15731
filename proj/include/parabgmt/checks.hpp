#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "parabgmt/geometry.hpp"
#include "parabgmt/measure.hpp"

namespace parabgmt {

/// Outcome of one named property check.
struct CheckResult {
  std::string suite;
  std::string name;
  std::size_t cases = 0;
  std::size_t failures = 0;
  std::vector<std::string> violations;  // first few, human readable
  std::string detail;                   // summary statistic

  [[nodiscard]] bool passed() const { return failures == 0; }
};

struct SuiteConfig {
  std::size_t cases = 10000;  // random cases for the exact-algebra checks
  std::uint64_t seed = 1;
};

/// geometry, measure, rectify, generators.
const std::vector<std::string>& suite_names();

/// Runs one suite, or every suite for "all". Throws std::invalid_argument for unknown names.
std::vector<CheckResult> run_suite(const std::string& suite, const SuiteConfig& cfg);

// Exact-algebra checks.
CheckResult check_homogeneity(const SuiteConfig& cfg);
CheckResult check_norm_split(const SuiteConfig& cfg);
CheckResult check_cone_complement(const SuiteConfig& cfg);
CheckResult check_projection_lipschitz(const SuiteConfig& cfg);
CheckResult check_translation_invariance(const SuiteConfig& cfg);
CheckResult check_graph_round_trip(const SuiteConfig& cfg);

/// Random plane of the given family and horizontal rank in R^n x R.
HomPlane random_plane(std::mt19937_64& rng, int n, bool vertical, int k);
/// Random plane of any admissible family and rank.
HomPlane random_plane(std::mt19937_64& rng, int n);
Point random_point(std::mt19937_64& rng, int n, double scale = 1.0);

/// `count` seeded points p + g(p), p in V, where g : V -> V-perp is L-Lipschitz in the parabolic
/// metric (sine waves in the horizontal coordinates, a square-root profile in t).
std::vector<Point> lipschitz_graph_points(const HomPlane& plane, double L, std::size_t count, std::uint64_t seed);

}  // namespace parabgmt
