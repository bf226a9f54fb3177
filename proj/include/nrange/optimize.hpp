#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <utility>
#include <vector>

#include "nrange/norm.hpp"

namespace nrange {

struct StepSchedule {
  double initial = 0.5;
  double decay = 0.8;
  double floor = 1e-7;
};

struct SearchConfig {
  /// Total objective evaluations (every start costs at least one).
  int budget = 2000;
  /// Seeded random starts.
  int starts = 4;
  std::uint64_t seed = 1;
  StepSchedule step{};
  /// Adds +-e_i and +-(1,...,1)/||(1,...,1)|| to the start set.
  bool include_basis_starts = true;
  /// Starts evaluated before the basis and random ones (e.g. witnesses).
  std::vector<Vec> extra_starts;
  /// Number of best-ranked starts that receive local ascent.
  int refine_starts = 8;
};

struct SearchResult {
  double best_value = 0.0;
  Vec best_point;
  int evaluations_used = 0;
  int start_index_of_best = -1;
};

using Objective = std::function<double(const Vec&)>;

/// Multistart derivative-free ascent on the unit sphere of `space`.
///
/// All starts are evaluated once, then the `refine_starts` best (ties by start
/// index) share the remaining budget equally. Each refinement is a compass /
/// random-direction ascent with projection to the sphere after every step and
/// geometric step decay. Deterministic given the config; the returned value is
/// nondecreasing in the budget for a fixed seed and start set.
SearchResult sphere_maximize(const Objective& objective, const Norm& space, const SearchConfig& cfg);

/// (min, max) of a nonempty list. Throws std::invalid_argument when empty.
std::pair<double, double> hull_interval(std::span<const double> points);

}  // namespace nrange
