#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "nrange/norm.hpp"

namespace nrange {

enum class StateKind { Singleton, Polyhedral, Generic };

const char* to_string(StateKind k);

struct StateOptions {
  /// A MaxOf term / l_inf coordinate counts as active within this of the max;
  /// l_1 coordinates below it (relative) count as zero.
  double active_tol = 1e-9;
  /// Cap on enumerated generators; past it the set degrades to Generic.
  int max_generators = 4096;
  int generic_samples = 16;
  double eta = 1e-6;
  std::uint64_t seed = 0x57a7e5;
};

/// D(Y,u) = {f : ||f||* = 1 = f(u)}, held as a generating set whose convex
/// hull is the face (Singleton / Polyhedral) or as seeded samples of support
/// functionals at nearby points u + eta w (Generic).
struct StateSet {
  Vec base_point;
  StateKind kind = StateKind::Singleton;
  std::vector<Vec> generators;
  StateOptions options;

  /// One state; lowest-index generator, so ties resolve to the lowest
  /// active term / coordinate.
  [[nodiscard]] const Vec& support() const { return generators.front(); }
  /// Exact vertices for enumerated kinds; `count` fresh samples otherwise.
  [[nodiscard]] std::vector<Vec> extreme_points(const Norm& space, int count) const;
  /// f(u) >= 1 - tol and the dual-norm upper bound of f is <= 1 + tol.
  [[nodiscard]] bool contains(const Norm& space, const Vec& f, double tol) const;
};

/// Generating set of the subdifferential of `norm` at v (any v, including
/// points of the kernel where it is the whole dual ball). nullopt when the
/// set is not finitely generated or exceeds the cap.
std::optional<std::vector<Vec>> face_generators(const Norm& norm, const Vec& v, const StateOptions& opt = {});

/// Throws std::invalid_argument unless ||u|| = 1 within 1e-9.
StateSet state_set(const Norm& space, const Vec& u, const StateOptions& opt = {});
Vec support_functional(const Norm& space, const Vec& u, const StateOptions& opt = {});

struct QuotientSample {
  double alpha = 0.0;
  double quotient = 0.0;
  /// Rounding allowance on the quotient at this alpha.
  double allowance = 0.0;
};

/// (||u + a y|| - ||u||)/a for a = 1, 1/2, ..., 2^-max_halvings; stops early
/// once successive quotients differ by less than `stop`.
std::vector<QuotientSample> difference_quotients(const Norm& space, const Vec& u, const Vec& y,
                                                 int max_halvings = 30, double stop = 1e-11);

/// Largest increase of the quotient as alpha decreases, beyond the combined
/// rounding allowances (0 for a convex function evaluated exactly).
double monotone_quotient_violation(const std::vector<QuotientSample>& samples);

struct TauOptions {
  int max_halvings = 30;
  double stop = 1e-11;
  StateOptions states{};
};

struct TauBracket {
  double lower = 0.0;
  double upper = 0.0;
  Vec witness;
  StateKind kind = StateKind::Singleton;
  int quotients = 0;
  [[nodiscard]] double width() const { return upper - lower; }
};

/// tau(u,y) = lim (||u + a y|| - 1)/a = max{f(y) : f in D(Y,u)}.
TauBracket tau(const Norm& space, const Vec& u, const Vec& y, const TauOptions& opt = {});

struct Attained {
  Vec x;
  bool exact = false;
};

/// A point x of the unit sphere with g(x) = ||g||*, closest to `hint` among
/// the maximizers where that choice is available in closed form.
Attained attain(const Norm& space, const Vec& g, const Vec& hint);

}  // namespace nrange
