#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "nrange/pairs.hpp"

namespace nrange {

enum class Certification { WitnessedUpper, Heuristic };
const char* to_string(Certification c);

struct ModulusSample {
  double eps = 0.0;
  double delta = 0.0;
  Certification cert = Certification::Heuristic;
};

struct ModulusCurve {
  std::vector<ModulusSample> samples;
  std::string context;
  /// delta nondecreasing in eps up to `slack`, all values in [0, 2].
  [[nodiscard]] bool well_formed(double slack = 1e-6) const;
};

/// 0.05, 0.1, 0.2, 0.3, 0.5, 1.0.
std::vector<double> default_eps_grid();

struct ModulusOptions {
  /// Number of adversarial candidate directions.
  int budget = 24;
  std::uint64_t seed = 1;
  /// Per-call budget of the inner repair search.
  int repair_budget = 120;
};

struct BpbModulusResult {
  /// 1 - y0(Jx0) for the best adversarial (x0, y0) whose repair distance is
  /// still >= eps; 2 when no such input was found.
  double delta_upper = 2.0;
  Vec x0;
  Vec y0;
  double repair_distance = 0.0;
  Certification cert = Certification::Heuristic;
};

/// `extra` adds caller-supplied adversarial inputs (x0, y0) to the search.
BpbModulusResult bpb_modulus(const SubspacePair& pair, double eps, const ModulusOptions& opt = {},
                             const std::vector<AttainingPair>& extra = {});

struct SsdResult {
  double zeta_upper = 2.0;
  Vec witness;
  double distance = 0.0;
  Certification cert = Certification::WitnessedUpper;
};

/// 1 - sup{y*(u) : y* in B_{Y*}, dist(y*, D(Y,u)) >= eps} over witnesses.
SsdResult ssd_modulus(const Norm& Y, const Vec& u, double eps, const ModulusOptions& opt = {});

struct ConvexityResult {
  double delta = 1.0;
  Vec f;
  Vec g;
};

/// inf{1 - ||(f+g)/2|| : ||f|| = ||g|| = 1, ||f - g|| >= eps}, witnessed.
ConvexityResult modulus_of_convexity(const Norm& N, double eps, const ModulusOptions& opt = {});

struct SmoothnessPoint {
  double t = 0.0;
  double worst_defect = 0.0;
  Vec u;
  Vec y;
};

/// max over sampled u in S, y in B of (||u + t y|| - 1)/t - tau(u,y).lower.
std::vector<SmoothnessPoint> uniform_smoothness_profile(const Norm& N, const std::vector<double>& t_grid,
                                                        const ModulusOptions& opt = {});

}  // namespace nrange
