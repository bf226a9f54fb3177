#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

#include "nrange/gauge.hpp"
#include "nrange/pairs.hpp"

namespace nrange {

/// Thrown when 1 - y0(x0) is not below the required threshold.
class DeficiencyTooLarge : public std::invalid_argument {
 public:
  DeficiencyTooLarge(const std::string& what, double deficiency, double threshold)
      : std::invalid_argument(what), deficiency_(deficiency), threshold_(threshold) {}
  [[nodiscard]] double deficiency() const { return deficiency_; }
  [[nodiscard]] double threshold() const { return threshold_; }

 private:
  double deficiency_;
  double threshold_;
};

struct AbsoluteRepairThreshold {
  /// Invariants of the dual gauge (the gauge of Y* = X* + Z).
  double b0 = 0.0;
  double delta1 = 0.0;
  /// min(delta1, eps^2/36).
  double delta = 0.0;
};

AbsoluteRepairThreshold absolute_repair_threshold(const AbsoluteGauge& g, double eps);

struct AbsoluteRepairResult {
  AttainingPair pair;
  double x_distance = 0.0;
  double y_distance = 0.0;
  AbsoluteRepairThreshold threshold;
  /// 1: ||z0*|| <= b0 (z-part kept), 2: z-part rescaled to length b0.
  int branch = 1;
  double inner_x_distance = 0.0;
  double inner_y_distance = 0.0;
};

/// Repair for X = left summand of Y = X0 (+)_g W, J = [I; 0]. Requires
/// 1 - y0(Jx0) < min(delta1(eps/3), eps^2/36); the X-part is repaired at
/// eps/3 by the classical search, then the Z-part of y0 is kept or shrunk
/// radially to b0.
AbsoluteRepairResult bpb_repair_absolute(const SubspacePair& pair, const Vec& x0, const Vec& y0, double eps,
                                         std::uint64_t seed, int budget = 400);

/// True when the pair has the summand shape the repair needs.
bool is_left_summand_pair(const SubspacePair& pair);

}  // namespace nrange
