#pragma once

#include <cstdint>
#include <functional>
#include <utility>
#include <vector>

#include "nrange/pairs.hpp"

namespace nrange {

/// 1, 2^-1, ..., 2^-30.
std::vector<double> default_alpha_grid();

struct RangeOptions {
  int budget = 1200;
  int starts = 4;
  std::uint64_t seed = 1;
  std::vector<double> alphas = default_alpha_grid();
  /// Closed-form ||J + a T|| (structured families); bypasses the search.
  std::function<double(double)> exact_opnorm;
};

struct SupWResult {
  double value = 0.0;
  Vec witness;
  /// Every state set visited was enumerated exactly.
  bool exact = true;
  int evaluations = 0;
};

/// sup over x in S_X of tau(Jx, Tx), as a witnessed lower bound.
SupWResult sup_re_W(const SubspacePair& pair, const OperatorSpec& op, const RangeOptions& opt = {});

struct QuotientPoint {
  double alpha = 0.0;
  double opnorm = 0.0;
  double quotient = 0.0;
  Vec witness;
};

struct MaxVResult {
  double lower = 0.0;
  double upper = 0.0;
  std::vector<QuotientPoint> trace;
  /// Largest increase of the quotient toward smaller alpha.
  double monotone_violation = 0.0;
  bool structured = false;
  [[nodiscard]] double width() const { return upper - lower; }
};

/// (||J + a T|| - 1)/a down the alpha grid. upper is the smallest quotient,
/// lower the W-side value (co W sits inside V). `supw` seeds the searches
/// and is computed when absent.
MaxVResult max_re_V(const SubspacePair& pair, const OperatorSpec& op, const RangeOptions& opt = {},
                    const SupWResult* supw = nullptr);

/// y*(Tx) over seeded attaining pairs.
std::vector<double> range_points(const SubspacePair& pair, const OperatorSpec& op, int points, std::uint64_t seed);

struct GapEntry {
  int direction = 1;
  double sup_re_W = 0.0;
  double max_re_V_lower = 0.0;
  double max_re_V_upper = 0.0;
  double gap = 0.0;
  bool sup_exact = false;
};

struct GapReport {
  GapEntry plus;
  GapEntry minus;
  std::pair<double, double> interval_coW;
  std::pair<double, double> interval_V;
  /// co W inside V in both directions up to `slack`.
  [[nodiscard]] bool contained(double slack = 1e-6) const;
};

GapReport gap_report(const SubspacePair& pair, const OperatorSpec& op, const RangeOptions& opt = {});

}  // namespace nrange
