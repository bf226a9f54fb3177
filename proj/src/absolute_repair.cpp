#include "nrange/absolute_repair.hpp"

#include <algorithm>
#include <cmath>

namespace nrange {

bool is_left_summand_pair(const SubspacePair& pair) {
  if (pair.Y.kind() != Norm::Kind::AbsoluteSum) return false;
  const int k = pair.Y.left().dim();
  if (pair.k() != k) return false;
  Mat expect = Mat::Zero(pair.n(), k);
  expect.topRows(k).setIdentity();
  return pair.J == expect;
}

AbsoluteRepairThreshold absolute_repair_threshold(const AbsoluteGauge& g, double eps) {
  if (!(eps > 0.0)) throw std::invalid_argument("eps must be positive");
  const AbsoluteGauge gd = g.dual();
  AbsoluteRepairThreshold t;
  t.b0 = compute_b0(gd);
  t.delta1 = delta_for_diameter(gd, eps / 3.0);
  t.delta = std::min(t.delta1, eps * eps / 36.0);
  return t;
}

AbsoluteRepairResult bpb_repair_absolute(const SubspacePair& pair, const Vec& x0, const Vec& y0, double eps,
                                         std::uint64_t seed, int budget) {
  if (!is_left_summand_pair(pair))
    throw std::invalid_argument("absolute repair needs Y = X0 (+)_g W with J = [I; 0]");
  const Norm& X0 = pair.Y.left();
  const Norm& W = pair.Y.right();
  const int k = X0.dim();
  const int m = W.dim();
  if (x0.size() != k || y0.size() != pair.n()) throw std::invalid_argument("absolute repair: dimension mismatch");

  AbsoluteRepairResult res;
  res.threshold = absolute_repair_threshold(pair.Y.gauge(), eps);
  const Vec xs0 = y0.head(k);
  const Vec zs0 = y0.tail(m);
  const double deficiency = 1.0 - xs0.dot(x0);
  if (!(deficiency < res.threshold.delta))
    throw DeficiencyTooLarge("deficiency " + std::to_string(deficiency) + " is not below the required threshold " +
                                 std::to_string(res.threshold.delta),
                             deficiency, res.threshold.delta);

  // Classical repair of (x0, x0*/||x0*||) inside X0 at eps/3.
  const double nx = eval_dual_norm(X0, xs0).upper;
  const Vec xs_unit = xs0 / nx;
  const SubspacePair inner = SubspacePair::identity(X0);
  RepairOptions ro;
  ro.budget = budget;
  ro.seed = seed;
  ro.stop_below = eps / 6.0;
  const RepairResult ir = repair_distance(inner, x0, xs_unit, ro);
  if (!(ir.distance < eps / 3.0))
    throw RepairFailure("inner repair reached only " + std::to_string(ir.distance) + " (needed < eps/3 = " +
                            std::to_string(eps / 3.0) + ")",
                        ir);
  res.inner_x_distance = ir.x_distance;
  res.inner_y_distance = ir.y_distance;

  const Vec& x = ir.witness.x;
  const Vec& xs = ir.witness.ystar;
  const double nz = m > 0 ? eval_dual_norm(W, zs0).upper : 0.0;
  Vec ystar(pair.n());
  ystar.head(k) = xs;
  if (nz <= res.threshold.b0) {
    res.branch = 1;
    ystar.tail(m) = zs0;
  } else {
    res.branch = 2;
    ystar.tail(m) = (res.threshold.b0 / nz) * zs0;
  }
  res.pair = {x, ystar};
  res.x_distance = eval_norm(pair.X, Vec(x - x0));
  res.y_distance = dual_distance(pair.Y, ystar, y0);
  return res;
}

}  // namespace nrange
