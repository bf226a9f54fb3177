#include <doctest.h>

#include <cmath>

#include "nrange/absolute_repair.hpp"

using namespace nrange;

namespace {
SubspacePair summand_pair(const AbsoluteGauge& g) {
  Mat J = Mat::Zero(5, 3);
  J.topRows(3).setIdentity();
  return SubspacePair::make(Norm::absolute_sum(g, Norm::lp(INFINITY, 3), Norm::lp(2, 2)), J);
}
}  // namespace

TEST_CASE("threshold is min(delta1, eps^2/36)") {
  for (const auto& g : {AbsoluteGauge::l1(), AbsoluteGauge::l2(), AbsoluteGauge::linf()}) {
    const auto t = absolute_repair_threshold(g, 0.3);
    CHECK(t.delta <= 0.09 / 36 + 1e-15);
    CHECK(t.delta == doctest::Approx(std::min(t.delta1, 0.09 / 36)));
  }
  // Y* gauge of l1 is linf: b0 = 1.
  CHECK(absolute_repair_threshold(AbsoluteGauge::l1(), 0.3).b0 == doctest::Approx(1));
  CHECK(absolute_repair_threshold(AbsoluteGauge::linf(), 0.3).b0 == doctest::Approx(0).epsilon(1e-9));
}

TEST_CASE("shape detection") {
  CHECK(is_left_summand_pair(summand_pair(AbsoluteGauge::l2())));
  CHECK_FALSE(is_left_summand_pair(SubspacePair::identity(Norm::lp(2, 3))));
}

TEST_CASE("repair keeps or shrinks the z part") {
  const auto pair = summand_pair(AbsoluteGauge::l1());
  Vec x0(3), y0(5);
  x0 << 1, 0.2, -0.4;
  y0 << 0.999, 0, 0, 0.5, 0.5;  // ||(x*, z*)||* = max(|x*|_1, |z*|_2) = 0.999
  y0 /= 0.999;
  const auto r = bpb_repair_absolute(pair, x0, y0, 0.3, 3);
  CHECK(r.x_distance < 0.3);
  CHECK(r.y_distance < 0.3);
  CHECK(r.pair.ystar.dot(pair.J * r.pair.x) == doctest::Approx(1).epsilon(1e-9));
  CHECK(r.branch == 1);
}

TEST_CASE("too large deficiency is rejected") {
  const auto pair = summand_pair(AbsoluteGauge::l2());
  Vec x0(3), y0(5);
  x0 << 1, 0, 0;
  y0 << 0.5, 0, 0, std::sqrt(0.75), 0;
  CHECK_THROWS_AS(bpb_repair_absolute(pair, x0, y0, 0.3, 3), DeficiencyTooLarge);
}
