#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "nrange/gauge.hpp"

using nrange::AbsoluteGauge;

TEST_CASE("named gauges evaluate like lp on the plane") {
  CHECK(AbsoluteGauge::l1().value(0.3, -0.4) == doctest::Approx(0.7));
  CHECK(AbsoluteGauge::l2().value(3, 4) == doctest::Approx(5));
  CHECK(AbsoluteGauge::linf().value(-0.3, 0.4) == doctest::Approx(0.4));
  CHECK(AbsoluteGauge::lp(3).value(1, 1) == doctest::Approx(std::cbrt(2.0)));
}

TEST_CASE("normalization and absoluteness") {
  for (const auto& g : {AbsoluteGauge::l1(), AbsoluteGauge::l2(), AbsoluteGauge::linf(), AbsoluteGauge::lp(1.5)}) {
    CHECK(g.value(1, 0) == doctest::Approx(1));
    CHECK(g.value(0, 1) == doctest::Approx(1));
    CHECK(g.value(-0.2, 0.7) == doctest::Approx(g.value(0.2, -0.7)));
  }
}

TEST_CASE("dual gauges: l1 <-> linf, lp <-> lq") {
  CHECK(AbsoluteGauge::l1().dual_value(0.3, 0.5) == doctest::Approx(0.5));
  CHECK(AbsoluteGauge::linf().dual_value(0.3, 0.5) == doctest::Approx(0.8));
  const double q = 3.0;  // conjugate of 1.5
  CHECK(AbsoluteGauge::lp(1.5).dual_value(0.6, 0.8) ==
        doctest::Approx(std::pow(std::pow(0.6, q) + std::pow(0.8, q), 1 / q)));
}

TEST_CASE("b0 is 0 for l1 and l2, 1 for linf") {
  CHECK(nrange::compute_b0(AbsoluteGauge::l1()) == doctest::Approx(0).epsilon(1e-9));
  CHECK(nrange::compute_b0(AbsoluteGauge::l2()) == doctest::Approx(0).epsilon(1e-9));
  CHECK(nrange::compute_b0(AbsoluteGauge::linf()) == doctest::Approx(1).epsilon(1e-9));
}

TEST_CASE("piecewise-linear gauge validated and parsed") {
  CHECK_THROWS_AS(AbsoluteGauge::piecewise_linear({{0, 1}, {0.5, 0.3}, {1, 1}}), std::invalid_argument);
  const auto g = AbsoluteGauge::parse("pwl(0:1,0.5:0.75,1:1)");
  // (a,b) = (1,1): (|a|+|b|) psi(1/2) = 1.5.
  CHECK(g.value(1, 1) == doctest::Approx(1.5));
  CHECK(g.is_polyhedral());
  CHECK_THROWS_AS(AbsoluteGauge::parse("l7x"), std::invalid_argument);
}

TEST_CASE("subdifferential at a smooth and at a vertex point") {
  const auto s2 = AbsoluteGauge::l2().subdifferential(0.6, 0.8);
  REQUIRE(s2.size() == 1);
  CHECK(s2[0].a == doctest::Approx(0.6));
  CHECK(s2[0].b == doctest::Approx(0.8));
  const auto sinf = AbsoluteGauge::linf().subdifferential(1.0, 1.0);
  CHECK(sinf.size() == 2);
}

TEST_CASE("region diameters follow the hand computation") {
  // l1: A(0.1) contains (1,0),(0.9,0.1),(0.9,0); diameter 0.2.
  CHECK(nrange::region_A_diameter(AbsoluteGauge::l1(), 0.1).diameter == doctest::Approx(0.2).epsilon(1e-9));
  // linf: b0 = 1 so A(0.1) is the segment a in (0.9,1], b = 1.
  CHECK(nrange::region_A_diameter(AbsoluteGauge::linf(), 0.1).diameter == doctest::Approx(0.1).epsilon(1e-9));
  // l2: farthest pair (1,0)-(0.9, sqrt(0.19)).
  const double l2 = std::sqrt(0.01 + 0.19);
  CHECK(nrange::region_A_diameter(AbsoluteGauge::l2(), 0.1).diameter == doctest::Approx(l2).epsilon(1e-6));
  CHECK(nrange::delta_for_diameter(AbsoluteGauge::l1(), 0.1) <= 0.05);
}
