#include <doctest.h>

#include <cmath>

#include "nrange/moduli.hpp"

using namespace nrange;

TEST_CASE("convexity of l2 matches 1 - sqrt(1 - eps^2/4)") {
  for (double eps : {0.2, 0.5, 1.0, 1.5}) {
    const double ref = 1.0 - std::sqrt(1.0 - eps * eps / 4.0);
    CHECK(modulus_of_convexity(Norm::lp(2, 2), eps).delta == doctest::Approx(ref).epsilon(1e-4));
  }
}

TEST_CASE("linf and l1 in the plane are flat") {
  CHECK(modulus_of_convexity(Norm::lp(INFINITY, 2), 0.5).delta <= 1e-6);
  CHECK(modulus_of_convexity(Norm::lp(1, 2), 0.5).delta <= 1e-6);
}

TEST_CASE("ssd modulus of the euclidean norm is eps^2/2") {
  // With states f = u the dual unit ball is l2: 1 - f(u) subject to
  // |f - u| >= eps on the sphere gives 1 - cos(theta), 2 sin(theta/2) = eps.
  Vec u(3);
  u << 1, 0, 0;
  for (double eps : {0.1, 0.3, 0.5}) {
    const auto r = ssd_modulus(Norm::lp(2, 3), u, eps);
    CHECK(r.zeta_upper == doctest::Approx(eps * eps / 2).epsilon(1e-4));
  }
}

TEST_CASE("ssd modulus of a polyhedral norm is bounded below") {
  Vec u(2);
  u << 1, 0.3;
  // linf at this point: D = {e_1}. Over the l1 ball, |1-a|+|b| >= 0.5 on
  // the edge a + |b| = 1 forces |b| >= 1/4; best f = (3/4, 1/4), f(u) = 0.825.
  const auto r = ssd_modulus(Norm::lp(INFINITY, 2), u, 0.5);
  CHECK(r.zeta_upper >= 0.175 - 1e-9);
  CHECK(r.zeta_upper == doctest::Approx(0.175).epsilon(1e-3));
}

TEST_CASE("bpb modulus curve is well formed") {
  Mat J(2, 1);
  J << 1, 0;
  const auto pair = SubspacePair::make(Norm::lp(2, 2), J);
  ModulusCurve c;
  for (double eps : {0.1, 0.3, 0.5}) c.samples.push_back({eps, bpb_modulus(pair, eps).delta_upper, Certification::Heuristic});
  CHECK(c.well_formed());
}

TEST_CASE("smoothness defect of l2 shrinks like t/2") {
  const auto prof = uniform_smoothness_profile(Norm::lp(2, 3), {0.1, 0.01});
  REQUIRE(prof.size() == 2);
  CHECK(prof[1].worst_defect < prof[0].worst_defect);
  CHECK(prof[0].worst_defect <= 0.05 + 1e-6);
}
