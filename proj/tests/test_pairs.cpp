#include <doctest.h>

#include <cmath>

#include "nrange/pairs.hpp"
#include "nrange/rng.hpp"

using namespace nrange;

TEST_CASE("pair construction checks rank and dimensions") {
  Mat J(3, 2);
  J << 1, 0, 0, 1, 1, 1;
  const auto p = SubspacePair::make(Norm::lp(2, 3), J);
  CHECK(p.n() == 3);
  CHECK(p.k() == 2);
  Mat bad(3, 2);
  bad << 1, 2, 2, 4, 3, 6;
  CHECK_THROWS_AS(SubspacePair::make(Norm::lp(2, 3), bad), std::invalid_argument);
  CHECK_THROWS_AS(SubspacePair::make(Norm::lp(2, 2), J), std::invalid_argument);
  CHECK_THROWS_AS(validate_operator(p, {Mat::Zero(2, 2), "T"}), std::invalid_argument);
}

TEST_CASE("sampled attaining pairs attain") {
  Mat J(3, 2);
  J << 1, 0, 0, 1, 0.5, -0.5;
  for (double p : {1.0, 2.0, double(INFINITY)}) {
    const auto pair = SubspacePair::make(Norm::lp(p, 3), J);
    for (const auto& ap : sample_attaining(pair, 10, 4)) CHECK(check_attaining(pair, ap).ok(1e-8));
  }
}

TEST_CASE("attaining pair repaired at distance zero") {
  const auto pair = SubspacePair::identity(Norm::lp(2, 3));
  Vec x(3);
  x << 0.6, 0.8, 0;
  const auto r = repair_distance(pair, x, x);
  CHECK(r.distance <= 1e-9);
}

TEST_CASE("classical repair honours the hypothesis and the bound") {
  const Norm Y = Norm::lp(INFINITY, 3);
  Vec y0(3), f(3);
  y0 << 1, 0.3, -0.2;
  f << 0.97, 0.03, 0;
  const double eps = 0.3;
  REQUIRE(1 - f.dot(y0) < eps * eps / 4);
  const auto a = bpb_repair_classical(Y, y0, f, eps, 11);
  CHECK((a.x - y0).cwiseAbs().maxCoeff() < eps);
  CHECK((a.ystar - f).cwiseAbs().sum() < eps);
  CHECK(a.ystar.dot(a.x) == doctest::Approx(1).epsilon(1e-9));
  Vec far(3);
  far << 0, 1, 0;
  CHECK_THROWS_AS(bpb_repair_classical(Y, y0, far, eps, 11), std::invalid_argument);
}

TEST_CASE("restrictions of states are states of the subspace") {
  Mat J(3, 2);
  J << 1, 0, 0, 1, 1, 1;
  const auto pair = SubspacePair::make(Norm::lp(INFINITY, 3), J);
  Vec u(2);
  u << 0.5, 0.5;
  u /= eval_norm(pair.X, u);
  const auto rep = check_state_restriction(pair, u, 20);
  CHECK(rep.pass);
}

TEST_CASE("nearest state on an l1 face") {
  const Norm l1 = Norm::lp(1, 2);
  Vec u(2), y0(2);
  u << 1, 0;
  y0 << 1, 2;  // face {(1,t): |t|<=1}; nearest in linf is (1,1)
  const auto ns = nearest_state(l1, u, y0);
  CHECK(ns.distance == doctest::Approx(1).epsilon(1e-6));
}
