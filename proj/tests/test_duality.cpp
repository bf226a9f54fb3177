#include <doctest.h>

#include <cmath>

#include "nrange/duality.hpp"
#include "nrange/rng.hpp"

using namespace nrange;

namespace {
Vec vec(std::initializer_list<double> l) {
  Vec v(static_cast<Eigen::Index>(l.size()));
  Eigen::Index i = 0;
  for (double x : l) v(i++) = x;
  return v;
}
}  // namespace

TEST_CASE("smooth point: the state is the gradient") {
  const Norm l2 = Norm::lp(2, 2);
  const auto s = state_set(l2, vec({0.6, 0.8}));
  CHECK(s.kind == StateKind::Singleton);
  CHECK(s.support()(0) == doctest::Approx(0.6));
  CHECK(s.support()(1) == doctest::Approx(0.8));
  CHECK_THROWS_AS(state_set(l2, vec({1, 1})), std::invalid_argument);
}

TEST_CASE("linf face at a tie is the segment between two vertices") {
  const Norm li = Norm::lp(INFINITY, 3);
  const auto s = state_set(li, vec({1, -1, 0.2}));
  CHECK(s.kind == StateKind::Polyhedral);
  CHECK(s.generators.size() == 2);
  // tau in direction (1, 1, 0): max(1*1, -1*1) = 1.
  const auto t = tau(li, vec({1, -1, 0.2}), vec({1, 1, 0}));
  CHECK(t.lower == doctest::Approx(1).epsilon(1e-9));
  CHECK(t.upper >= t.lower);
}

TEST_CASE("l1 at a point with zero coordinates") {
  const Norm l1 = Norm::lp(1, 3);
  // D = {(1, t, 0.. ) : |t| <= 1 }, tau(u, y) = y_0 + |y_1| + |y_2|.
  const Vec u = vec({1, 0, 0});
  const Vec y = vec({-0.5, 0.3, -2});
  CHECK(tau(l1, u, y).lower == doctest::Approx(-0.5 + 0.3 + 2).epsilon(1e-9));
}

TEST_CASE("tau bracket brackets the one-sided derivative for smooth norms") {
  const Norm l3 = Norm::lp(3, 4);
  CounterRng r(3);
  for (int i = 0; i < 20; ++i) {
    const Vec u = project_to_sphere(l3, r.normal_vector(4));
    const Vec y = r.normal_vector(4);
    // Closed form: sum sign(u) |u|^2 y.
    double g = 0.0;
    for (int j = 0; j < 4; ++j) g += (u(j) < 0 ? -1 : 1) * u(j) * u(j) * y(j);
    const auto t = tau(l3, u, y);
    CHECK(t.lower <= g + 1e-9);
    CHECK(t.upper >= g - 1e-9);
    CHECK(t.width() <= 1e-6);
  }
}

TEST_CASE("difference quotients decrease toward the derivative") {
  const Norm li = Norm::lp(INFINITY, 2);
  const auto q = difference_quotients(li, vec({1, 0.5}), vec({-1, 3}));
  REQUIRE(q.size() >= 2);
  CHECK(monotone_quotient_violation(q) == 0.0);
  for (std::size_t i = 1; i < q.size(); ++i) CHECK(q[i].quotient <= q[i - 1].quotient + q[i].allowance + q[i - 1].allowance);
}

TEST_CASE("ball vertices at zero") {
  const auto g = face_generators(Norm::lp(INFINITY, 2), Vec::Zero(2));
  REQUIRE(g.has_value());
  CHECK(g->size() == 4);
  const auto h = face_generators(Norm::lp(1, 2), Vec::Zero(2));
  REQUIRE(h.has_value());
  CHECK(h->size() == 4);
}

TEST_CASE("attain realizes the dual norm") {
  const Norm l3 = Norm::lp(3, 3);
  const Vec g = vec({1, -2, 0.5});
  const auto a = attain(l3, g, Vec::Ones(3));
  CHECK(a.exact);
  CHECK(eval_norm(l3, a.x) == doctest::Approx(1));
  CHECK(g.dot(a.x) == doctest::Approx(eval_dual_norm(l3, g).upper));
}
