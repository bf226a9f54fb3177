#include <doctest.h>

#include <cmath>

#include "nrange/optimize.hpp"

using namespace nrange;

TEST_CASE("linear objective on the l2 sphere reaches the dual norm") {
  Vec c(3);
  c << 1, 2, 2;
  SearchConfig cfg;
  cfg.budget = 3000;
  const auto r = sphere_maximize([&](const Vec& x) { return c.dot(x); }, Norm::lp(2, 3), cfg);
  CHECK(r.best_value == doctest::Approx(3).epsilon(1e-6));
  CHECK(eval_norm(Norm::lp(2, 3), r.best_point) == doctest::Approx(1));
}

TEST_CASE("deterministic and monotone in the budget") {
  Vec c(4);
  c << 0.3, -1, 0.2, 0.7;
  auto f = [&](const Vec& x) { return c.dot(x) - 0.1 * x.squaredNorm(); };
  SearchConfig a, b;
  a.budget = 200;
  b.budget = 2000;
  const Norm l3 = Norm::lp(3, 4);
  CHECK(sphere_maximize(f, l3, a).best_value == sphere_maximize(f, l3, a).best_value);
  CHECK(sphere_maximize(f, l3, b).best_value >= sphere_maximize(f, l3, a).best_value);
}

TEST_CASE("extra starts are used") {
  Vec t(2);
  t << 0, 1;
  SearchConfig cfg;
  cfg.budget = 5;
  cfg.include_basis_starts = false;
  cfg.starts = 1;
  cfg.extra_starts = {t};
  const auto r = sphere_maximize([&](const Vec& x) { return x(1); }, Norm::lp(2, 2), cfg);
  CHECK(r.best_value == doctest::Approx(1));
  cfg.starts = 0;
  CHECK_THROWS_AS(sphere_maximize([&](const Vec& x) { return x(1); }, Norm::lp(2, 2), cfg), std::invalid_argument);
}

TEST_CASE("hull interval") {
  const std::vector<double> v{0.3, -1, 2};
  const auto [lo, hi] = hull_interval(v);
  CHECK(lo == -1);
  CHECK(hi == 2);
  CHECK_THROWS_AS(hull_interval(std::vector<double>{}), std::invalid_argument);
}
