#include <doctest.h>

#include <cmath>

#include "nrange/norm.hpp"
#include "nrange/rng.hpp"

using namespace nrange;

namespace {
Vec v3(double a, double b, double c) {
  Vec v(3);
  v << a, b, c;
  return v;
}
}  // namespace

TEST_CASE("lp leaves") {
  CHECK(eval_norm(Norm::lp(1, 3), v3(1, -2, 3)) == doctest::Approx(6));
  CHECK(eval_norm(Norm::lp(2, 3), v3(1, 2, 2)) == doctest::Approx(3));
  CHECK(eval_norm(Norm::lp(INFINITY, 3), v3(1, -5, 3)) == doctest::Approx(5));
  CHECK_THROWS_AS(eval_norm(Norm::lp(2, 2), v3(1, 2, 3)), std::invalid_argument);
  CHECK_THROWS_AS(Norm::lp(0.5, 2), std::invalid_argument);
}

TEST_CASE("combinators evaluate bottom-up") {
  Mat A(2, 3);
  A << 1, 1, 0, 0, 0, 1;
  const Norm pb = Norm::pullback(A, Norm::lp(2, 2));
  CHECK(eval_norm(pb, v3(1, 2, 4)) == doctest::Approx(5));
  const Norm mx = Norm::max_of({Norm::lp(1, 3), Norm::lp(INFINITY, 3)});
  CHECK(eval_norm(mx, v3(1, -1, 1)) == doctest::Approx(3));
  const Norm sm = Norm::sum_of({Norm::lp(1, 3), Norm::lp(INFINITY, 3)});
  CHECK(eval_norm(sm, v3(1, -1, 1)) == doctest::Approx(4));
  Vec v(4);
  v << 3, 4, 1, 1;
  const Norm as = Norm::absolute_sum(AbsoluteGauge::linf(), Norm::lp(2, 2), Norm::lp(1, 2));
  CHECK(eval_norm(as, v) == doctest::Approx(5));
}

TEST_CASE("pullback by a map with kernel is a seminorm") {
  Mat A(1, 2);
  A << 1, -1;
  const Norm pb = Norm::pullback(A, Norm::lp(2, 1));
  CHECK(pb.kernel_basis().cols() == 1);
  CHECK_FALSE(pb.is_definite());
  CHECK_THROWS_AS(eval_dual_norm(pb, Vec::Ones(2)), std::invalid_argument);
  // Finite on the row space, infinite off it.
  Vec f(2);
  f << 2, -2;
  CHECK(dual_norm_upper(pb, f) == doctest::Approx(2));
  CHECK(std::isinf(dual_norm_upper(pb, Vec::Ones(2))));
}

TEST_CASE("dual norms of exact trees match closed forms") {
  CHECK(eval_dual_norm(Norm::lp(1, 3), v3(1, -3, 2)).upper == doctest::Approx(3));
  CHECK(eval_dual_norm(Norm::lp(3, 3), v3(1, 1, 1)).upper == doctest::Approx(std::pow(3.0, 2.0 / 3.0)));
  Vec f(4);
  f << 3, 4, 1, -2;
  // (l2 (+)_inf l1)* = l2 (+)_1 linf.
  const Norm as = Norm::absolute_sum(AbsoluteGauge::linf(), Norm::lp(2, 2), Norm::lp(1, 2));
  const auto d = eval_dual_norm(as, f);
  CHECK(d.exact);
  CHECK(d.upper == doctest::Approx(7));
}

TEST_CASE("dual of a max of norms is bracketed around the true value") {
  // ||x|| = max(|x|_1, |x|_inf) = |x|_1, so the dual is |f|_inf.
  const Norm mx = Norm::max_of({Norm::lp(1, 3), Norm::lp(INFINITY, 3)});
  const auto d = eval_dual_norm(mx, v3(0.5, -2, 1));
  CHECK(d.lower <= 2 + 1e-9);
  CHECK(d.upper >= 2 - 1e-9);
  CHECK(d.lower == doctest::Approx(2).epsilon(1e-6));
}

TEST_CASE("axioms hold on sampled vectors") {
  Mat A(3, 3);
  A << 2, 0, 1, 0, 1, -1, 1, 1, 1;
  const Norm n = Norm::sum_of({Norm::lp(1.5, 3), Norm::pullback(A, Norm::lp(INFINITY, 3))}).declare_full();
  const auto rep = check_norm_axioms(n, 200, 9);
  CHECK(rep.pass);
  CHECK(rep.definiteness_checked);
}

TEST_CASE("to_string round trips the structure") {
  const Norm n = Norm::absolute_sum(AbsoluteGauge::l2(), Norm::lp(3, 2), Norm::lp(INFINITY, 1));
  CHECK(n.to_string().find("abssum") == 0);
  CHECK(project_to_sphere(n, Vec::Ones(3)).size() == 3);
  CHECK(eval_norm(n, project_to_sphere(n, Vec::Ones(3))) == doctest::Approx(1));
}
