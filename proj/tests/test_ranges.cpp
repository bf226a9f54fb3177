#include <doctest.h>

#include <Eigen/Eigenvalues>
#include <cmath>

#include "nrange/ranges.hpp"
#include "nrange/rng.hpp"

using namespace nrange;

namespace {
Mat random_matrix(int n, std::uint64_t seed) {
  CounterRng r(seed);
  Mat T(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) T(i, j) = r.normal();
  return T;
}

// Logarithmic norms: max row (linf) / column (l1) of t_ii + sum_{j != i} |t_ij|.
double lognorm_inf(const Mat& T) {
  double m = -INFINITY;
  for (int i = 0; i < T.rows(); ++i) m = std::max(m, T(i, i) + T.row(i).cwiseAbs().sum() - std::abs(T(i, i)));
  return m;
}
}  // namespace

TEST_CASE("T = J: both sides equal 1") {
  Mat J(3, 2);
  J << 1, 0, 0, 1, 1, -1;
  const auto pair = SubspacePair::make(Norm::lp(3, 3), J);
  const auto w = sup_re_W(pair, {J, "J"});
  const auto v = max_re_V(pair, {J, "J"}, {}, &w);
  CHECK(w.value == doctest::Approx(1).epsilon(1e-9));
  CHECK(v.upper == doctest::Approx(1).epsilon(1e-6));
  CHECK(gap_report(pair, {J, "J"}).plus.gap <= 1e-6);
}

TEST_CASE("euclidean space: top eigenvalue of the symmetric part") {
  const Mat T = random_matrix(4, 5);
  const Mat S = 0.5 * (T + T.transpose());
  const double lam = Eigen::SelfAdjointEigenSolver<Mat>(S).eigenvalues().maxCoeff();
  const auto pair = SubspacePair::identity(Norm::lp(2, 4));
  RangeOptions o;
  o.budget = 6000;
  const auto w = sup_re_W(pair, {T, "T"}, o);
  const auto v = max_re_V(pair, {T, "T"}, o, &w);
  CHECK(w.value == doctest::Approx(lam).epsilon(1e-6));
  CHECK(v.upper == doctest::Approx(lam).epsilon(1e-4));
  CHECK(w.value <= v.upper + 1e-9);
}

TEST_CASE("linf: logarithmic norm from the rows") {
  const Mat T = random_matrix(3, 8);
  const double ref = lognorm_inf(T);
  const auto pair = SubspacePair::identity(Norm::lp(INFINITY, 3));
  RangeOptions o;
  o.budget = 6000;
  const auto w = sup_re_W(pair, {T, "T"}, o);
  const auto v = max_re_V(pair, {T, "T"}, o, &w);
  CHECK(w.value == doctest::Approx(ref).epsilon(1e-6));
  CHECK(v.upper == doctest::Approx(ref).epsilon(1e-4));
}

TEST_CASE("l1: logarithmic norm from the columns") {
  const Mat T = random_matrix(3, 9);
  const double ref = lognorm_inf(T.transpose());
  const auto pair = SubspacePair::identity(Norm::lp(1, 3));
  RangeOptions o;
  o.budget = 6000;
  const auto w = sup_re_W(pair, {T, "T"}, o);
  CHECK(w.value == doctest::Approx(ref).epsilon(1e-6));
}

TEST_CASE("range points sit inside the W interval") {
  const Mat T = random_matrix(3, 2);
  const auto pair = SubspacePair::identity(Norm::lp(1.5, 3));
  const auto pts = range_points(pair, {T, "T"}, 30, 4);
  const auto rep = gap_report(pair, {T, "T"});
  for (double p : pts) CHECK(p <= rep.plus.sup_re_W + 1e-6);
  CHECK(rep.contained(1e-6));
  CHECK(rep.interval_coW.first <= rep.interval_coW.second);
}

TEST_CASE("quotients decrease down the alpha grid") {
  const Mat T = random_matrix(2, 12);
  const auto v = max_re_V(SubspacePair::identity(Norm::lp(2, 2)), {T, "T"});
  REQUIRE(v.trace.size() >= 2);
  CHECK(v.trace.front().alpha == 1.0);
  CHECK(v.monotone_violation <= 1e-6);
}
