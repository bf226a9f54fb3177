#include <doctest.h>

#include <cmath>

#include "nrange/families.hpp"
#include "nrange/optimize.hpp"
#include "nrange/ranges.hpp"

using namespace nrange;

TEST_CASE("family names round trip") {
  for (FamilyId id : all_families()) CHECK(parse_family(to_string(id)) == id);
  CHECK_THROWS_AS(parse_family("example99"), std::invalid_argument);
  CHECK_THROWS_AS(make_family(FamilyId::Example34, 1), std::invalid_argument);
}

TEST_CASE("embeddings are isometric onto the base space") {
  for (FamilyId id : all_families()) {
    const FamilyInstance f = make_family(id, 6);
    CHECK_MESSAGE(isometry_defect(f, 200, 3) <= 1e-9, to_string(id));
  }
}

TEST_CASE("structured operator norms agree with a direct search") {
  for (FamilyId id : all_families()) {
    const FamilyInstance f = make_family(id, 3);
    for (double a : {1.0, 0.25}) {
      const Mat M = f.pair.J + a * f.T.T;
      SearchConfig cfg;
      cfg.budget = 20000;
      cfg.starts = 16;
      const auto r = sphere_maximize([&](const Vec& x) { return eval_norm(f.pair.Y, M * x); }, f.pair.X, cfg);
      const double exact = f.exact_opnorm(a);
      CHECK_MESSAGE(r.best_value <= exact + 1e-9, to_string(id));
      CHECK_MESSAGE(r.best_value == doctest::Approx(exact).epsilon(1e-5), to_string(id));
    }
  }
}

TEST_CASE("closed-form laws") {
  // m/(m+1) law, c0-type law.
  const auto e34 = make_family(FamilyId::Example34, 16);
  CHECK((e34.exact_opnorm(0.3) - 1) / 0.3 == doctest::Approx(std::max(0.0, (1.3 * 16 / 17 - 1) / 0.3)));
  const auto e32 = make_family(FamilyId::Example32, 8);
  CHECK((e32.exact_opnorm(0.1) - 1) / 0.1 == doctest::Approx((1.1 * (1 - std::ldexp(1.0, -8)) - 1) / 0.1));
  const auto c1 = make_family(FamilyId::RemarkCase1, 8);
  CHECK(c1.reference(0.1) == doctest::Approx(e32.reference(0.1)));
  CHECK_FALSE(static_cast<bool>(make_family(FamilyId::RemarkCase2, 8).reference));
}

TEST_CASE("the W side vanishes on the truncations") {
  for (FamilyId id : all_families()) {
    const FamilyInstance f = make_family(id, 8);
    CHECK_MESSAGE(sup_re_W(f.pair, f.T).value <= 1e-8, to_string(id));
  }
}

TEST_CASE("optimizer sweep tracks the structured one") {
  for (FamilyId id : {FamilyId::Example34, FamilyId::RemarkCase2}) {
    SweepOptions s;
    const auto a = sweep(id, {4}, {1.0, 0.3}, s);
    s.mode = SweepMode::Optimizer;
    const auto b = sweep(id, {4}, {1.0, 0.3}, s);
    for (std::size_t i = 0; i < a.rows.size(); ++i)
      CHECK_MESSAGE(b.rows[i].quotient == doctest::Approx(a.rows[i].quotient).epsilon(1e-4), to_string(id));
  }
}

TEST_CASE("renorming rejects functionals outside the dual ball") {
  Prop33Data d = default_prop33_data(4);
  d.v0 *= 4.0;
  CHECK_THROWS_AS(make_family(FamilyId::Prop33, 4, d), std::invalid_argument);
}
