#include <doctest.h>

#include <cmath>

#include "nrange/rng.hpp"

using nrange::CounterRng;

TEST_CASE("same seed gives the same stream") {
  CounterRng a(42), b(42);
  for (int i = 0; i < 100; ++i) CHECK(a.next_u64() == b.next_u64());
}

TEST_CASE("derived streams are independent of draw order") {
  CounterRng a(7);
  const auto d1 = a.derive(3).next_u64();
  (void)a.next_u64();
  (void)a.next_u64();
  CHECK(a.derive(3).next_u64() == d1);
  CHECK(a.derive(4).next_u64() != d1);
}

TEST_CASE("uniform draws stay in [0,1) with mean near 1/2") {
  CounterRng r(1);
  double s = 0.0;
  for (int i = 0; i < 20000; ++i) {
    const double u = r.uniform();
    REQUIRE(u >= 0.0);
    REQUIRE(u < 1.0);
    s += u;
  }
  CHECK(std::abs(s / 20000 - 0.5) < 0.01);
}

TEST_CASE("normal draws have unit variance") {
  CounterRng r(2);
  double s = 0.0, s2 = 0.0;
  const int n = 20000;
  for (int i = 0; i < n; ++i) {
    const double x = r.normal();
    s += x;
    s2 += x * x;
  }
  CHECK(std::abs(s / n) < 0.03);
  CHECK(std::abs(s2 / n - 1.0) < 0.05);
  CHECK(r.normal_vector(5).size() == 5);
}
