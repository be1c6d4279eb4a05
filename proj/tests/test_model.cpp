#include <cmath>
#include <numbers>
#include <random>

#include "critmass/errors.hpp"
#include "critmass/model.hpp"
#include "doctest.h"

using namespace critmass;

TEST_CASE("sphere area and Newtonian constant") {
  CHECK(unit_sphere_area(3) == doctest::Approx(4.0 * std::numbers::pi).epsilon(1e-14));
  CHECK(unit_sphere_area(4) == doctest::Approx(2.0 * std::numbers::pi * std::numbers::pi).epsilon(1e-14));
  for (int d = 3; d <= 8; ++d) {
    const Parameters p = Parameters::create(d, 1.2, 1.3);
    CHECK(p.newton_const * (d - 2) * p.sphere_area() == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(p.m_lower() < p.m_star());
    CHECK(p.m_star() < 0.5 * d);
  }
  CHECK(Parameters::create(3, 1.5, 1.5, 0.25).newton_const == 0.25);
}

TEST_CASE("invalid parameters are rejected") {
  CHECK_THROWS_AS(Parameters::create(2, 1.5, 1.5), Error);
  CHECK_THROWS_AS(Parameters::create(3, 1.0, 1.5), Error);
  CHECK_THROWS_AS(Parameters::create(3, 1.5, 0.9), Error);
}

TEST_CASE("scaling exponents") {
  SUBCASE("intersection point") {
    const auto e = scaling_exponents(Parameters::create(3, 4.0 / 3.0, 4.0 / 3.0));
    CHECK(e.p == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(e.q == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(e.r == doctest::Approx(10.0 / 9.0).epsilon(1e-14));
  }
  SUBCASE("diffusion dominated diagonal") {
    const auto e = scaling_exponents(Parameters::create(3, 1.5, 1.5));
    CHECK(e.p == doctest::Approx(0.75).epsilon(1e-14));
    CHECK(e.q == doctest::Approx(0.75).epsilon(1e-14));
  }
  SUBCASE("point on the q = 1 curve") {
    const auto e = scaling_exponents(Parameters::create(3, 1.4, 7.0 / 6.0));
    CHECK(e.q == doctest::Approx(1.0).epsilon(1e-14));
  }
  SUBCASE("degenerate exponents") {
    // m1 + m2 = m1 m2 at (3, 1.5) in high dimension
    CHECK_THROWS_AS(scaling_exponents(Parameters::create(8, 3.0, 1.5)), Error);
  }
}

TEST_CASE("regime classification") {
  CHECK(classify_regime(Parameters::create(3, 4.0 / 3.0, 4.0 / 3.0)).regime == Regime::Intersection);
  CHECK(classify_regime(Parameters::create(3, 1.5, 1.5)).regime == Regime::Subcritical);
  CHECK(classify_regime(Parameters::create(3, 1.1, 1.1)).regime == Regime::Supercritical);
  CHECK(classify_regime(Parameters::create(3, 1.4, 7.0 / 6.0)).regime == Regime::CriticalL1);
  CHECK(classify_regime(Parameters::create(3, 7.0 / 6.0, 1.4)).regime == Regime::CriticalL2);
  CHECK(classify_regime(Parameters::create(3, 1.3, 1.25)).regime == Regime::RegionOneSix);
  // on q = 1 but with m1 below m*: not a critical segment point
  const double m1 = 1.3;
  const double m2 = m1 * (1.0 - 2.0 / 3.0) / (m1 - 1.0);
  CHECK(classify_regime(Parameters::create(3, m1, m2)).regime != Regime::CriticalL1);
}

TEST_CASE("swapping exponents swaps p and q and the critical segments") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> m(1.01, 1.49);
  for (int i = 0; i < 200; ++i) {
    const double a = m(rng), b = m(rng);
    const auto ab = Parameters::create(3, a, b);
    const auto ba = Parameters::create(3, b, a);
    const auto e1 = scaling_exponents(ab), e2 = scaling_exponents(ba);
    CHECK(e1.p == doctest::Approx(e2.q).epsilon(1e-13));
    CHECK(e1.q == doctest::Approx(e2.p).epsilon(1e-13));
    const Regime r1 = classify_regime(ab).regime, r2 = classify_regime(ba).regime;
    if (r1 == Regime::CriticalL1) CHECK(r2 == Regime::CriticalL2);
    else if (r1 == Regime::CriticalL2) CHECK(r2 == Regime::CriticalL1);
    else CHECK(r1 == r2);
  }
}

TEST_CASE("diagonal regime depends only on m versus m*") {
  for (int d = 3; d <= 6; ++d) {
    const Parameters ref = Parameters::create(d, 2.0, 2.0);
    const double ms = ref.m_star();
    for (double m : {1.05, 1.1, 1.2, 1.25, 1.3, 1.45, 1.7, 1.9}) {
      if (m >= 0.5 * d) continue;
      const Parameters p = Parameters::create(d, m, m);
      const auto e = scaling_exponents(p);
      CHECK(e.p == doctest::Approx(e.q));
      const Regime r = classify_regime(p).regime;
      if (m > ms) CHECK(r == Regime::Subcritical);
      else CHECK((r == Regime::RegionOneSix || r == Regime::Supercritical));
    }
  }
}

TEST_CASE("classification stable under sub-tolerance perturbations") {
  const double tol = 1e-6;
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> m(1.05, 1.45), jitter(-tol / 10, tol / 10);
  for (int i = 0; i < 200; ++i) {
    const double a = m(rng), b = m(rng);
    const Regime base = classify_regime(Parameters::create(3, a, b), tol).regime;
    const Regime moved = classify_regime(Parameters::create(3, a + jitter(rng), b + jitter(rng)), tol).regime;
    CHECK(base == moved);
  }
}
