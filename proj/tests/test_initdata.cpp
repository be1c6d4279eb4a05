#include <cmath>
#include <numbers>

#include "critmass/criteria.hpp"
#include "critmass/errors.hpp"
#include "critmass/initdata.hpp"
#include "doctest.h"

using namespace critmass;
using std::numbers::pi;

TEST_CASE("ball is uniform inside its radius") {
  const RadialGrid grid(3, 64, 4.0);  // face 16 sits at r = 1
  const auto u = make({Ball{1.0}, 1.0}, grid);
  for (std::size_t k = 0; k < 16; ++k) CHECK(u[k] == doctest::Approx(3.0 / (4.0 * pi)).epsilon(1e-12));
  for (std::size_t k = 16; k < grid.size(); ++k) CHECK(u[k] == 0.0);
  CHECK(u.mass() == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(second_moment(u, RadialDensity(grid)) == doctest::Approx(0.6).epsilon(5e-3));
  CHECK_THROWS_AS(make({Ball{2.5}, 1.0}, grid), Error);
}

TEST_CASE("gaussian moments and tail gate") {
  for (int d : {3, 4, 5}) {
    const RadialGrid grid(d, 512, 8.0);
    const double sigma = 0.4, mass = 2.5;
    const auto u = make({Gaussian{sigma}, mass}, grid);
    CHECK(u.mass() == doctest::Approx(mass).epsilon(1e-14));
    CHECK(second_moment(u, RadialDensity(grid)) == doctest::Approx(d * sigma * sigma * mass).epsilon(1e-4));
    CHECK(lp_norm(u, 2.0) ==
          doctest::Approx(mass * std::pow(4.0 * pi * sigma * sigma, -0.25 * d)).epsilon(1e-4));
  }
  CHECK_THROWS_AS(make({Gaussian{1.0}, 1.0}, RadialGrid(3, 128, 8.0)), Error);
}

TEST_CASE("barenblatt shape") {
  // m = 2, d = 3 by hand: exponent 3/5, k = 1/20, mass = 4 pi R^3 C (2/15) with R^2 = 20 C.
  const auto s = barenblatt_shape(3, 2.0, 1.7);
  CHECK(s.time_exponent == doctest::Approx(0.6).epsilon(1e-15));
  CHECK(s.k == doctest::Approx(0.05).epsilon(1e-15));
  const double R = std::sqrt(20.0 * s.height);
  CHECK(4.0 * pi * R * R * R * s.height * 2.0 / 15.0 == doctest::Approx(1.7).epsilon(1e-13));
  CHECK(s.support_radius(1.0, 3) == doctest::Approx(R).epsilon(1e-14));

  const RadialGrid grid(3, 512, 4.0);
  const auto u = make({Barenblatt{2.0, 1.0}, 1.7}, grid);
  CHECK(u.mass() == doctest::Approx(1.7).epsilon(1e-14));
  for (std::size_t k = 0; k < grid.size(); ++k) {
    const double r = grid.center(k);
    if (r + grid.dr() < R) {
      const double exact = s.height - s.k * r * r;
      CHECK(u[k] == doctest::Approx(exact).epsilon(1e-3));
    } else if (grid.face(k) >= R) {
      CHECK(u[k] == 0.0);
    }
  }
  CHECK_THROWS_AS(make({Barenblatt{2.0, 50.0}, 1.7}, grid), Error);
}

TEST_CASE("rescaled maximizer") {
  const RadialGrid source(3, 256, 10.0);
  const auto [h, unused] = gaussian_seed(source, 0.5, 0.5);
  const double mu = 2.0, mass = 3.0, m = 4.0 / 3.0;
  const RadialGrid target(3, 256, 5.0);  // cells of h(mu x) align with target cells
  const auto u = make({RescaledMaximizer{mu, h.scaled(0.7)}, mass}, target);
  const double lambda = mass * std::pow(mu, 3) / (0.7 * h.mass());
  CHECK(u.mass() == doctest::Approx(mass).epsilon(1e-13));
  CHECK(lp_norm(u, m) == doctest::Approx(lambda * 0.7 * std::pow(mu, -3.0 / m) * lp_norm(h, m)).epsilon(1e-12));
  for (std::size_t k = 0; k < 40; ++k) CHECK(u[k] == doctest::Approx(lambda * 0.7 * h[k]).epsilon(1e-12));
  CHECK_THROWS_AS(make({RescaledMaximizer{0.5, h}, 1.0}, target), Error);
}

TEST_CASE("data descriptions are validated") {
  const RadialGrid grid(3, 64, 4.0);
  CHECK_THROWS_AS(make({Ball{1.0}, 0.0}, grid), Error);
  CHECK_THROWS_AS(make({Gaussian{-1.0}, 1.0}, grid), Error);
  CHECK_THROWS_AS(make({Barenblatt{1.0, 1.0}, 1.0}, grid), Error);
  CHECK_THROWS_AS(make({RescaledMaximizer{1.0, RadialDensity(grid)}, 1.0}, grid), Error);
}

TEST_CASE("negative energy construction") {
  const Parameters params = Parameters::create(3, 4.0 / 3.0, 4.0 / 3.0);
  const double m = params.m_star();
  MaximizeOptions opts;
  opts.cells = 256;
  const RadialGrid grid(3, 256, 10.0);

  SUBCASE("symmetric masses") {
    const auto best = maximize(ObjectiveSpec::cstar(params), opts);
    REQUIRE(best.converged);
    const double M = std::pow(1.5, 1.5) * single_critical_mass(best.constant, params);
    const auto one = negative_energy_pair(M, M, best, 1.0, grid, params);
    const auto two = negative_energy_pair(M, M, best, 2.0, grid, params);
    CHECK(one.sigma == doctest::Approx(1.5).epsilon(1e-12));
    CHECK(one.F0 < 0.0);
    CHECK(two.F0 / one.F0 == doctest::Approx(2.0).epsilon(1e-2));
    CHECK(one.u1.mass() == doctest::Approx(M).epsilon(1e-13));

    // F0 = (lm1 + lm2)/(m - 1) (1 - eta Sigma) with eta the attained fraction of the constant.
    const auto pi_spec = ObjectiveSpec::pi(params, 0.5);
    const double eta = objective_value(pi_spec, one.u1, one.u2) / best.constant;
    const double lm = power_integral(one.u1, m) + power_integral(one.u2, m);
    CHECK(one.F0 == doctest::Approx(lm / (m - 1.0) * (1.0 - eta * one.sigma)).epsilon(1e-10));

    const double sub = std::pow(0.9, 1.5) * single_critical_mass(best.constant, params);
    CHECK_THROWS_AS(negative_energy_pair(sub, sub, best, 1.0, grid, params), Error);
  }
  SUBCASE("asymmetric masses") {
    const double theta0 = theta0_of(1.0, 2.0, params);
    const auto best = maximize(ObjectiveSpec::pi(params, theta0), opts);
    REQUIRE(best.converged);
    const double scale = std::pow(1.5 / sigma_of(1.0, 2.0, best.constant, params), 1.0 / (2.0 - m));
    const auto data = negative_energy_pair(scale, 2.0 * scale, best, 1.0, grid, params);
    CHECK(data.sigma == doctest::Approx(1.5).epsilon(1e-12));
    CHECK(data.F0 < 0.0);
  }
  CHECK_THROWS_AS(negative_energy_pair(1.0, 1.0, MaximizerResult{}, 1.0, grid, Parameters::create(3, 1.3, 1.3)),
                  Error);
}
