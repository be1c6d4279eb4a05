#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "critmass/errors.hpp"
#include "critmass/radial.hpp"
#include "doctest.h"

using namespace critmass;
using std::numbers::pi;

namespace {

RadialDensity sample(const RadialGrid& g, auto&& f) {
  std::vector<double> v(g.size());
  for (std::size_t k = 0; k < g.size(); ++k) v[k] = f(g.center(k));
  return RadialDensity(g, std::move(v));
}

RadialDensity uniform_ball(const RadialGrid& g, double mass, double radius) {
  const double rho = mass / (4.0 / 3.0 * pi * std::pow(radius, 3));
  return sample(g, [&](double r) { return r < radius ? rho : 0.0; });
}

RadialDensity gaussian(const RadialGrid& g, double mass, double sd) {
  auto h = sample(g, [&](double r) { return std::exp(-r * r / (2 * sd * sd)); });
  return h.scaled(mass / h.mass());
}

// Independent O(n^2) oracle: shell theorem for distinct cells, exact shell-pair average inside a cell.
double double_sum_energy(const RadialDensity& a, const RadialDensity& b) {
  const RadialGrid& g = a.grid();
  const int d = g.dim();
  const double sigma = unit_sphere_area(d);
  double sum = 0.0;
  for (std::size_t k = 0; k < g.size(); ++k) {
    for (std::size_t l = 0; l < g.size(); ++l) {
      const double wk = g.volume(k), wl = g.volume(l);
      double kern;
      if (k != l) {
        kern = std::pow(std::max(g.center(k), g.center(l)), 2 - d);
      } else {
        const double lo = g.face(k), hi = g.face(k + 1);
        const double inner = (std::pow(hi, d + 2) - std::pow(lo, d + 2)) / (d + 2) -
                             std::pow(lo, d) * (hi * hi - lo * lo) / 2.0;
        kern = 2.0 * sigma * sigma / (wk * wk * d) * inner;
      }
      sum += a[k] * b[l] * wk * wl * kern;
    }
  }
  return sum;
}

}  // namespace

TEST_CASE("grid geometry") {
  for (int d = 3; d <= 5; ++d) {
    const RadialGrid g(d, 100, 3.0);
    double total = 0.0;
    for (double w : g.volumes()) {
      CHECK(w > 0.0);
      total += w;
    }
    CHECK(total == doctest::Approx(unit_sphere_area(d) / d * std::pow(3.0, d)).epsilon(1e-13));
  }
  CHECK_THROWS_AS(RadialGrid(3, 4, 1.0), Error);
  CHECK_THROWS_AS(RadialDensity(RadialGrid(3, 8, 1.0), std::vector<double>(8, -1.0)), Error);
}

TEST_CASE("lp norms") {
  const RadialGrid g(3, 512, 2.0);
  CHECK(lp_norm(RadialDensity(g), 2.5) == 0.0);
  const auto ball = sample(g, [](double r) { return r < 1.0 ? 1.0 : 0.0; });
  CHECK(lp_norm(ball, 1.0) == doctest::Approx(4.0 * pi / 3.0).epsilon(1e-13));
  const RadialGrid wide(3, 512, 8.0);
  const auto gauss = gaussian(wide, 1.0, 1.0);
  CHECK(lp_norm(gauss, 2.0) == doctest::Approx(std::pow(8.0 * std::pow(pi, 1.5), -0.5)).epsilon(1e-4));
  CHECK_THROWS_AS(lp_norm(gauss, 0.5), Error);
}

TEST_CASE("Newtonian potential") {
  const double cd = 1.0 / (4.0 * pi);
  SUBCASE("zero source") {
    const auto pot = newtonian_potential(RadialDensity(RadialGrid(3, 64, 1.0)), cd);
    for (double x : pot.v) CHECK(x == 0.0);
    for (double x : pot.dv) CHECK(x == 0.0);
  }
  SUBCASE("uniform ball") {
    const RadialGrid g(3, 512, 2.0);
    const auto u = uniform_ball(g, 1.0, 1.0);
    const auto pot = newtonian_potential(u, cd);
    CHECK(pot.v[0] == doctest::Approx(3.0 / (8.0 * pi)).epsilon(2e-3));
    for (std::size_t k = 260; k < g.size(); k += 20)
      CHECK(pot.v[k] == doctest::Approx(1.0 / (4.0 * pi * g.center(k))).epsilon(1e-5));
    for (double x : pot.dv) CHECK(x <= 0.0);
  }
  SUBCASE("narrow Gaussian far field") {
    const std::size_t n = 512, k = 255;
    const RadialGrid g(3, n, n * 2.0 / (k + 0.5));
    REQUIRE(g.center(k) == doctest::Approx(2.0).epsilon(1e-14));
    const auto pot = newtonian_potential(gaussian(g, 1.0, 0.2), cd);
    CHECK(std::abs(pot.v[k] - 1.0 / (8.0 * pi)) < 1e-6);
  }
  SUBCASE("discrete Poisson residual vanishes only for the consistent constant") {
    const RadialGrid g(3, 256, 4.0);
    const auto u = gaussian(g, 2.0, 0.5);
    double ok = 0.0, bad = 0.0;
    for (double x : poisson_residual(u, newtonian_potential(u, cd))) ok += std::abs(x);
    for (double x : poisson_residual(u, newtonian_potential(u, cd * 1.01))) bad += std::abs(x);
    CHECK(ok < 1e-10 * u.mass());
    CHECK(bad > 1e-3 * u.mass());
  }
}

TEST_CASE("interaction energy") {
  const RadialGrid g(3, 512, 2.0);
  const auto ball = uniform_ball(g, 1.0, 1.0);
  CHECK(interaction_energy(ball, RadialDensity(g)) == 0.0);
  CHECK(interaction_energy(ball, ball) == doctest::Approx(1.2).epsilon(2e-3));

  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int d = 3; d <= 5; ++d) {
    const RadialGrid small(d, 200, 4.0);
    const auto a = gaussian(small, 1.0, 0.5 + unit(rng));
    std::vector<double> raw(small.size());
    for (std::size_t k = 0; k < raw.size(); ++k) raw[k] = unit(rng) * std::exp(-small.center(k));
    const RadialDensity b(small, raw);
    const double ab = interaction_energy(a, b), ba = interaction_energy(b, a);
    CHECK(std::abs(ab - ba) <= 1e-12 * std::abs(ab));
    // smooth pair against the independent quadrature
    const auto c = gaussian(small, 2.0, 0.7);
    CHECK(interaction_energy(a, c) == doctest::Approx(double_sum_energy(a, c)).epsilon(2e-3));
  }

  SUBCASE("dilation covariance") {
    const RadialGrid base(3, 256, 4.0);
    const auto h = gaussian(base, 1.0, 0.6);
    const double e0 = interaction_energy(h, h);
    for (double lam : {0.5, 2.0, 3.0}) {
      const auto hl = h.dilated(lam);
      CHECK(interaction_energy(hl, hl) == doctest::Approx(std::pow(lam, 5) * e0).epsilon(1e-12));
    }
  }
  CHECK_THROWS_AS(interaction_energy(ball, RadialDensity(RadialGrid(3, 256, 2.0))), Error);
}

TEST_CASE("second moment") {
  const RadialGrid g(3, 512, 2.0);
  CHECK(second_moment(RadialDensity(g), RadialDensity(g)) == 0.0);
  CHECK(second_moment(uniform_ball(g, 1.0, 1.0), RadialDensity(g)) == doctest::Approx(0.6).epsilon(2e-3));
  const RadialGrid wide(3, 512, 5.0);
  const auto gs = gaussian(wide, 1.0, 0.5);
  CHECK(second_moment(gs, gs) == doctest::Approx(1.5).epsilon(1e-4));
}

TEST_CASE("energy report") {
  const RadialGrid g(3, 512, 2.0);
  const Parameters p = Parameters::create(3, 4.0 / 3.0, 4.0 / 3.0);
  SUBCASE("zero pair") {
    const auto e = free_energy(RadialDensity(g), RadialDensity(g), p);
    CHECK(e.F == 0.0);
    CHECK(e.H == 0.0);
    CHECK(e.S == 0.0);
    CHECK(e.I == 0.0);
    CHECK(dissipation(RadialDensity(g), RadialDensity(g), p) == 0.0);
  }
  SUBCASE("single species is pure diffusion energy") {
    const auto u = uniform_ball(g, 1.0, 1.0);
    const auto e = free_energy(u, RadialDensity(g), p);
    CHECK(e.F == doctest::Approx(power_integral(u, p.m1) / (p.m1 - 1.0)).epsilon(1e-15));
  }
  SUBCASE("uniform balls") {
    const auto u = uniform_ball(g, 1.0, 1.0);
    const auto e = free_energy(u, u, p);
    const double expected = 2.0 * std::cbrt(3.0 / (4.0 * pi)) * 3.0 - p.newton_const * 1.2;
    CHECK(e.F == doctest::Approx(expected).epsilon(1e-3));
    CHECK(e.F == doctest::Approx(free_energy_value(p, e.lm1, e.lm2, e.H)).epsilon(1e-15));
    // at m* the norm coefficient in I vanishes
    CHECK(e.I == doctest::Approx(2.0 * (3 - 2) * e.F).epsilon(1e-13));
  }
  SUBCASE("virial identity off the diagonal") {
    const Parameters q = Parameters::create(3, 1.3, 1.25);
    const RadialGrid wide(3, 256, 5.0);
    const auto a = gaussian(wide, 1.0, 0.5), b = gaussian(wide, 2.0, 0.8);
    const auto e = free_energy(a, b, q);
    const double expected = 2.0 * e.F + 6.0 * ((1.3 - 2.0 + 2.0 / 3.0) / 0.3 * e.lm1 + (1.25 - 2.0 + 2.0 / 3.0) / 0.25 * e.lm2);
    CHECK(e.I == doctest::Approx(expected).epsilon(1e-13));
    CHECK(virial_rate(a, b, q) == doctest::Approx(e.I).epsilon(1e-15));
  }
  SUBCASE("dissipation is nonnegative") {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (int i = 0; i < 20; ++i) {
      std::vector<double> a(g.size()), b(g.size());
      for (std::size_t k = 0; k < g.size(); ++k) {
        a[k] = unit(rng) < 0.8 ? unit(rng) : 0.0;
        b[k] = unit(rng) * std::exp(-g.center(k));
      }
      CHECK(dissipation(RadialDensity(g, a), RadialDensity(g, b), p) >= 0.0);
    }
  }
}
