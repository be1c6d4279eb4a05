#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "critmass/criteria.hpp"
#include "critmass/errors.hpp"
#include "critmass/variational.hpp"
#include "doctest.h"

using namespace critmass;
using std::numbers::pi;

namespace {

const Parameters kCritical = Parameters::create(3, 4.0 / 3.0, 4.0 / 3.0);

// Independent value of the d = 3 single-profile constant from the Lane-Emden equation of index 3:
// the maximizer is theta^3 with theta'' + 2 theta'/x + theta^3 = 0, theta(0) = 1.
double lane_emden_cstar() {
  auto rhs = [](double x, double th, double dth) { return -th * th * th - 2.0 * dth / x; };
  const double h = 1e-5;
  double x = 1e-6, th = 1.0 - x * x / 6.0, dth = -x / 3.0;
  double L = 0.0;  // integral of theta^4 x^2
  while (true) {
    const double k1a = dth, k1b = rhs(x, th, dth);
    const double k2a = dth + 0.5 * h * k1b, k2b = rhs(x + 0.5 * h, th + 0.5 * h * k1a, dth + 0.5 * h * k1b);
    const double k3a = dth + 0.5 * h * k2b, k3b = rhs(x + 0.5 * h, th + 0.5 * h * k2a, dth + 0.5 * h * k2b);
    const double k4a = dth + h * k3b, k4b = rhs(x + h, th + h * k3a, dth + h * k3b);
    const double nth = th + h / 6.0 * (k1a + 2 * k2a + 2 * k3a + k4a);
    const double ndth = dth + h / 6.0 * (k1b + 2 * k2b + 2 * k3b + k4b);
    if (nth <= 0.0) {
      const double frac = th / (th - nth);
      x += frac * h;
      dth += frac * (ndth - dth);
      break;
    }
    L += 0.5 * h * (std::pow(th, 4) * x * x + std::pow(nth, 4) * (x + h) * (x + h));
    x += h;
    th = nth;
    dth = ndth;
  }
  const double M = 4.0 * pi * x * x * std::abs(dth);
  const double Lm = 4.0 * pi * L;
  // The |x|^{-1} potential of theta^3 is 4 pi theta + M / x1 on the support, so
  // H = 4 pi int theta^3 (4 pi theta + M / x1) x^2 dx = 4 pi Lm + M^2 / x1.
  const double Hm = 4.0 * pi * Lm + M * M / x;
  return Hm / (std::cbrt(M * M) * Lm);
}

RadialDensity random_profile(const RadialGrid& g, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<double> v(g.size());
  for (std::size_t k = 0; k < v.size(); ++k) v[k] = u(rng) < 0.7 ? u(rng) * std::exp(-g.center(k)) : 0.0;
  return RadialDensity(g, v);
}

}  // namespace

TEST_CASE("rearrangement") {
  const RadialGrid g(3, 256, 5.0);
  SUBCASE("monotone input is a fixed point") {
    const auto [h, unused] = gaussian_seed(g, 1.0, 1.0);
    const auto r = rearrange_decreasing(h);
    for (std::size_t k = 0; k < g.size(); ++k) CHECK(r[k] == h[k]);
  }
  SUBCASE("norms are preserved") {
    std::mt19937_64 rng(17);
    for (int i = 0; i < 10; ++i) {
      const auto h = random_profile(g, rng);
      for (double p : {2.0, 4.0 / 3.0}) {
        const auto r = rearrange_decreasing(h, p);
        CHECK(is_nonincreasing(r));
        CHECK(r.mass() == doctest::Approx(h.mass()).epsilon(1e-10));
        CHECK(lp_norm(r, p) == doctest::Approx(lp_norm(h, p)).epsilon(1e-10));
      }
    }
  }
  SUBCASE("annulus collapses to a ball of equal volume") {
    const RadialGrid small(3, 16, 2.0);
    std::vector<double> v(16, 0.0);
    for (std::size_t k = 4; k < 8; ++k) v[k] = 1.0;
    const auto avg = layer_cake_average(RadialDensity(small, v));
    for (std::size_t k = 0; k < 7; ++k) CHECK(avg[k] == doctest::Approx(1.0).epsilon(1e-14));
    // 448 volume units fill cells 0..6 (343) and 105 of the 169 in cell 7
    CHECK(avg[7] == doctest::Approx(105.0 / 169.0).epsilon(1e-14));
    for (std::size_t k = 8; k < 16; ++k) CHECK(avg[k] == 0.0);
  }
}

TEST_CASE("objective invariances") {
  const RadialGrid g(3, 256, 8.0);
  const auto [h1, h2] = gaussian_seed(g, 0.8, 1.3);
  const Parameters q = Parameters::create(3, 1.3, 1.25);
  for (const ObjectiveSpec& spec : {ObjectiveSpec::lambda(q), ObjectiveSpec::pi(kCritical, 0.3),
                                    ObjectiveSpec::cstar(kCritical)}) {
    const double w = objective_value(spec, h1, h2);
    for (double a : {0.5, 2.0})
      for (double b : {0.5, 2.0})
        for (double lam : {0.5, 2.0})
          CHECK(objective_value(spec, h1.scaled(a).dilated(lam), h2.scaled(b).dilated(lam)) ==
                doctest::Approx(w).epsilon(1e-8));
  }
}

TEST_CASE("normalization") {
  const RadialGrid g(3, 256, 8.0);
  const auto [h1, h2] = gaussian_seed(g, 0.8, 1.3);
  const Parameters q = Parameters::create(3, 1.3, 1.25);
  const ObjectiveSpec lam = ObjectiveSpec::lambda(q);
  const ObjectiveSpec pis = ObjectiveSpec::pi(kCritical, 0.3);
  const ObjectiveSpec cs = ObjectiveSpec::cstar(kCritical);

  SUBCASE("Lambda slice") {
    const auto n = normalize_pair({h1, h2}, lam);
    CHECK(lp_norm(n.h1, q.m1) == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(lp_norm(n.h2, q.m2) == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(std::pow(n.h1.mass(), lam.alpha) * std::pow(n.h2.mass(), lam.beta) == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(n.objective == doctest::Approx(interaction_energy(n.h1, n.h2)).epsilon(1e-12));
    const auto again = normalize_pair(n, lam);
    CHECK(again.mu == doctest::Approx(1.0).epsilon(1e-12));
    for (std::size_t k = 0; k < g.size(); k += 17) CHECK(again.h1[k] == doctest::Approx(n.h1[k]).epsilon(1e-12));
  }
  SUBCASE("Pi slice") {
    const auto n = normalize_pair({h1, h2}, pis);
    const double m = kCritical.m_star();
    CHECK(n.h1.mass() == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(n.h2.mass() == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(0.3 * power_integral(n.h1, m) + 0.7 * power_integral(n.h2, m) == doctest::Approx(1.0).epsilon(1e-10));
  }
  SUBCASE("single-profile slice") {
    const auto n = normalize_pair({h1, h2}, cs);
    CHECK(n.h1.mass() == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(lp_norm(n.h1, kCritical.m_star()) == doctest::Approx(1.0).epsilon(1e-10));
  }
  SUBCASE("amplitude changes leave the objective alone") {
    for (const ObjectiveSpec& spec : {lam, pis}) {
      const double before = objective_value(spec, h1.scaled(2.0), h2.scaled(3.0));
      const auto n = normalize_pair({h1.scaled(2.0), h2.scaled(3.0)}, spec);
      CHECK(n.objective == doctest::Approx(before).epsilon(1e-10));
    }
  }
  CHECK_THROWS_AS(normalize_pair({RadialDensity(g), h2}, lam), Error);
}

TEST_CASE("objective descriptions are validated") {
  const Parameters q = Parameters::create(3, 1.3, 1.25);
  CHECK_THROWS_AS(ObjectiveSpec::lambda(q, 0.1, 0.1), Error);
  CHECK_THROWS_AS(ObjectiveSpec::lambda(q, -0.1, beta_for_alpha(q, -0.1)), Error);
  CHECK_THROWS_AS(ObjectiveSpec::pi(q, 0.5), Error);
  CHECK_THROWS_AS(ObjectiveSpec::pi(kCritical, 1.0), Error);
  CHECK_THROWS_AS(ObjectiveSpec::cstar(q), Error);
}

TEST_CASE("single-profile constant against the Lane-Emden value") {
  const double oracle = lane_emden_cstar();
  CHECK(oracle == doctest::Approx(2.18363).epsilon(1e-5));
  MaximizeOptions o;
  o.cells = 256;
  const auto est = estimate_constant(ObjectiveSpec::cstar(kCritical), o, 1, 1);
  CHECK(est.converged);
  CHECK(std::abs(est.best.constant - oracle) <= est.error_bar);
  CHECK(est.extrapolated == doctest::Approx(oracle).epsilon(2e-5));
  const auto& r = est.best;
  CHECK(r.h1.mass() == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(lp_norm(r.h1, kCritical.m_star()) == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(r.constant == doctest::Approx(interaction_energy(r.h1, r.h1)).epsilon(1e-12));
  for (double gain : r.gains) CHECK(gain >= 0.0);
}

TEST_CASE("two-species constants") {
  MaximizeOptions o;
  o.cells = 256;
  const auto cstar = maximize(ObjectiveSpec::cstar(kCritical), o);
  const auto half = maximize(ObjectiveSpec::pi(kCritical, 0.5), o);
  CHECK(half.converged);
  CHECK(half.constant == doctest::Approx(cstar.constant).epsilon(1e-2));
  for (double t : {0.3, 0.7}) {
    const auto r = maximize(ObjectiveSpec::pi(kCritical, t), o);
    CHECK(r.converged);
    CHECK(r.constant >= cstar.constant);
    for (double gain : r.gains) CHECK(gain >= 0.0);
  }
  SUBCASE("Lambda beats its Gaussian seed and the single-profile constant") {
    for (double alpha : {0.2, 1.0 / 3.0, 0.5}) {
      const auto spec = ObjectiveSpec::lambda(kCritical, alpha, beta_for_alpha(kCritical, alpha));
      const auto r = maximize(spec, o);
      CHECK(r.constant >= r.seed_objective);
      CHECK(r.constant >= cstar.constant * (1.0 - 1e-7));  // equality at alpha = 1/3
    }
    const Parameters q = Parameters::create(3, 1.3, 1.25);
    const auto r = maximize(ObjectiveSpec::lambda(q), o);
    CHECK(r.converged);
    CHECK(r.constant >= r.seed_objective);
  }
  SUBCASE("tighter tolerance barely moves the constant") {
    MaximizeOptions tight = o;
    tight.tol = 1e-13;
    tight.max_iter = 200;
    const auto r = maximize(ObjectiveSpec::pi(kCritical, 0.3), tight);
    const auto loose = maximize(ObjectiveSpec::pi(kCritical, 0.3), o);
    CHECK(r.constant == doctest::Approx(loose.constant).epsilon(1e-8));
  }
}

TEST_CASE("multi-seed estimates are reproducible") {
  MaximizeOptions o;
  o.cells = 128;
  const auto a = estimate_constant(ObjectiveSpec::pi(kCritical, 0.3), o, 3, 42);
  const auto b = estimate_constant(ObjectiveSpec::pi(kCritical, 0.3), o, 3, 42);
  CHECK(a.best.constant == b.best.constant);
  CHECK(a.fine == b.fine);
  CHECK(a.seeds == 3);
  CHECK(std::abs(a.best.constant - a.fine) <= a.error_bar);
}
