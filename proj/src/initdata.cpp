#include "critmass/initdata.hpp"

#include <boost/math/special_functions/beta.hpp>
#include <boost/math/special_functions/gamma.hpp>
#include <cmath>
#include <functional>

#include "critmass/criteria.hpp"
#include "critmass/errors.hpp"

namespace critmass {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};

RadialDensity renormalized(const RadialDensity& h, double mass) {
  const double current = h.mass();
  if (!(current > 0.0)) throw Error(ErrorKind::ZeroProfile, "datum has no mass on the grid");
  return h.scaled(mass / current);
}

// Cell averages from an enclosed-mass function, then exact renormalization.
RadialDensity from_enclosed(const RadialGrid& grid, const std::function<double(double)>& enclosed, double mass) {
  std::vector<double> values(grid.size());
  double prev = enclosed(0.0);
  for (std::size_t k = 0; k < grid.size(); ++k) {
    const double next = enclosed(grid.face(k + 1));
    values[k] = std::max(0.0, next - prev) / grid.volume(k);
    prev = next;
  }
  return renormalized(RadialDensity(grid, std::move(values)), mass);
}

void require_fits(double radius, const RadialGrid& grid) {
  if (radius > 0.5 * grid.r_max())
    throw Error(ErrorKind::SupportTooLarge, "datum support exceeds half the domain");
}

RadialDensity gaussian(const Gaussian& g, double mass, const RadialGrid& grid) {
  const double half_dim = 0.5 * grid.dim();
  const auto fraction = [&](double R) { return boost::math::gamma_p(half_dim, R * R / (2.0 * g.sigma * g.sigma)); };
  if (boost::math::gamma_q(half_dim, std::pow(0.5 * grid.r_max() / g.sigma, 2) / 2.0) > 1e-12)
    throw Error(ErrorKind::SupportTooLarge, "gaussian tail beyond half the domain exceeds 1e-12");
  return from_enclosed(grid, [&](double R) { return mass * fraction(R); }, mass);
}

RadialDensity ball(const Ball& b, double mass, const RadialGrid& grid) {
  require_fits(b.radius, grid);
  const int d = grid.dim();
  return from_enclosed(grid, [&](double R) { return mass * std::pow(std::min(R, b.radius) / b.radius, d); }, mass);
}

RadialDensity barenblatt(const Barenblatt& b, double mass, const RadialGrid& grid) {
  const int d = grid.dim();
  const BarenblattShape shape = barenblatt_shape(d, b.m, mass);
  const double edge = shape.support_radius(b.t0, d);
  require_fits(edge, grid);
  const double p = 1.0 / (b.m - 1.0);
  return from_enclosed(grid,
                       [&](double R) {
                         const double x = std::min(1.0, std::pow(R / edge, 2));
                         return mass * boost::math::ibeta(0.5 * d, p + 1.0, x);
                       },
                       mass);
}

RadialDensity rescaled(const RescaledMaximizer& r, double mass, const RadialGrid& grid) {
  const double lambda = mass * std::pow(r.mu, grid.dim()) / r.profile.mass();
  const RadialDensity image = resample(r.profile.dilated(1.0 / r.mu).scaled(lambda), grid);
  double outside = 0.0;
  for (std::size_t k = grid.size() / 2; k < grid.size(); ++k) outside += image[k] * grid.volume(k);
  if (outside > 1e-12 * image.mass())
    throw Error(ErrorKind::SupportTooLarge, "rescaled profile carries mass beyond half the domain");
  return renormalized(image, mass);
}

}  // namespace

void DataSpec::validate() const {
  if (!(mass > 0.0) || !std::isfinite(mass)) throw Error(ErrorKind::InvalidSpec, "mass must be positive");
  std::visit(Overloaded{
                 [](const Gaussian& g) {
                   if (!(g.sigma > 0.0)) throw Error(ErrorKind::InvalidSpec, "gaussian width must be positive");
                 },
                 [](const Ball& b) {
                   if (!(b.radius > 0.0)) throw Error(ErrorKind::InvalidSpec, "ball radius must be positive");
                 },
                 [](const Barenblatt& b) {
                   if (!(b.m > 1.0) || !(b.t0 > 0.0))
                     throw Error(ErrorKind::InvalidSpec, "barenblatt needs m > 1 and t0 > 0");
                 },
                 [](const RescaledMaximizer& r) {
                   if (!(r.mu > 0.0)) throw Error(ErrorKind::InvalidSpec, "rescaling factor must be positive");
                   if (r.profile.is_zero()) throw Error(ErrorKind::ZeroProfile, "rescaled profile is zero");
                 },
             },
             family);
}

RadialDensity make(const DataSpec& spec, const RadialGrid& grid) {
  spec.validate();
  return std::visit(Overloaded{
                        [&](const Gaussian& g) { return gaussian(g, spec.mass, grid); },
                        [&](const Ball& b) { return ball(b, spec.mass, grid); },
                        [&](const Barenblatt& b) { return barenblatt(b, spec.mass, grid); },
                        [&](const RescaledMaximizer& r) { return rescaled(r, spec.mass, grid); },
                    },
                    spec.family);
}

double BarenblattShape::support_radius(double t, int dim) const {
  return std::sqrt(height / k) * std::pow(t, time_exponent / dim);
}

BarenblattShape barenblatt_shape(int dim, double m, double mass) {
  if (!(m > 1.0)) throw Error(ErrorKind::InvalidSpec, "barenblatt needs m > 1");
  const double a = dim / (dim * (m - 1.0) + 2.0);
  const double k = (m - 1.0) * a / (2.0 * m * dim);
  const double p = 1.0 / (m - 1.0);
  // mass = (sigma/2) C^{p + d/2} k^{-d/2} B(d/2, p + 1)
  const double unit = 0.5 * unit_sphere_area(dim) * std::pow(k, -0.5 * dim) * boost::math::beta(0.5 * dim, p + 1.0);
  return {a, k, std::pow(mass / unit, 1.0 / (p + 0.5 * dim))};
}

NegativeEnergyData negative_energy_pair(double M1, double M2, const MaximizerResult& maximizer, double mu,
                                        const RadialGrid& grid, const Parameters& params) {
  if (!params.at_intersection()) throw Error(ErrorKind::IntersectionRequired, "construction needs m1 = m2 = m*");
  if (!(M1 > 0.0 && M2 > 0.0 && mu > 0.0)) throw Error(ErrorKind::InvalidSpec, "masses and mu must be positive");
  const double sigma = sigma_of(M1, M2, maximizer.constant, params);
  if (!(sigma > 1.0)) throw Error(ErrorKind::SubcriticalMasses, "Sigma <= 1: negative energy not guaranteed");
  NegativeEnergyData out;
  out.sigma = sigma;
  out.u1 = make({RescaledMaximizer{mu, maximizer.h1}, M1}, grid);
  out.u2 = make({RescaledMaximizer{mu, maximizer.h2}, M2}, grid);
  out.F0 = free_energy(out.u1, out.u2, params).F;
  if (!(out.F0 < 0.0)) throw Error(ErrorKind::OutOfRange, "discrete data does not reach negative energy");
  return out;
}

}  // namespace critmass
