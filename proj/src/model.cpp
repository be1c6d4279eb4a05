#include "critmass/model.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "critmass/errors.hpp"

namespace critmass {

namespace {

bool near(double a, double b, double tol) { return std::abs(a - b) <= tol * std::max(1.0, std::abs(b)); }

}  // namespace

double unit_sphere_area(int dim) {
  const double half = 0.5 * dim;
  return 2.0 * std::pow(std::numbers::pi, half) / std::tgamma(half);
}

Parameters Parameters::create(int dim, double m1, double m2, std::optional<double> newton_const) {
  if (dim < 3) throw Error(ErrorKind::InvalidSpec, "dimension must be >= 3, got " + std::to_string(dim));
  if (!(m1 > 1.0) || !(m2 > 1.0) || !std::isfinite(m1) || !std::isfinite(m2))
    throw Error(ErrorKind::InvalidSpec, "diffusion exponents must exceed 1");
  Parameters p;
  p.dim = dim;
  p.m1 = m1;
  p.m2 = m2;
  p.newton_const = newton_const.value_or(1.0 / ((dim - 2) * unit_sphere_area(dim)));
  if (!(p.newton_const > 0.0) || !std::isfinite(p.newton_const))
    throw Error(ErrorKind::InvalidSpec, "Newtonian constant must be positive");
  return p;
}

bool Parameters::at_intersection(double tol) const noexcept {
  return near(m1, m_star(), tol) && near(m2, m_star(), tol);
}

ScalingExponents scaling_exponents(const Parameters& params) {
  const double m1 = params.m1;
  const double m2 = params.m2;
  const double d = params.dim;
  const double gap = m1 + m2 - m1 * m2;
  if (std::abs(gap) < 1e-14) throw Error(ErrorKind::DegenerateExponents, "m1 + m2 == m1 * m2");
  return {d * gap / (2.0 * m2), d * gap / (2.0 * m1), (1.0 + 2.0 / d) * m1 * m2 / (m1 + m2)};
}

std::string_view to_string(Regime regime) noexcept {
  switch (regime) {
    case Regime::Subcritical: return "Subcritical";
    case Regime::CriticalL1: return "CriticalL1";
    case Regime::CriticalL2: return "CriticalL2";
    case Regime::Intersection: return "Intersection";
    case Regime::RegionOneSix: return "RegionOneSix";
    case Regime::Supercritical: return "Supercritical";
  }
  return "Unknown";
}

RegimeLabel classify_regime(const Parameters& params, double tol) {
  const ScalingExponents e = scaling_exponents(params);
  const double ms = params.m_star();
  const double half_d = 0.5 * params.dim;
  const double m1 = params.m1;
  const double m2 = params.m2;
  const double slack = tol * std::max(1.0, ms);

  auto label = [&](Regime r) { return RegimeLabel{r, e}; };

  if (params.at_intersection(tol)) return label(Regime::Intersection);
  // L1: q = 1 with m1 in [m*, d/2), m2 in (1, m*].
  if (near(e.q, 1.0, tol) && m1 >= ms - slack && m1 < half_d && m2 <= ms + slack)
    return label(Regime::CriticalL1);
  if (near(e.p, 1.0, tol) && m2 >= ms - slack && m2 < half_d && m1 <= ms + slack)
    return label(Regime::CriticalL2);
  if (e.p < 1.0 || e.q < 1.0) return label(Regime::Subcritical);
  if (e.r > 1.0) return label(Regime::RegionOneSix);
  return label(Regime::Supercritical);
}

bool admits_sharp_criteria(const Parameters& params, double tol) {
  const RegimeLabel l = classify_regime(params, tol);
  return l.regime == Regime::RegionOneSix || l.regime == Regime::CriticalL1 ||
         l.regime == Regime::CriticalL2 || l.regime == Regime::Intersection;
}

double balance_rhs(const Parameters& params) noexcept {
  return 1.0 + 2.0 / params.dim - 1.0 / params.m1 - 1.0 / params.m2;
}

double alpha_upper(const Parameters& params) noexcept { return params.m1 / (params.m1 - 1.0) * balance_rhs(params); }

double beta_upper(const Parameters& params) noexcept { return params.m2 / (params.m2 - 1.0) * balance_rhs(params); }

double beta_for_alpha(const Parameters& params, double alpha) noexcept {
  return (balance_rhs(params) - (params.m1 - 1.0) / params.m1 * alpha) * params.m2 / (params.m2 - 1.0);
}

double default_alpha(const Parameters& params) noexcept { return 0.5 * alpha_upper(params); }

void check_alpha_beta(const Parameters& params, double alpha, double beta, double tol) {
  const double rhs = balance_rhs(params);
  if (!(rhs > 0.0)) throw Error(ErrorKind::InvalidSpec, "exponents leave no admissible alpha");
  if (!(alpha > 0.0 && alpha < alpha_upper(params)))
    throw Error(ErrorKind::InvalidSpec, "alpha outside (0, " + std::to_string(alpha_upper(params)) + ")");
  if (!(beta > 0.0 && beta < beta_upper(params)))
    throw Error(ErrorKind::InvalidSpec, "beta outside (0, " + std::to_string(beta_upper(params)) + ")");
  const double lhs = (params.m1 - 1.0) / params.m1 * alpha + (params.m2 - 1.0) / params.m2 * beta;
  if (std::abs(lhs - rhs) > tol * std::max(1.0, std::abs(rhs)))
    throw Error(ErrorKind::InvalidSpec, "alpha and beta violate the balance relation");
}

double homogeneity_sum(const Parameters& params, double alpha, double beta) noexcept {
  return (1.0 - alpha) / params.m1 + (1.0 - beta) / params.m2;
}

}  // namespace critmass
