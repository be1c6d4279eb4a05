#pragma once

#include <optional>
#include <string_view>

namespace critmass {

// Surface area of the unit sphere in R^dim.
double unit_sphere_area(int dim);

// Dimension, diffusion exponents and the Newtonian normalization.
// The default newton_const makes c*|x|^{2-d} the fundamental solution of -Laplace;
// it can be overridden to study (or inject) a different convention.
struct Parameters {
  int dim = 3;
  double m1 = 4.0 / 3.0;
  double m2 = 4.0 / 3.0;
  double newton_const = 0.0;

  // Validates dim >= 3, m_i > 1 and fills newton_const unless overridden.
  static Parameters create(int dim, double m1, double m2,
                           std::optional<double> newton_const = std::nullopt);

  double m_star() const noexcept { return 2.0 - 2.0 / dim; }
  double m_lower() const noexcept { return 2.0 * dim / (dim + 2.0); }
  double sphere_area() const { return unit_sphere_area(dim); }
  double exponent(int species) const noexcept { return species == 0 ? m1 : m2; }
  bool at_intersection(double tol = 1e-10) const noexcept;
};

struct ScalingExponents {
  double p = 0.0;
  double q = 0.0;
  double r = 0.0;
};

ScalingExponents scaling_exponents(const Parameters& params);

enum class Regime { Subcritical, CriticalL1, CriticalL2, Intersection, RegionOneSix, Supercritical };

std::string_view to_string(Regime regime) noexcept;

struct RegimeLabel {
  Regime regime = Regime::Subcritical;
  ScalingExponents exponents;
};

// Boundaries within tol (relative) get the critical label. Points on the
// p=1 / q=1 curves outside their segments fall through to the open regions.
RegimeLabel classify_regime(const Parameters& params, double tol = 1e-10);

// p >= 1, q >= 1, r > 1, which includes the two critical segments and the intersection.
bool admits_sharp_criteria(const Parameters& params, double tol = 1e-10);

// Right-hand side of the alpha/beta balance: 1 + 2/d - 1/m1 - 1/m2.
double balance_rhs(const Parameters& params) noexcept;
// Open interval (0, upper) allowed for alpha; beta_upper is the mirror bound.
double alpha_upper(const Parameters& params) noexcept;
double beta_upper(const Parameters& params) noexcept;
// beta solving (m1-1)/m1 alpha + (m2-1)/m2 beta = balance_rhs.
double beta_for_alpha(const Parameters& params, double alpha) noexcept;
// Midpoint of the alpha interval.
double default_alpha(const Parameters& params) noexcept;
// Throws InvalidSpec unless alpha, beta lie in their intervals and satisfy the balance to tol.
void check_alpha_beta(const Parameters& params, double alpha, double beta, double tol = 1e-12);
// (1-alpha)/m1 + (1-beta)/m2.
double homogeneity_sum(const Parameters& params, double alpha, double beta) noexcept;

}  // namespace critmass
