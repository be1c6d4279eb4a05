#pragma once

#include <variant>

#include "critmass/radial.hpp"
#include "critmass/variational.hpp"

namespace critmass {

struct Gaussian {
  double sigma = 1.0;
};

struct Ball {
  double radius = 1.0;
};

// Self-similar solution of u_t = Laplacian(u^m) evaluated at time t0.
struct Barenblatt {
  double m = 2.0;
  double t0 = 1.0;
};

// x -> lambda * profile(mu * x) with lambda fixed by the requested mass.
struct RescaledMaximizer {
  double mu = 1.0;
  RadialDensity profile;
};

using DataFamily = std::variant<Gaussian, Ball, Barenblatt, RescaledMaximizer>;

struct DataSpec {
  DataFamily family;
  double mass = 1.0;

  void validate() const;
};

// Cell averages of the family on grid, renormalized to the exact mass.
// Throws SupportTooLarge when the datum does not fit inside r_max / 2.
RadialDensity make(const DataSpec& spec, const RadialGrid& grid);

struct BarenblattShape {
  double time_exponent;  // profile decays like t^{-time_exponent}
  double k;              // coefficient of |x|^2 t^{-2 time_exponent / d}
  double height;         // constant C fixed by the mass
  // Radius of the support at time t.
  double support_radius(double t, int dim) const;
};

BarenblattShape barenblatt_shape(int dim, double m, double mass);

struct NegativeEnergyData {
  RadialDensity u1;
  RadialDensity u2;
  double F0 = 0.0;
  double sigma = 0.0;
};

// Rescales a maximizing pair to masses (M1, M2): u_i(x) = lambda_i h_i(mu x), lambda_i = M_i mu^d / |h_i|_1.
// The maximizer must belong to the problem at theta0 of (M1, M2); its constant enters Sigma.
// Throws SubcriticalMasses if Sigma <= 1 and OutOfRange if the discrete data still has F0 >= 0.
NegativeEnergyData negative_energy_pair(double M1, double M2, const MaximizerResult& maximizer, double mu,
                                        const RadialGrid& grid, const Parameters& params);

}  // namespace critmass
