#pragma once

#include <cstddef>
#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "critmass/model.hpp"

namespace critmass {

// Uniform cell-centred grid on [0, r_max]. Cheap to copy; geometry is shared and immutable.
class RadialGrid {
 public:
  RadialGrid() : RadialGrid(3, 8, 1.0) {}
  RadialGrid(int dim, std::size_t cells, double r_max);

  int dim() const noexcept { return geo_->dim; }
  std::size_t size() const noexcept { return geo_->volumes.size(); }
  double dr() const noexcept { return geo_->dr; }
  double r_max() const noexcept { return geo_->dr * static_cast<double>(size()); }
  double center(std::size_t k) const noexcept { return (static_cast<double>(k) + 0.5) * geo_->dr; }
  double face(std::size_t k) const noexcept { return static_cast<double>(k) * geo_->dr; }
  double volume(std::size_t k) const noexcept { return geo_->volumes[k]; }
  std::span<const double> volumes() const noexcept { return geo_->volumes; }
  // Sphere area times face^{d-1}, for faces 0..n.
  double face_area(std::size_t k) const noexcept { return geo_->face_areas[k]; }

  // Same cell count, radii multiplied by factor.
  RadialGrid dilated(double factor) const;

  bool same_as(const RadialGrid& other) const noexcept;

 private:
  struct Geometry {
    int dim;
    double dr;
    std::vector<double> volumes;
    std::vector<double> face_areas;
  };
  std::shared_ptr<const Geometry> geo_;
};

// Nonnegative piecewise-constant radial profile.
class RadialDensity {
 public:
  RadialDensity() : RadialDensity(RadialGrid()) {}
  explicit RadialDensity(RadialGrid grid);
  RadialDensity(RadialGrid grid, std::vector<double> values);

  const RadialGrid& grid() const noexcept { return grid_; }
  std::span<const double> values() const noexcept { return values_; }
  double operator[](std::size_t k) const noexcept { return values_[k]; }
  std::size_t size() const noexcept { return values_.size(); }

  double mass() const;
  double max() const;
  bool is_zero() const;
  // Index one past the last cell holding a value above rel_floor * max.
  std::size_t support_end(double rel_floor = 0.0) const;

  RadialDensity scaled(double factor) const;
  // Same values carried onto grid().dilated(factor), i.e. x -> h(x / factor).
  RadialDensity dilated(double factor) const;

 private:
  RadialGrid grid_;
  std::vector<double> values_;
};

struct PotentialProfile {
  RadialGrid grid;
  std::vector<double> v;   // per cell
  std::vector<double> dv;  // per face, dv[0] = 0
};

// sum values^p * w, i.e. the p-th power of the L^p norm.
double power_integral(const RadialDensity& h, double p);
double lp_norm(const RadialDensity& h, double p);

// v = newton_const * |x|^{2-d} * u, integrated inward from the exact monopole far field.
PotentialProfile newtonian_potential(const RadialDensity& u, double newton_const);

// Potential of kernel |x|^{2-d} (no normalization) in cell values; O(n).
std::vector<double> coulomb_potential(const RadialDensity& u);

// Double integral of h1 h2 / |x - y|^{d-2}.
double interaction_energy(const RadialDensity& h1, const RadialDensity& h2);

// Discrete Poisson residual per cell: flux divergence of v' plus u, scaled by w_k.
// Uses the true sphere area, so an inconsistent newton_const shows up here.
std::vector<double> poisson_residual(const RadialDensity& u, const PotentialProfile& pot);

double second_moment(const RadialDensity& u1, const RadialDensity& u2);

struct EnergyReport {
  double M1 = 0.0;
  double M2 = 0.0;
  double lm1 = 0.0;  // integral of u1^{m1}
  double lm2 = 0.0;  // integral of u2^{m2}
  double H = 0.0;
  double F = 0.0;
  std::optional<double> D;
  double S = 0.0;
  double I = 0.0;
};

// F and I from their definitions given the raw integrals.
double free_energy_value(const Parameters& params, double lm1, double lm2, double H);
double virial_value(const Parameters& params, double F, double lm1, double lm2);

EnergyReport free_energy(const RadialDensity& u1, const RadialDensity& u2, const Parameters& params);
double dissipation(const RadialDensity& u1, const RadialDensity& u2, const Parameters& params);
double virial_rate(const RadialDensity& u1, const RadialDensity& u2, const Parameters& params);

// Cell averages of h (a function of physical radius, zero beyond its grid) over the target cells.
// Mass inside the target domain is preserved exactly.
RadialDensity resample(const RadialDensity& h, const RadialGrid& target);

void require_same_grid(const RadialDensity& a, const RadialDensity& b);

}  // namespace critmass
