#pragma once

#include <cstddef>
#include <string_view>
#include <vector>

#include "critmass/radial.hpp"

namespace critmass {

struct SolverConfig {
  Parameters params;
  RadialGrid grid;
  double epsilon = 0.0;  // 0 integrates the unregularized system
  double dt_init = 1e-3;
  double dt_min = 1e-12;
  double t_end = 1.0;
  double cfl = 0.4;
  double blowup_linf_factor = 1e4;
  std::size_t diag_every = 10;

  // Throws ConfigInvalid.
  void validate() const;
};

struct SimState {
  double t = 0.0;
  RadialDensity u1;
  RadialDensity u2;
  std::size_t step_count = 0;
};

enum class StopReason { TimeReached, BlowUpDetected, SteadyState, StepUnderflow };

std::string_view to_string(StopReason reason) noexcept;

struct Sample {
  double t = 0.0;
  EnergyReport energy;
  double linf1 = 0.0;
  double linf2 = 0.0;
  double dt = 0.0;
};

struct Trajectory {
  std::vector<Sample> samples;
  SimState final_state;
  StopReason stop_reason = StopReason::TimeReached;
  double mass_drift = 0.0;    // max relative mass change over species and time
  double clipped_mass = 0.0;  // total mass removed by clipping negative values
  std::size_t energy_violations = 0;
  double max_energy_increase = 0.0;  // largest single-step rise of F
  double energy_tolerance = 0.0;     // per-step slack used for counting violations
  std::size_t steps = 0;

  bool free_energy_nonincreasing() const noexcept { return energy_violations == 0; }
  // A detected blow-up is a numerical signature, never a proof.
  bool blowup_is_proxy() const noexcept { return stop_reason == StopReason::BlowUpDetected; }
  // max |dS/dt - I| / |I| over consecutive samples, with I averaged over the window.
  double virial_residual() const;
};

struct CflBounds {
  double diffusive;  // dr^2 / (2 d max m (u + eps)^{m-1})
  double transport;  // dr / (2 d max |face velocity|)
};

// Cell-to-cell radial convolution by J_eps with columns scaled to conserve each shell's mass.
// Row-major n x n, entry (k, l) maps u_l to (J_eps * u)_k.
std::vector<double> mollifier_matrix(const RadialGrid& grid, double epsilon);

// Finite-volume scheme for the gradient-flow form: flux_i = -(u_i + eps) d/dr xi_i with
// xi_i = m_i/(m_i - 1) (u_i + eps)^{m_i - 1} - v_j, mobility upwinded on the sign of the face velocity.
class Stepper {
 public:
  explicit Stepper(SolverConfig cfg);

  const SolverConfig& config() const noexcept { return cfg_; }

  struct Drift {
    std::vector<double> velocity1;  // per face, positive outward
    std::vector<double> velocity2;
  };
  Drift drift(const SimState& state) const;

  CflBounds bounds(const SimState& state, const Drift& drift) const;
  double stable_dt(const SimState& state, const Drift& drift) const;

  // One forward Euler step. Clipped mass is added to *clipped when given. Throws NonFiniteState.
  SimState advance(const SimState& state, const Drift& drift, double dt, double* clipped = nullptr) const;

  // Potentials (v1, v2) driving the other species; mollified when epsilon > 0.
  std::pair<std::vector<double>, std::vector<double>> potentials(const SimState& state) const;

 private:
  std::vector<double> potential(const RadialDensity& u) const;

  SolverConfig cfg_;
  std::vector<double> mollifier_;
};

SimState step(const SimState& state, const SolverConfig& cfg, double dt);
CflBounds cfl_bounds(const SimState& state, const SolverConfig& cfg);
double cfl_dt(const SimState& state, const SolverConfig& cfg);

// Throws ConfigInvalid; NonFiniteState propagates from the scheme.
Trajectory run(const RadialDensity& u1_0, const RadialDensity& u2_0, const SolverConfig& cfg);

}  // namespace critmass
