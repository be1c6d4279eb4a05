#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "critmass/solver.hpp"
#include "critmass/variational.hpp"

namespace critmass {

struct Check {
  std::string section;
  std::string name;
  bool passed = false;
  std::string detail;
};

struct BatteryConfig {
  std::optional<double> newton_const;  // overrides the PDE-consistent value
  std::size_t cells = 512;              // resolution of constants and oracles
  std::size_t seeds = 4;                // maximizer seeds per constant
  std::uint64_t rng_seed = 1;
};

// Runs of the two-species system at d = 3, m1 = m2 = m* on both sides of the critical mass.
struct DichotomyRun {
  std::size_t cells = 0;
  double mass = 0.0;  // per species
  Trajectory traj;
};

struct DichotomyRuns {
  double critical_mass = 0.0;
  std::vector<DichotomyRun> subcritical;   // 0.5 x critical mass, gaussian data
  std::vector<DichotomyRun> supercritical; // 1.5 x critical mass, negative-energy data
};

// Property battery shared by `critmass verify` and the acceptance report. Expensive
// intermediate results (constant estimates, maximizers, simulations) are computed once.
class Battery {
 public:
  explicit Battery(BatteryConfig cfg);
  ~Battery();
  Battery(const Battery&) = delete;
  Battery& operator=(const Battery&) = delete;

  static const std::vector<std::string>& section_names();

  std::vector<Check> invariants();
  std::vector<Check> conservation();     // structure of every acceptance simulation
  std::vector<Check> oracles();          // closed-form solutions
  std::vector<Check> constants();        // orderings of the sharp constants
  std::vector<Check> dichotomy();        // outcome of the critical-mass experiment
  std::vector<Check> theorem12();        // off-intersection bookkeeping
  std::vector<Check> negative_energy();  // negative-energy data construction

  // Throws ConfigInvalid for an unknown section name.
  std::vector<Check> section(const std::string& name);

  const Parameters& params() const noexcept { return params_; }
  const DichotomyRuns& dichotomy_runs();
  const ConstantEstimate& cstar();

 private:
  struct Cache;
  BatteryConfig cfg_;
  Parameters params_;
  std::unique_ptr<Cache> cache_;
};

}  // namespace critmass
