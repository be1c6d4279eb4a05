#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string_view>
#include <utility>
#include <vector>

#include "critmass/model.hpp"
#include "critmass/radial.hpp"

namespace critmass {

enum class ObjectiveKind { Lambda, Pi, CStar };

std::string_view to_string(ObjectiveKind kind) noexcept;

struct ObjectiveSpec {
  ObjectiveKind kind = ObjectiveKind::CStar;
  Parameters params;
  double alpha = 0.0;   // Lambda only
  double beta = 0.0;    // Lambda only
  double theta0 = 0.5;  // Pi only

  static ObjectiveSpec lambda(const Parameters& params, double alpha, double beta);
  // alpha at the midpoint of its interval, beta from the balance relation.
  static ObjectiveSpec lambda(const Parameters& params);
  static ObjectiveSpec pi(const Parameters& params, double theta0);
  static ObjectiveSpec cstar(const Parameters& params);

  // Throws InvalidSpec.
  void validate() const;
};

// Scale-invariant ratio of the problem; for CStar both arguments are used through the
// symmetric two-profile form whose diagonal is the single-profile quotient.
double objective_value(const ObjectiveSpec& spec, const RadialDensity& h1, const RadialDensity& h2);

// Single-profile quotient H[h,h] / (|h|_1^{2/d} |h|_{m*}^{m*}).
double cstar_quotient(const Parameters& params, const RadialDensity& h);

bool is_nonincreasing(const RadialDensity& h);

// Equimeasurable reordering averaged onto the grid in the volume coordinate. Exact in L^1.
RadialDensity layer_cake_average(const RadialDensity& h);

// Non-increasing rearrangement. Already monotone input is returned unchanged; otherwise the
// layer-cake average is corrected by a power map a*h^b so both L^1 and L^match_p are exact.
RadialDensity rearrange_decreasing(const RadialDensity& h, double match_p = 2.0);

struct MaximizerState {
  RadialDensity h1;
  RadialDensity h2;
  double lam1 = 1.0;
  double lam2 = 1.0;
  double mu = 1.0;
  double objective = 0.0;
};

// Amplitude and dilation rescaling (h_i -> lam_i h_i(mu x)) onto the normalized slice:
//   Lambda: |h1|_{m1} = |h2|_{m2} = 1 and |h1|_1^alpha |h2|_1^beta = 1
//   Pi:     |h_i|_1 = 1 and theta0 L1 + (1-theta0) L2 = 1, L_i = integral of h_i^{m*}
//   CStar:  |h|_1 = |h|_{m*} = 1 for each profile
// The objective is unchanged. Throws ZeroProfile.
MaximizerState normalize_pair(const MaximizerState& state, const ObjectiveSpec& spec);

struct MaximizeOptions {
  std::size_t cells = 512;
  double r_max = 10.0;
  std::size_t max_iter = 10000;
  double tol = 1e-8;
  std::optional<std::pair<RadialDensity, RadialDensity>> seed;
};

struct MaximizerResult {
  double constant = 0.0;
  RadialDensity h1;
  RadialDensity h2;
  std::size_t iterations = 0;
  double residual = 0.0;
  bool converged = false;
  double seed_objective = 0.0;     // objective of the (rearranged) seed pair
  std::vector<double> history;     // objective after each sweep
  std::vector<double> gains;       // increase produced by the ascent half of each sweep (never negative)
  RadialGrid grid() const { return h1.grid(); }
};

// Block coordinate ascent over radial non-increasing pairs: each species is replaced by the best
// member of its Euler-Lagrange family (Phi_other - c)_+^{1/(m-1)}, c found by a 1D search.
// The returned constant is the objective of a feasible pair, hence a lower estimate.
MaximizerResult maximize(const ObjectiveSpec& spec, const MaximizeOptions& opts);

struct ConstantEstimate {
  MaximizerResult best;          // at opts.cells
  double fine = 0.0;             // best constant at 2 * opts.cells
  double error_bar = 0.0;        // (4/3) |coarse - fine|, second-order Richardson
  double extrapolated = 0.0;     // (4 fine - coarse) / 3
  std::size_t seeds = 0;
  bool converged = false;        // every run converged
};

// Multi-seed maximization at n and 2n. Seed 0 is the unit Gaussian pair, the rest are
// randomized non-monotone bumps drawn from the given rng seed.
ConstantEstimate estimate_constant(const ObjectiveSpec& spec, const MaximizeOptions& opts, std::size_t seeds,
                                   std::uint64_t rng_seed);

// Gaussian pair of unit mass with the given widths on the grid.
std::pair<RadialDensity, RadialDensity> gaussian_seed(const RadialGrid& grid, double width1, double width2);

}  // namespace critmass
