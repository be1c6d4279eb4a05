#include "critmass/solver.hpp"

#include <algorithm>
#include <boost/math/quadrature/gauss.hpp>
#include <cmath>
#include <limits>
#include <spdlog/spdlog.h>

#include "critmass/errors.hpp"

namespace critmass {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double minmod(double a, double b) {
  if (a * b <= 0.0) return 0.0;
  return std::abs(a) < std::abs(b) ? a : b;
}

// Pressure-plus-potential variable whose face differences drive the flux.
std::vector<double> face_velocity(const RadialDensity& u, double m, double eps, const std::vector<double>& v) {
  const std::size_t n = u.size();
  const double dr = u.grid().dr();
  std::vector<double> xi(n);
  for (std::size_t k = 0; k < n; ++k) xi[k] = m / (m - 1.0) * std::pow(u[k] + eps, m - 1.0) - v[k];
  std::vector<double> vel(n + 1, 0.0);
  for (std::size_t f = 1; f < n; ++f) vel[f] = -(xi[f] - xi[f - 1]) / dr;
  return vel;
}

double max_abs(const std::vector<double>& x) {
  double out = 0.0;
  for (double e : x) out = std::max(out, std::abs(e));
  return out;
}

RadialDensity advance_species(const RadialDensity& u, const std::vector<double>& vel, double eps, double dt,
                              double& clipped) {
  const RadialGrid& g = u.grid();
  const std::size_t n = u.size();
  std::vector<double> slope(n, 0.0);
  for (std::size_t k = 1; k + 1 < n; ++k) slope[k] = minmod(u[k] - u[k - 1], u[k + 1] - u[k]);
  // flux[f] through face f; faces 0 and n carry nothing
  std::vector<double> flux(n + 1, 0.0);
  for (std::size_t f = 1; f < n; ++f) {
    const double mobility = vel[f] > 0.0 ? u[f - 1] + 0.5 * slope[f - 1] : u[f] - 0.5 * slope[f];
    flux[f] = g.face_area(f) * vel[f] * (mobility + eps);
  }
  std::vector<double> next(n);
  for (std::size_t k = 0; k < n; ++k) {
    double value = u[k] - dt * (flux[k + 1] - flux[k]) / g.volume(k);
    if (!std::isfinite(value)) throw Error(ErrorKind::NonFiniteState, "non-finite density");
    if (value < 0.0) {
      clipped -= value * g.volume(k);
      value = 0.0;
    }
    next[k] = value;
  }
  return RadialDensity(g, std::move(next));
}

double relative_change(double before, double after, double scale) {
  return std::abs(after - before) / scale;
}

}  // namespace

std::string_view to_string(StopReason reason) noexcept {
  switch (reason) {
    case StopReason::TimeReached: return "TimeReached";
    case StopReason::BlowUpDetected: return "BlowUpDetected";
    case StopReason::SteadyState: return "SteadyState";
    case StopReason::StepUnderflow: return "StepUnderflow";
  }
  return "?";
}

void SolverConfig::validate() const {
  auto fail = [](const char* what) { throw Error(ErrorKind::ConfigInvalid, what); };
  if (grid.dim() != params.dim) fail("grid dimension differs from the model dimension");
  if (!(epsilon >= 0.0) || !std::isfinite(epsilon)) fail("epsilon must be >= 0");
  if (!(dt_min > 0.0) || !(dt_min < dt_init)) fail("need 0 < dt_min < dt_init");
  if (!(t_end > 0.0) || !std::isfinite(t_end)) fail("t_end must be positive");
  if (!(cfl > 0.0 && cfl < 1.0)) fail("cfl must lie in (0, 1)");
  if (!(blowup_linf_factor > 1.0)) fail("blowup_linf_factor must exceed 1");
  if (diag_every == 0) fail("diag_every must be positive");
}

double Trajectory::virial_residual() const {
  double worst = 0.0;
  for (std::size_t i = 1; i < samples.size(); ++i) {
    const Sample& a = samples[i - 1];
    const Sample& b = samples[i];
    const double span = b.t - a.t;
    const double rate = 0.5 * (a.energy.I + b.energy.I);
    if (!(span > 0.0) || std::abs(rate) < 1e-12) continue;
    worst = std::max(worst, std::abs((b.energy.S - a.energy.S) / span - rate) / std::abs(rate));
  }
  return worst;
}

std::vector<double> mollifier_matrix(const RadialGrid& grid, double epsilon) {
  if (!(epsilon > 0.0)) throw Error(ErrorKind::InvalidSpec, "mollifier needs epsilon > 0");
  const int d = grid.dim();
  const std::size_t n = grid.size();
  // Spherical mean of J_eps over |y| = s seen from |x| = r, with t = |x - y| = eps tan(phi):
  // J_eps(t) t dt = d (d - 2) c eps^{2-d} sin(phi) cos(phi)^{d-1} dphi and c (d - 2) sigma_{d-1} = 1.
  const double prefactor = unit_sphere_area(d - 1) / unit_sphere_area(d) * d / unit_sphere_area(d) *
                           std::pow(epsilon, 2.0 - d);
  auto mean = [&](double r, double s) {
    const double lo = std::atan(std::abs(r - s) / epsilon);
    const double hi = std::atan((r + s) / epsilon);
    auto integrand = [&](double phi) {
      const double t = epsilon * std::tan(phi);
      const double cos_theta = std::clamp((r * r + s * s - t * t) / (2.0 * r * s), -1.0, 1.0);
      const double sin_theta = std::sqrt(1.0 - cos_theta * cos_theta);
      return std::sin(phi) * std::pow(std::cos(phi), d - 1) * std::pow(sin_theta, d - 3);
    };
    return prefactor / (r * s) * boost::math::quadrature::gauss<double, 30>::integrate(integrand, lo, hi);
  };
  std::vector<double> matrix(n * n);
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t l = k; l < n; ++l) {
      const double value = mean(grid.center(k), grid.center(l));
      matrix[k * n + l] = value * grid.volume(l);
      matrix[l * n + k] = value * grid.volume(k);
    }
  // Mass that would leave the truncated domain is kept inside.
  for (std::size_t l = 0; l < n; ++l) {
    double mass = 0.0;
    for (std::size_t k = 0; k < n; ++k) mass += matrix[k * n + l] * grid.volume(k);
    const double scale = grid.volume(l) / mass;
    for (std::size_t k = 0; k < n; ++k) matrix[k * n + l] *= scale;
  }
  return matrix;
}

Stepper::Stepper(SolverConfig cfg) : cfg_(std::move(cfg)) {
  cfg_.validate();
  if (cfg_.epsilon > 0.0) mollifier_ = mollifier_matrix(cfg_.grid, cfg_.epsilon);
}

std::vector<double> Stepper::potential(const RadialDensity& u) const {
  const double c = cfg_.params.newton_const;
  std::vector<double> v;
  if (mollifier_.empty()) {
    v = coulomb_potential(u);
  } else {
    const std::size_t n = u.size();
    std::vector<double> smooth(n, 0.0);
    for (std::size_t k = 0; k < n; ++k) {
      double sum = 0.0;
      for (std::size_t l = 0; l < n; ++l) sum += mollifier_[k * n + l] * u[l];
      smooth[k] = sum;
    }
    v = coulomb_potential(RadialDensity(u.grid(), std::move(smooth)));
  }
  for (double& e : v) e *= c;
  return v;
}

std::pair<std::vector<double>, std::vector<double>> Stepper::potentials(const SimState& state) const {
  return {potential(state.u1), potential(state.u2)};
}

Stepper::Drift Stepper::drift(const SimState& state) const {
  require_same_grid(state.u1, state.u2);
  if (!state.u1.grid().same_as(cfg_.grid)) throw Error(ErrorKind::GridMismatch, "state lives on another grid");
  const auto [v1, v2] = potentials(state);
  return {face_velocity(state.u1, cfg_.params.m1, cfg_.epsilon, v2),
          face_velocity(state.u2, cfg_.params.m2, cfg_.epsilon, v1)};
}

CflBounds Stepper::bounds(const SimState& state, const Drift& drift) const {
  const double dr = cfg_.grid.dr();
  const double d = cfg_.params.dim;
  double diffusivity = 0.0;
  for (const auto& [u, m] : {std::pair{&state.u1, cfg_.params.m1}, std::pair{&state.u2, cfg_.params.m2}})
    if (!u->is_zero() || cfg_.epsilon > 0.0) diffusivity = std::max(diffusivity, m * std::pow(u->max() + cfg_.epsilon, m - 1.0));
  // A species with zero mobility everywhere moves nothing, whatever its face velocity.
  double speed = 0.0;
  if (!state.u1.is_zero() || cfg_.epsilon > 0.0) speed = std::max(speed, max_abs(drift.velocity1));
  if (!state.u2.is_zero() || cfg_.epsilon > 0.0) speed = std::max(speed, max_abs(drift.velocity2));
  return {diffusivity > 0.0 ? dr * dr / (2.0 * d * diffusivity) : kInf,
          speed > 0.0 ? dr / (2.0 * d * speed) : kInf};
}

double Stepper::stable_dt(const SimState& state, const Drift& drift) const {
  const CflBounds b = bounds(state, drift);
  return std::clamp(cfg_.cfl * std::min(b.diffusive, b.transport), cfg_.dt_min, cfg_.dt_init);
}

SimState Stepper::advance(const SimState& state, const Drift& drift, double dt, double* clipped) const {
  if (!(dt > 0.0)) throw Error(ErrorKind::OutOfRange, "time step must be positive");
  double removed = 0.0;
  SimState next{state.t + dt, advance_species(state.u1, drift.velocity1, cfg_.epsilon, dt, removed),
                advance_species(state.u2, drift.velocity2, cfg_.epsilon, dt, removed), state.step_count + 1};
  if (removed > 0.0) spdlog::debug("step {}: clipped mass {:.3e}", next.step_count, removed);
  if (clipped) *clipped += removed;
  return next;
}

SimState step(const SimState& state, const SolverConfig& cfg, double dt) {
  const Stepper stepper(cfg);
  return stepper.advance(state, stepper.drift(state), dt);
}

CflBounds cfl_bounds(const SimState& state, const SolverConfig& cfg) {
  const Stepper stepper(cfg);
  return stepper.bounds(state, stepper.drift(state));
}

double cfl_dt(const SimState& state, const SolverConfig& cfg) {
  const Stepper stepper(cfg);
  return stepper.stable_dt(state, stepper.drift(state));
}

Trajectory run(const RadialDensity& u1_0, const RadialDensity& u2_0, const SolverConfig& cfg) {
  cfg.validate();
  if (!u1_0.grid().same_as(cfg.grid) || !u2_0.grid().same_as(cfg.grid))
    throw Error(ErrorKind::ConfigInvalid, "initial data must live on the solver grid");
  for (const RadialDensity* u : {&u1_0, &u2_0}) {
    double outside = 0.0;
    for (std::size_t k = cfg.grid.size() / 2; k < cfg.grid.size(); ++k) outside += (*u)[k] * cfg.grid.volume(k);
    if (outside > 1e-8 * u->mass()) throw Error(ErrorKind::ConfigInvalid, "initial data must fit inside r_max / 2");
  }

  const Stepper stepper(cfg);
  const Parameters& params = cfg.params;
  Trajectory traj;
  SimState state{0.0, u1_0, u2_0, 0};
  const double mass0[2] = {u1_0.mass(), u2_0.mass()};
  const double linf0 = std::max(u1_0.max(), u2_0.max());

  auto record = [&](double dt) {
    Sample s{state.t, free_energy(state.u1, state.u2, params), state.u1.max(), state.u2.max(), dt};
    s.energy.D = dissipation(state.u1, state.u2, params);
    traj.samples.push_back(std::move(s));
  };
  auto energy_of = [&](const SimState& s) {
    return free_energy_value(params, power_integral(s.u1, params.m1), power_integral(s.u2, params.m2),
                             interaction_energy(s.u1, s.u2));
  };

  record(0.0);
  double energy = traj.samples.front().energy.F;
  traj.energy_tolerance = 1e-8 * (1.0 + std::abs(energy));
  double linf = linf0;
  double dt = 0.0;
  bool stopped = false;

  while (!stopped && state.t < cfg.t_end) {
    const Stepper::Drift drift = stepper.drift(state);
    const CflBounds b = stepper.bounds(state, drift);
    const double wanted = cfg.cfl * std::min(b.diffusive, b.transport);
    if (wanted < cfg.dt_min) {
      traj.stop_reason = state.step_count > 0 && linf > linf0 ? StopReason::BlowUpDetected : StopReason::StepUnderflow;
      break;
    }
    dt = std::min({wanted, cfg.dt_init, cfg.t_end - state.t});
    state = stepper.advance(state, drift, dt, &traj.clipped_mass);
    if (cfg.t_end - state.t < 1e-14 * cfg.t_end) state.t = cfg.t_end;

    const double next_energy = energy_of(state);
    const double rise = next_energy - energy;
    traj.max_energy_increase = std::max(traj.max_energy_increase, rise);
    if (rise > traj.energy_tolerance) ++traj.energy_violations;
    energy = next_energy;

    const double masses[2] = {state.u1.mass(), state.u2.mass()};
    for (int i = 0; i < 2; ++i)
      if (mass0[i] > 0.0) traj.mass_drift = std::max(traj.mass_drift, std::abs(masses[i] - mass0[i]) / mass0[i]);

    linf = std::max(state.u1.max(), state.u2.max());
    if (linf0 > 0.0 && linf > cfg.blowup_linf_factor * linf0) {
      traj.stop_reason = StopReason::BlowUpDetected;
      stopped = true;
    }
    if (stopped || state.step_count % cfg.diag_every == 0 || state.t >= cfg.t_end) {
      const EnergyReport before = traj.samples.back().energy;
      record(dt);
      const EnergyReport& after = traj.samples.back().energy;
      const double energy_scale =
          std::max(std::abs(after.F), after.lm1 / (params.m1 - 1.0) + after.lm2 / (params.m2 - 1.0));
      if (!stopped && relative_change(before.F, after.F, energy_scale) < 1e-10 &&
          relative_change(before.S, after.S, after.S) < 1e-10) {
        traj.stop_reason = StopReason::SteadyState;
        stopped = true;
      }
    }
  }
  if (traj.samples.back().t < state.t) record(dt);
  traj.steps = state.step_count;
  traj.final_state = std::move(state);
  spdlog::debug("run stopped: {} at t={} after {} steps", to_string(traj.stop_reason), traj.final_state.t,
                traj.steps);
  return traj;
}

}  // namespace critmass
