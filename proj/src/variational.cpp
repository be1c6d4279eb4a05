#include "critmass/variational.hpp"

#include <algorithm>
#include <boost/math/tools/minima.hpp>
#include <boost/math/tools/roots.hpp>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <spdlog/spdlog.h>

#include "critmass/errors.hpp"

namespace critmass {

std::string_view to_string(ObjectiveKind kind) noexcept {
  switch (kind) {
    case ObjectiveKind::Lambda: return "Lambda";
    case ObjectiveKind::Pi: return "Pi";
    case ObjectiveKind::CStar: return "CStar";
  }
  return "Unknown";
}

ObjectiveSpec ObjectiveSpec::lambda(const Parameters& params, double alpha, double beta) {
  ObjectiveSpec s;
  s.kind = ObjectiveKind::Lambda;
  s.params = params;
  s.alpha = alpha;
  s.beta = beta;
  s.validate();
  return s;
}

ObjectiveSpec ObjectiveSpec::lambda(const Parameters& params) {
  const double a = default_alpha(params);
  return lambda(params, a, beta_for_alpha(params, a));
}

ObjectiveSpec ObjectiveSpec::pi(const Parameters& params, double theta0) {
  ObjectiveSpec s;
  s.kind = ObjectiveKind::Pi;
  s.params = params;
  s.theta0 = theta0;
  s.validate();
  return s;
}

ObjectiveSpec ObjectiveSpec::cstar(const Parameters& params) {
  ObjectiveSpec s;
  s.kind = ObjectiveKind::CStar;
  s.params = params;
  s.alpha = s.beta = 1.0 / params.dim;
  s.validate();
  return s;
}

void ObjectiveSpec::validate() const {
  switch (kind) {
    case ObjectiveKind::Lambda:
      check_alpha_beta(params, alpha, beta);
      break;
    case ObjectiveKind::Pi:
      if (!params.at_intersection()) throw Error(ErrorKind::InvalidSpec, "Pi requires m1 = m2 = m*");
      if (!(theta0 > 0.0 && theta0 < 1.0)) throw Error(ErrorKind::InvalidSpec, "theta0 must lie in (0, 1)");
      break;
    case ObjectiveKind::CStar:
      if (!params.at_intersection()) throw Error(ErrorKind::InvalidSpec, "CStar requires m1 = m2 = m*");
      break;
  }
}

namespace {

struct Moments {
  double mass = 0.0;
  double power = 0.0;  // integral of h^m
};

Moments moments(const RadialDensity& h, double m) { return {h.mass(), power_integral(h, m)}; }

double ratio(const ObjectiveSpec& s, double H, const Moments& a, const Moments& b) {
  if (!(H > 0.0) || a.mass <= 0.0 || b.mass <= 0.0) return 0.0;
  const Parameters& p = s.params;
  switch (s.kind) {
    case ObjectiveKind::Lambda:
    case ObjectiveKind::CStar: {
      const double den = std::pow(a.mass, s.alpha) * std::pow(b.mass, s.beta) *
                         std::pow(a.power, (1.0 - s.alpha) / p.m1) * std::pow(b.power, (1.0 - s.beta) / p.m2);
      return H / den;
    }
    case ObjectiveKind::Pi: {
      const double m = p.m_star();
      const double mix = s.theta0 * a.power / std::pow(a.mass, m) + (1.0 - s.theta0) * b.power / std::pow(b.mass, m);
      return H / (a.mass * b.mass * mix);
    }
  }
  return 0.0;
}

}  // namespace

double objective_value(const ObjectiveSpec& spec, const RadialDensity& h1, const RadialDensity& h2) {
  require_same_grid(h1, h2);
  return ratio(spec, interaction_energy(h1, h2), moments(h1, spec.params.m1), moments(h2, spec.params.m2));
}

double cstar_quotient(const Parameters& params, const RadialDensity& h) {
  const double mass = h.mass();
  if (mass <= 0.0) return 0.0;
  return interaction_energy(h, h) / (std::pow(mass, 2.0 / params.dim) * power_integral(h, params.m_star()));
}

bool is_nonincreasing(const RadialDensity& h) {
  const auto v = h.values();
  return std::adjacent_find(v.begin(), v.end(), [](double a, double b) { return b > a; }) == v.end();
}

RadialDensity layer_cake_average(const RadialDensity& h) {
  const RadialGrid& g = h.grid();
  const std::size_t n = g.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return h[a] > h[b]; });
  // Walk the sorted pieces through the target cells in the volume coordinate.
  std::vector<double> out(n, 0.0);
  std::size_t piece = 0;
  double piece_left = g.volume(order[0]);
  for (std::size_t k = 0; k < n; ++k) {
    double need = g.volume(k);
    double acc = 0.0;
    while (need > 0.0 && piece < n) {
      const double take = std::min(need, piece_left);
      acc += take * h[order[piece]];
      need -= take;
      piece_left -= take;
      if (piece_left <= 0.0 && ++piece < n) piece_left = g.volume(order[piece]);
    }
    out[k] = acc / g.volume(k);
  }
  // The walk is exact in L^1 up to rounding; restore the mass and monotonicity exactly.
  for (std::size_t k = 1; k < n; ++k) out[k] = std::min(out[k], out[k - 1]);
  RadialDensity avg(g, std::move(out));
  const double m0 = h.mass(), m1 = avg.mass();
  return m1 > 0.0 ? avg.scaled(m0 / m1) : avg;
}

RadialDensity rearrange_decreasing(const RadialDensity& h, double match_p) {
  if (is_nonincreasing(h)) return h;
  RadialDensity avg = layer_cake_average(h);
  const double mass = h.mass();
  const double target = std::log(power_integral(h, match_p)) - match_p * std::log(mass);
  auto mismatch = [&](double b) {
    double s1 = 0.0, sp = 0.0;
    for (std::size_t k = 0; k < avg.size(); ++k) {
      if (avg[k] <= 0.0) continue;
      const double hb = std::pow(avg[k], b);
      s1 += hb * avg.grid().volume(k);
      sp += std::pow(hb, match_p) * avg.grid().volume(k);
    }
    return std::log(sp) - match_p * std::log(s1) - target;
  };
  double lo = 0.25, hi = 4.0;
  const double flo = mismatch(lo), fhi = mismatch(hi);
  if (!(flo * fhi < 0.0)) return avg;  // flat level sets: the average is already the best we can do
  std::uintmax_t iters = 100;
  const auto root = boost::math::tools::toms748_solve(mismatch, lo, hi, flo, fhi,
                                                      boost::math::tools::eps_tolerance<double>(50), iters);
  const double b = 0.5 * (root.first + root.second);
  std::vector<double> v(avg.size());
  double s1 = 0.0;
  for (std::size_t k = 0; k < v.size(); ++k) {
    v[k] = avg[k] > 0.0 ? std::pow(avg[k], b) : 0.0;
    s1 += v[k] * avg.grid().volume(k);
  }
  for (double& x : v) x *= mass / s1;
  return RadialDensity(h.grid(), std::move(v));
}

namespace {

RadialDensity rescale(const RadialDensity& h, double lam, double mu) { return h.dilated(1.0 / mu).scaled(lam); }

}  // namespace

MaximizerState normalize_pair(const MaximizerState& state, const ObjectiveSpec& spec) {
  if (state.h1.is_zero() || state.h2.is_zero()) throw Error(ErrorKind::ZeroProfile, "cannot normalize a zero profile");
  require_same_grid(state.h1, state.h2);
  const Parameters& p = spec.params;
  const double d = p.dim;
  MaximizerState out = state;
  switch (spec.kind) {
    case ObjectiveKind::Lambda: {
      const double M1 = state.h1.mass(), M2 = state.h2.mass();
      const double N1 = lp_norm(state.h1, p.m1), N2 = lp_norm(state.h2, p.m2);
      const double sc = spec.alpha * (p.m1 - 1.0) / p.m1 + spec.beta * (p.m2 - 1.0) / p.m2;
      const double log_x = spec.alpha * std::log(M1 / N1) + spec.beta * std::log(M2 / N2);
      out.mu = std::exp(log_x / (d * sc));
      out.lam1 = std::pow(out.mu, d / p.m1) / N1;
      out.lam2 = std::pow(out.mu, d / p.m2) / N2;
      break;
    }
    case ObjectiveKind::Pi: {
      const double m = p.m_star();
      const double M1 = state.h1.mass(), M2 = state.h2.mass();
      const double mix = spec.theta0 * power_integral(state.h1, m) / std::pow(M1, m) +
                         (1.0 - spec.theta0) * power_integral(state.h2, m) / std::pow(M2, m);
      out.mu = std::pow(mix, -1.0 / (d - 2.0));
      out.lam1 = std::pow(out.mu, d) / M1;
      out.lam2 = std::pow(out.mu, d) / M2;
      break;
    }
    case ObjectiveKind::CStar: {
      // Keep the better diagonal profile; both slots carry it.
      const double q1 = cstar_quotient(p, state.h1), q2 = cstar_quotient(p, state.h2);
      const RadialDensity& h = q1 >= q2 ? state.h1 : state.h2;
      const double m = p.m_star();
      const double M = h.mass();
      out.mu = std::pow(std::pow(M, m) / power_integral(h, m), 1.0 / (d * (m - 1.0)));
      out.lam1 = out.lam2 = std::pow(out.mu, d) / M;
      out.h1 = out.h2 = rescale(h, out.lam1, out.mu);
      out.objective = cstar_quotient(p, out.h1);
      return out;
    }
  }
  out.h1 = rescale(state.h1, out.lam1, out.mu);
  out.h2 = rescale(state.h2, out.lam2, out.mu);
  out.objective = objective_value(spec, out.h1, out.h2);
  return out;
}

std::pair<RadialDensity, RadialDensity> gaussian_seed(const RadialGrid& grid, double width1, double width2) {
  auto make = [&](double w) {
    std::vector<double> v(grid.size());
    for (std::size_t k = 0; k < v.size(); ++k) {
      const double r = grid.center(k) / w;
      v[k] = std::exp(-0.5 * r * r);
    }
    RadialDensity h(grid, std::move(v));
    return h.scaled(1.0 / h.mass());
  };
  return {make(width1), make(width2)};
}

namespace {

constexpr std::size_t kScanPoints = 96;
// Scale gauge: rms radius of the iterates as a fraction of r_max.
constexpr double kRmsFraction = 0.16;

// Best member of the family (Phi - t Phi(0))_+^{1/(m-1)} against the fixed partner.
struct BestResponse {
  RadialDensity profile;
  double value;
};

BestResponse best_response(const ObjectiveSpec& spec, int species, const RadialDensity& partner) {
  const Parameters& p = spec.params;
  const double m = p.exponent(species);
  const double other_m = p.exponent(1 - species);
  const RadialGrid& g = partner.grid();
  const std::vector<double> phi = coulomb_potential(partner);
  const Moments fixed = moments(partner, other_m);
  const double top = phi.front();
  const double e = 1.0 / (m - 1.0);
  const auto w = g.volumes();

  auto evaluate = [&](double t) {
    const double cut = t * top;
    Moments mine;
    double H = 0.0;
    for (std::size_t k = 0; k < phi.size() && phi[k] > cut; ++k) {
      const double base = phi[k] - cut;
      const double val = std::pow(base, e);
      mine.mass += val * w[k];
      mine.power += val * base * w[k];  // val^m = val * base since val^{m-1} = base
      H += val * w[k] * phi[k];
    }
    return species == 0 ? ratio(spec, H, mine, fixed) : ratio(spec, H, fixed, mine);
  };

  std::size_t best_i = 0;
  double best_v = -1.0;
  for (std::size_t i = 0; i < kScanPoints; ++i) {
    const double v = evaluate(static_cast<double>(i) / kScanPoints);
    if (v > best_v) {
      best_v = v;
      best_i = i;
    }
  }
  const double lo = best_i == 0 ? 0.0 : static_cast<double>(best_i - 1) / kScanPoints;
  const double hi = static_cast<double>(best_i + 1) / kScanPoints;
  std::uintmax_t iters = 200;
  const auto res = boost::math::tools::brent_find_minima([&](double t) { return -evaluate(t); }, lo,
                                                         std::min(hi, 1.0 - 1e-12),
                                                         std::numeric_limits<double>::digits / 2, iters);
  double t = res.first;
  if (-res.second < best_v) t = static_cast<double>(best_i) / kScanPoints;

  std::vector<double> v(phi.size(), 0.0);
  const double cut = t * top;
  for (std::size_t k = 0; k < phi.size() && phi[k] > cut; ++k) v[k] = std::pow(phi[k] - cut, e);
  RadialDensity prof(g, std::move(v));
  const double mass = prof.mass();
  prof = rearrange_decreasing(prof.scaled(1.0 / mass));
  const double value = species == 0 ? objective_value(spec, prof, partner) : objective_value(spec, partner, prof);
  return {std::move(prof), value};
}

// Replace one species, halving towards the old profile if the family member is worse.
double ascend(const ObjectiveSpec& spec, int species, RadialDensity& mine, const RadialDensity& partner,
              double current) {
  BestResponse br = best_response(spec, species, partner);
  auto value_of = [&](const RadialDensity& h) {
    return species == 0 ? objective_value(spec, h, partner) : objective_value(spec, partner, h);
  };
  if (br.value >= current) {
    mine = std::move(br.profile);
    return br.value;
  }
  const double old_mass = mine.mass();
  const RadialDensity target = br.profile.scaled(old_mass / br.profile.mass());
  for (double s = 0.5; s > 1e-6; s *= 0.5) {
    std::vector<double> mix(mine.size());
    for (std::size_t k = 0; k < mix.size(); ++k) mix[k] = (1.0 - s) * mine[k] + s * target[k];
    RadialDensity trial(mine.grid(), std::move(mix));
    const double v = value_of(trial);
    if (v > current) {
      mine = std::move(trial);
      return v;
    }
  }
  return current;
}

// Dilation is a symmetry of every objective but not of its discretization, which favours coarse
// concentrated profiles. Pin the scale: dilate the pair so its mean rms radius sits at `target`.
void pin_scale(RadialDensity& h1, RadialDensity& h2, double target) {
  const RadialDensity zero(h1.grid());
  const double s1 = second_moment(h1, zero) / h1.mass();
  const double s2 = second_moment(h2, zero) / h2.mass();
  const double f = std::sqrt(0.5 * (s1 + s2)) / target;  // new(x) = old(x f)
  if (std::abs(f - 1.0) < 1e-14) return;
  const RadialGrid& g = h1.grid();
  h1 = resample(h1.dilated(1.0 / f), g);
  h2 = resample(h2.dilated(1.0 / f), g);
}

}  // namespace

MaximizerResult maximize(const ObjectiveSpec& spec, const MaximizeOptions& opts) {
  spec.validate();
  if (opts.cells < 64) throw Error(ErrorKind::InvalidSpec, "maximizer grid needs at least 64 cells");
  if (!(opts.tol > 0.0)) throw Error(ErrorKind::InvalidSpec, "tolerance must be positive");
  const RadialGrid grid(spec.params.dim, opts.cells, opts.r_max);
  auto [h1, h2] = opts.seed ? *opts.seed : gaussian_seed(grid, 0.1 * opts.r_max, 0.1 * opts.r_max);
  if (!h1.grid().same_as(grid)) h1 = resample(h1, grid);
  if (!h2.grid().same_as(grid)) h2 = resample(h2, grid);
  if (h1.is_zero() || h2.is_zero()) throw Error(ErrorKind::ZeroProfile, "seed profiles must be nonzero");
  h1 = rearrange_decreasing(h1);
  h2 = rearrange_decreasing(h2);

  MaximizerResult res{.constant = 0.0, .h1 = h1, .h2 = h2};
  double value = objective_value(spec, h1, h2);
  res.seed_objective = value;
  const double gauge = kRmsFraction * opts.r_max;
  int quiet = 0;
  for (res.iterations = 1; res.iterations <= opts.max_iter; ++res.iterations) {
    const double before = value;
    value = ascend(spec, 0, h1, h2, value);
    value = ascend(spec, 1, h2, h1, value);
    res.gains.push_back(value - before);
    pin_scale(h1, h2, gauge);
    value = objective_value(spec, h1, h2);
    res.history.push_back(value);
    res.residual = std::abs(value - before) / value;
    quiet = res.residual < opts.tol ? quiet + 1 : 0;
    if (quiet >= 2) {
      res.converged = true;
      break;
    }
  }
  res.iterations = std::min(res.iterations, opts.max_iter);
  const MaximizerState normalized = normalize_pair({h1, h2, 1.0, 1.0, 1.0, value}, spec);
  res.h1 = normalized.h1;
  res.h2 = normalized.h2;
  res.constant = normalized.objective;
  if (!res.converged)
    spdlog::warn("maximizer {} did not converge in {} sweeps (residual {:.3e})", to_string(spec.kind),
                 opts.max_iter, res.residual);
  return res;
}

namespace {

std::pair<RadialDensity, RadialDensity> random_seed(const RadialGrid& grid, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> width(0.04, 0.2), noise(-0.5, 0.5);
  auto make = [&]() {
    const double w = width(rng) * grid.r_max();
    std::vector<double> v(grid.size());
    for (std::size_t k = 0; k < v.size(); ++k) {
      const double r = grid.center(k) / w;
      v[k] = std::exp(-0.5 * r * r) * (1.0 + noise(rng));
    }
    return RadialDensity(grid, std::move(v));
  };
  auto a = make();
  auto b = make();
  return {std::move(a), std::move(b)};
}

}  // namespace

ConstantEstimate estimate_constant(const ObjectiveSpec& spec, const MaximizeOptions& opts, std::size_t seeds,
                                   std::uint64_t rng_seed) {
  const RadialGrid grid(spec.params.dim, opts.cells, opts.r_max);
  std::mt19937_64 rng(rng_seed);
  ConstantEstimate est;
  est.seeds = std::max<std::size_t>(1, seeds);
  est.converged = true;
  std::optional<std::pair<RadialDensity, RadialDensity>> best_seed;
  for (std::size_t s = 0; s < est.seeds; ++s) {
    MaximizeOptions o = opts;
    o.seed = s == 0 && opts.seed ? opts.seed
             : s == 0            ? gaussian_seed(grid, 0.1 * opts.r_max, 0.1 * opts.r_max)
                                 : random_seed(grid, rng);
    MaximizerResult r = maximize(spec, o);
    est.converged = est.converged && r.converged;
    spdlog::debug("seed {}: {} = {:.12g} after {} sweeps", s, to_string(spec.kind), r.constant, r.iterations);
    if (!best_seed || r.constant > est.best.constant) {
      best_seed = o.seed;
      est.best = std::move(r);
    }
  }
  MaximizeOptions fine = opts;
  fine.cells = 2 * opts.cells;
  fine.seed = best_seed;
  const MaximizerResult rf = maximize(spec, fine);
  est.converged = est.converged && rf.converged;
  est.fine = rf.constant;
  est.error_bar = 4.0 / 3.0 * std::abs(est.best.constant - est.fine);
  est.extrapolated = (4.0 * est.fine - est.best.constant) / 3.0;
  return est;
}

}  // namespace critmass
