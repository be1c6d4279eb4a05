#include "critmass/radial.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "critmass/errors.hpp"

namespace critmass {

RadialGrid::RadialGrid(int dim, std::size_t cells, double r_max) {
  if (dim < 3) throw Error(ErrorKind::InvalidSpec, "grid dimension must be >= 3");
  if (cells < 8) throw Error(ErrorKind::InvalidSpec, "grid needs at least 8 cells");
  if (!(r_max > 0.0) || !std::isfinite(r_max)) throw Error(ErrorKind::InvalidSpec, "r_max must be positive");
  Geometry g;
  g.dim = dim;
  g.dr = r_max / static_cast<double>(cells);
  const double sigma = unit_sphere_area(dim);
  g.volumes.resize(cells);
  g.face_areas.resize(cells + 1);
  // w_k = sigma/d * dr^d * ((k+1)^d - k^d), computed in index space to avoid cancellation.
  const double scale = sigma / dim * std::pow(g.dr, dim);
  for (std::size_t k = 0; k < cells; ++k) {
    const double a = static_cast<double>(k);
    double diff = 0.0;  // (a+1)^d - a^d via binomial sum, all terms positive
    double binom = 1.0;
    for (int j = 0; j < dim; ++j) {
      diff += binom * std::pow(a, j);
      binom = binom * (dim - j) / (j + 1);
    }
    g.volumes[k] = scale * diff;
  }
  for (std::size_t k = 0; k <= cells; ++k) g.face_areas[k] = sigma * std::pow(static_cast<double>(k) * g.dr, dim - 1);
  geo_ = std::make_shared<const Geometry>(std::move(g));
}

RadialGrid RadialGrid::dilated(double factor) const {
  if (!(factor > 0.0) || !std::isfinite(factor)) throw Error(ErrorKind::InvalidSpec, "dilation factor must be positive");
  return RadialGrid(dim(), size(), r_max() * factor);
}

bool RadialGrid::same_as(const RadialGrid& other) const noexcept {
  if (geo_ == other.geo_) return true;
  return dim() == other.dim() && size() == other.size() &&
         std::abs(dr() - other.dr()) <= 1e-14 * std::max(dr(), other.dr());
}

RadialDensity::RadialDensity(RadialGrid grid) : grid_(std::move(grid)), values_(grid_.size(), 0.0) {}

RadialDensity::RadialDensity(RadialGrid grid, std::vector<double> values)
    : grid_(std::move(grid)), values_(std::move(values)) {
  if (values_.size() != grid_.size())
    throw Error(ErrorKind::GridMismatch, "profile has " + std::to_string(values_.size()) + " values for " +
                                             std::to_string(grid_.size()) + " cells");
  for (double v : values_)
    if (!(v >= 0.0) || !std::isfinite(v)) throw Error(ErrorKind::InvalidDensity, "density values must be finite and >= 0");
}

double RadialDensity::mass() const { return power_integral(*this, 1.0); }

double RadialDensity::max() const { return values_.empty() ? 0.0 : *std::max_element(values_.begin(), values_.end()); }

bool RadialDensity::is_zero() const {
  return std::all_of(values_.begin(), values_.end(), [](double v) { return v == 0.0; });
}

std::size_t RadialDensity::support_end(double rel_floor) const {
  const double floor = rel_floor * max();
  for (std::size_t k = values_.size(); k > 0; --k)
    if (values_[k - 1] > floor) return k;
  return 0;
}

RadialDensity RadialDensity::scaled(double factor) const {
  std::vector<double> v(values_);
  for (double& x : v) x *= factor;
  return RadialDensity(grid_, std::move(v));
}

RadialDensity RadialDensity::dilated(double factor) const { return RadialDensity(grid_.dilated(factor), values_); }

void require_same_grid(const RadialDensity& a, const RadialDensity& b) {
  if (!a.grid().same_as(b.grid())) throw Error(ErrorKind::GridMismatch, "profiles live on different grids");
}

RadialDensity resample(const RadialDensity& h, const RadialGrid& target) {
  const RadialGrid& src = h.grid();
  if (src.dim() != target.dim()) throw Error(ErrorKind::GridMismatch, "resampling across dimensions");
  const int d = src.dim();
  const double shell = unit_sphere_area(d) / d;
  const std::size_t n = src.size();
  std::vector<double> cum(n + 1, 0.0);
  for (std::size_t k = 0; k < n; ++k) cum[k + 1] = cum[k] + h[k] * src.volume(k);
  // Mass of h inside radius R.
  auto enclosed = [&](double R) {
    if (R >= src.r_max()) return cum[n];
    const auto j = std::min(n - 1, static_cast<std::size_t>(R / src.dr()));
    const double lo = src.face(j);
    return cum[j] + h[j] * shell * (std::pow(R, d) - std::pow(lo, d));
  };
  std::vector<double> out(target.size());
  double prev = 0.0;
  for (std::size_t k = 0; k < target.size(); ++k) {
    const double next = enclosed(target.face(k + 1));
    out[k] = std::max(0.0, (next - prev) / target.volume(k));
    prev = next;
  }
  return RadialDensity(target, std::move(out));
}

double power_integral(const RadialDensity& h, double p) {
  const auto w = h.grid().volumes();
  const auto v = h.values();
  double sum = 0.0;
  if (p == 1.0) {
    for (std::size_t k = 0; k < v.size(); ++k) sum += v[k] * w[k];
  } else {
    for (std::size_t k = 0; k < v.size(); ++k)
      if (v[k] > 0.0) sum += std::pow(v[k], p) * w[k];
  }
  return sum;
}

double lp_norm(const RadialDensity& h, double p) {
  if (!(p >= 1.0)) throw Error(ErrorKind::OutOfRange, "L^p norm needs p >= 1");
  return std::pow(power_integral(h, p), 1.0 / p);
}

namespace {

// Kernel potential phi_k = sum_l u_l w_l G(max(k, l)) with G from the midpoint rule on faces,
// and the face derivative -(d-2) m_enclosed / face^{d-1}.
void coulomb_profile(const RadialDensity& u, std::vector<double>& phi, std::vector<double>* dphi) {
  const RadialGrid& g = u.grid();
  const std::size_t n = g.size();
  const int d = g.dim();
  const auto w = g.volumes();
  std::vector<double> enclosed(n + 1, 0.0);
  for (std::size_t k = 0; k < n; ++k) enclosed[k + 1] = enclosed[k] + u[k] * w[k];
  phi.assign(n, 0.0);
  if (dphi) dphi->assign(n + 1, 0.0);
  phi[n - 1] = enclosed[n] * std::pow(g.center(n - 1), 2 - d);
  for (std::size_t k = n - 1; k-- > 0;) {
    const double slope = (d - 2) * enclosed[k + 1] * std::pow(g.face(k + 1), 1 - d);
    phi[k] = phi[k + 1] + slope * g.dr();
    if (dphi) (*dphi)[k + 1] = -slope;
  }
  if (dphi) (*dphi)[n] = -(d - 2) * enclosed[n] * std::pow(g.face(n), 1 - d);
}

}  // namespace

std::vector<double> coulomb_potential(const RadialDensity& u) {
  std::vector<double> phi;
  coulomb_profile(u, phi, nullptr);
  return phi;
}

PotentialProfile newtonian_potential(const RadialDensity& u, double newton_const) {
  PotentialProfile out{u.grid(), {}, {}};
  coulomb_profile(u, out.v, &out.dv);
  for (double& x : out.v) x *= newton_const;
  for (double& x : out.dv) x *= newton_const;
  return out;
}

double interaction_energy(const RadialDensity& h1, const RadialDensity& h2) {
  require_same_grid(h1, h2);
  const std::vector<double> phi = coulomb_potential(h2);
  const auto w = h1.grid().volumes();
  double sum = 0.0;
  for (std::size_t k = 0; k < phi.size(); ++k) sum += h1[k] * w[k] * phi[k];
  return sum;
}

std::vector<double> poisson_residual(const RadialDensity& u, const PotentialProfile& pot) {
  const RadialGrid& g = u.grid();
  const std::size_t n = g.size();
  const double dr = g.dr();
  std::vector<double> res(n);
  auto flux = [&](std::size_t f) {
    if (f == 0) return 0.0;
    if (f == n) return g.face_area(n) * pot.dv[n];
    return g.face_area(f) * (pot.v[f] - pot.v[f - 1]) / dr;
  };
  for (std::size_t k = 0; k < n; ++k) res[k] = flux(k + 1) - flux(k) + u[k] * g.volume(k);
  return res;
}

double second_moment(const RadialDensity& u1, const RadialDensity& u2) {
  require_same_grid(u1, u2);
  const RadialGrid& g = u1.grid();
  double sum = 0.0;
  for (std::size_t k = 0; k < g.size(); ++k) {
    const double r = g.center(k);
    sum += r * r * (u1[k] + u2[k]) * g.volume(k);
  }
  return sum;
}

double free_energy_value(const Parameters& params, double lm1, double lm2, double H) {
  return lm1 / (params.m1 - 1.0) + lm2 / (params.m2 - 1.0) - params.newton_const * H;
}

double virial_value(const Parameters& params, double F, double lm1, double lm2) {
  const double d = params.dim;
  auto coef = [&](double m) { return (m - 2.0 + 2.0 / d) / (m - 1.0); };
  return 2.0 * (d - 2.0) * F + 2.0 * d * (coef(params.m1) * lm1 + coef(params.m2) * lm2);
}

EnergyReport free_energy(const RadialDensity& u1, const RadialDensity& u2, const Parameters& params) {
  require_same_grid(u1, u2);
  EnergyReport e;
  e.M1 = u1.mass();
  e.M2 = u2.mass();
  e.lm1 = power_integral(u1, params.m1);
  e.lm2 = power_integral(u2, params.m2);
  e.H = interaction_energy(u1, u2);
  e.F = free_energy_value(params, e.lm1, e.lm2, e.H);
  e.S = second_moment(u1, u2);
  e.I = virial_value(params, e.F, e.lm1, e.lm2);
  return e;
}

namespace {

double species_dissipation(const RadialDensity& u, double m, const PotentialProfile& other) {
  const RadialGrid& g = u.grid();
  const std::size_t n = g.size();
  const double dr = g.dr();
  const double floor = 1e-14 * u.max();
  std::vector<char> live(n);
  std::vector<double> xi(n, 0.0);
  for (std::size_t k = 0; k < n; ++k) {
    live[k] = u[k] > floor;
    if (live[k]) xi[k] = m / (m - 1.0) * std::pow(u[k], m - 1.0) - other.v[k];
  }
  double total = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    if (!live[k]) continue;
    double sum = 0.0;
    int count = 0;
    if (k == 0) {
      ++count;  // symmetry: zero gradient at the origin
    } else if (live[k - 1]) {
      const double gl = (xi[k] - xi[k - 1]) / dr;
      sum += gl * gl;
      ++count;
    }
    if (k + 1 < n && live[k + 1]) {
      const double gr = (xi[k + 1] - xi[k]) / dr;
      sum += gr * gr;
      ++count;
    }
    double grad2;
    if (count > 0) {
      grad2 = sum / count;
    } else {
      const double dv = 0.5 * (other.dv[k] + other.dv[k + 1]);
      grad2 = dv * dv;
    }
    total += u[k] * grad2 * g.volume(k);
  }
  return total;
}

}  // namespace

double dissipation(const RadialDensity& u1, const RadialDensity& u2, const Parameters& params) {
  require_same_grid(u1, u2);
  const PotentialProfile v1 = newtonian_potential(u1, params.newton_const);
  const PotentialProfile v2 = newtonian_potential(u2, params.newton_const);
  return species_dissipation(u1, params.m1, v2) + species_dissipation(u2, params.m2, v1);
}

double virial_rate(const RadialDensity& u1, const RadialDensity& u2, const Parameters& params) {
  return free_energy(u1, u2, params).I;
}

}  // namespace critmass
