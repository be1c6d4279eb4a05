#include "critmass/criteria.hpp"

#include <algorithm>
#include <cmath>
#include <optional>

#include "critmass/errors.hpp"

namespace critmass {

double young_A(double theta, double eta) {
  if (!(theta > 0.0 && theta < 1.0 && eta > 0.0 && eta < 1.0))
    throw Error(ErrorKind::OutOfRange, "theta and eta must lie in (0, 1)");
  return std::pow(eta / theta, eta) * std::pow((1.0 - eta) / (1.0 - theta), 1.0 - eta);
}

double z_eta(double eta) {
  if (!(eta > 0.0 && eta < 1.0)) throw Error(ErrorKind::OutOfRange, "eta must lie in (0, 1)");
  return std::pow(eta, eta) * std::pow(1.0 - eta, 1.0 - eta);
}

Kappas kappas(double theta, const Parameters& params) {
  if (!(theta > 0.0 && theta < 1.0)) throw Error(ErrorKind::OutOfRange, "theta must lie in (0, 1)");
  const double m1 = params.m1, m2 = params.m2;
  const double gap = m1 + m2 - m1 * m2;
  if (std::abs(gap) < 1e-14) throw Error(ErrorKind::DegenerateExponents, "m1 + m2 == m1 * m2");
  const double c = params.newton_const;
  const double a = (m1 - 1.0) * theta;
  const double b = (m2 - 1.0) * (1.0 - theta);
  return {std::pow(c, m2 / gap) * std::pow(a, (m2 - 1.0) / gap) * std::pow(b, 1.0 / gap),
          std::pow(c, m1 / gap) * std::pow(a, 1.0 / gap) * std::pow(b, (m1 - 1.0) / gap)};
}

double PeakFunction::operator()(double x) const { return x - lambda_theta * std::pow(x, exponent); }

double PeakFunction::derivative(double x) const { return 1.0 - lambda_theta * exponent * std::pow(x, exponent - 1.0); }

PeakFunction peak_function(double lambda_theta, double s) {
  if (!(lambda_theta > 0.0)) throw Error(ErrorKind::OutOfRange, "lambda_theta must be positive");
  if (std::abs(s - 1.0) < 1e-12) throw Error(ErrorKind::IntersectionPoint, "homogeneity sum equals 1");
  if (s < 1.0) throw Error(ErrorKind::OutOfRange, "homogeneity sum below 1: f has no interior maximum");
  return {lambda_theta, s, std::pow(1.0 / (s * lambda_theta), 1.0 / (s - 1.0))};
}

PeakFunction x0_and_f(double lambda_theta, double alpha, double beta, const Parameters& params) {
  return peak_function(lambda_theta, homogeneity_sum(params, alpha, beta));
}

std::string_view to_string(Outcome o) noexcept {
  switch (o) {
    case Outcome::Global: return "Global";
    case Outcome::BlowUp: return "BlowUp";
    case Outcome::Boundary: return "Boundary";
    case Outcome::Indeterminate: return "Indeterminate";
  }
  return "Unknown";
}

std::string_view to_string(Theorem t) noexcept { return t == Theorem::T12 ? "T12" : "T13"; }

double Verdict::get(std::string_view key) const {
  for (const auto& [k, v] : evidence)
    if (k == key) return v;
  throw Error(ErrorKind::OutOfRange, "no evidence named " + std::string(key));
}

namespace {

void require_region(const Parameters& params) {
  if (params.at_intersection()) throw Error(ErrorKind::RegimeMismatch, "off-intersection criterion used at (m*, m*)");
  if (!admits_sharp_criteria(params))
    throw Error(ErrorKind::RegimeMismatch, "exponents outside p >= 1, q >= 1, r > 1");
}

struct Powers {
  double s, gamma1, gamma2, eta;
};

Powers powers(const Parameters& params, double alpha, double beta) {
  const double s = homogeneity_sum(params, alpha, beta);
  if (!(s > 1.0)) throw Error(ErrorKind::RegimeMismatch, "homogeneity sum must exceed 1 for these exponents");
  const double a = (1.0 - alpha) / params.m1;
  return {s, alpha / (s - 1.0), beta / (s - 1.0), a / s};
}

}  // namespace

bool blowup_exponent_condition(const Parameters& params, double alpha, double beta) {
  const double d = params.dim;
  const double s = homogeneity_sum(params, alpha, beta);
  // On the diagonal the restriction holds with equality for every admissible alpha; allow rounding.
  const double rhs = 2.0 - 2.0 / d - (d - 2.0) / d * (1.0 - 1.0 / s);
  return std::max(params.m1, params.m2) <= rhs + 1e-12 * rhs;
}

ThetaSample theorem12_sample(const InitialDatum& u, const Parameters& params, double alpha, double beta,
                             double lambda_star, double theta, double tol) {
  const Powers pw = powers(params, alpha, beta);
  const Kappas k = kappas(theta, params);
  const double lambda_theta = std::pow(young_A(theta, pw.eta), pw.s) * lambda_star;
  const PeakFunction f = x0_and_f(lambda_theta, alpha, beta, params);
  const double mass_factor = std::pow(u.M1, pw.gamma1) * std::pow(u.M2, pw.gamma2);
  ThetaSample t;
  t.theta = theta;
  t.x0 = f.x0;
  t.energy_bound = params.newton_const /
                   (std::pow(k.k1, 1.0 + pw.gamma1) * std::pow(k.k2, 1.0 + pw.gamma2) * mass_factor) * f.peak();
  t.R = std::pow(k.k1, pw.gamma1) * std::pow(k.k2, pw.gamma2) * mass_factor *
        (theta * std::pow(k.k1, params.m1) * u.lm1 + (1.0 - theta) * std::pow(k.k2, params.m2) * u.lm2);
  t.energy_ok = u.F0 < t.energy_bound;
  if (std::abs(t.R - t.x0) <= tol * t.x0) t.outcome = Outcome::Boundary;
  else if (t.energy_ok && t.R < t.x0) t.outcome = Outcome::Global;
  else if (t.energy_ok && t.R > t.x0 && blowup_exponent_condition(params, alpha, beta)) t.outcome = Outcome::BlowUp;
  else t.outcome = Outcome::Indeterminate;
  return t;
}

Verdict theorem12_verdict(const InitialDatum& u, const Parameters& params, double alpha, double beta,
                          double lambda_star, const T12Options& opts) {
  require_region(params);
  check_alpha_beta(params, alpha, beta);
  if (!(lambda_star > 0.0)) throw Error(ErrorKind::OutOfRange, "lambda_star must be positive");
  if (opts.theta_scan < 1) throw Error(ErrorKind::OutOfRange, "theta scan needs at least one point");
  Verdict v;
  v.theorem = Theorem::T12;
  for (std::size_t i = 0; i < opts.theta_scan; ++i) {
    const double theta = opts.theta_scan == 1
                             ? 0.5 * (opts.theta_lo + opts.theta_hi)
                             : opts.theta_lo + (opts.theta_hi - opts.theta_lo) * i / (opts.theta_scan - 1.0);
    v.scan.push_back(theorem12_sample(u, params, alpha, beta, lambda_star, theta, opts.tol));
  }
  auto first = [&](Outcome o) {
    return std::find_if(v.scan.begin(), v.scan.end(), [o](const ThetaSample& t) { return t.outcome == o; });
  };
  auto win = v.scan.end();
  for (Outcome o : {Outcome::Boundary, Outcome::Global, Outcome::BlowUp}) {
    if ((win = first(o)) != v.scan.end()) {
      v.outcome = o;
      break;
    }
  }
  const ThetaSample& shown = win != v.scan.end() ? *win : v.scan[v.scan.size() / 2];
  const Powers pw = powers(params, alpha, beta);
  v.evidence = {{"F0", u.F0},
                {"M1", u.M1},
                {"M2", u.M2},
                {"lm1", u.lm1},
                {"lm2", u.lm2},
                {"alpha", alpha},
                {"beta", beta},
                {"lambda_star", lambda_star},
                {"gamma1", pw.gamma1},
                {"gamma2", pw.gamma2},
                {"eta", pw.eta},
                {"theta", shown.theta},
                {"R", shown.R},
                {"x0", shown.x0},
                {"energy_bound", shown.energy_bound},
                {"exponent_condition", blowup_exponent_condition(params, alpha, beta) ? 1.0 : 0.0},
                {"identity_residual",
                 critical_identity_residual(u.M1, u.M2, u.lm1, u.lm2, params, alpha, beta, lambda_star)}};
  return v;
}

Verdict theorem12_alpha_scan(const InitialDatum& u, const Parameters& params, const LambdaOfExponents& lambda_star,
                             std::size_t alpha_points, const T12Options& opts) {
  require_region(params);
  const double upper = alpha_upper(params);
  std::optional<Verdict> best;
  auto rank = [](Outcome o) {
    switch (o) {
      case Outcome::Boundary: return 0;
      case Outcome::Global: return 1;
      case Outcome::BlowUp: return 2;
      case Outcome::Indeterminate: return 3;
    }
    return 3;
  };
  for (std::size_t j = 1; j <= alpha_points; ++j) {
    const double alpha = upper * j / (alpha_points + 1.0);
    const double beta = beta_for_alpha(params, alpha);
    if (!(beta > 0.0 && beta < beta_upper(params)) || !(homogeneity_sum(params, alpha, beta) > 1.0)) continue;
    Verdict v = theorem12_verdict(u, params, alpha, beta, lambda_star(alpha, beta), opts);
    if (!best || rank(v.outcome) < rank(best->outcome)) best = std::move(v);
  }
  if (!best) throw Error(ErrorKind::InvalidSpec, "no admissible exponent pair with s > 1 in the scan");
  return *best;
}

namespace {

struct IdentityTerms {
  double prefactor;  // multiplies [w1 lm1 + w2 lm2]
  double w1, w2;
  double rhs;
};

IdentityTerms identity_terms(double M1, double M2, const Parameters& params, double alpha, double beta,
                             double lambda_star) {
  require_region(params);
  const Powers pw = powers(params, alpha, beta);
  const double a = (1.0 - alpha) / params.m1;
  const double b = (1.0 - beta) / params.m2;
  const double inv = 1.0 / (pw.s - 1.0);
  IdentityTerms t;
  t.prefactor = std::pow(params.newton_const, inv) * std::pow(M1, pw.gamma1) * std::pow(M2, pw.gamma2);
  t.w1 = std::pow(params.m1 - 1.0, (1.0 - b) * inv) * std::pow(params.m2 - 1.0, b * inv);
  t.w2 = std::pow(params.m1 - 1.0, a * inv) * std::pow(params.m2 - 1.0, (1.0 - a) * inv);
  t.rhs = pw.s * std::pow(1.0 / (std::pow(a, a) * std::pow(b, b) * lambda_star), inv);
  return t;
}

}  // namespace

double critical_identity_residual(double M1, double M2, double lm1, double lm2, const Parameters& params,
                                  double alpha, double beta, double lambda_star) {
  const IdentityTerms t = identity_terms(M1, M2, params, alpha, beta, lambda_star);
  return t.prefactor * (t.w1 * lm1 + t.w2 * lm2) - t.rhs;
}

double critical_lm2(double M1, double M2, double lm1, const Parameters& params, double alpha, double beta,
                    double lambda_star) {
  const IdentityTerms t = identity_terms(M1, M2, params, alpha, beta, lambda_star);
  const double lm2 = (t.rhs / t.prefactor - t.w1 * lm1) / t.w2;
  if (!(lm2 > 0.0)) throw Error(ErrorKind::OutOfRange, "no positive norm reaches the critical surface");
  return lm2;
}

namespace {

void require_intersection_pair(double alpha, double beta, const Parameters& params) {
  if (!params.at_intersection()) throw Error(ErrorKind::IntersectionRequired, "needs m1 = m2 = m*");
  if (std::abs(alpha + beta - 2.0 / params.dim) > 1e-12)
    throw Error(ErrorKind::InvalidSpec, "alpha + beta must equal 2/d at the intersection point");
  if (!(alpha > 0.0 && beta > 0.0)) throw Error(ErrorKind::InvalidSpec, "alpha and beta must be positive");
}

}  // namespace

double mc_constant(double lambda_star, double alpha, double beta, const Parameters& params) {
  require_intersection_pair(alpha, beta, params);
  const double m = params.m_star();
  return params.newton_const * lambda_star * (m - 1.0) / m * std::pow(1.0 - alpha, (1.0 - alpha) / m) *
         std::pow(1.0 - beta, (1.0 - beta) / m);
}

double mc_constant_z(double lambda_star, double alpha, double beta, const Parameters& params) {
  require_intersection_pair(alpha, beta, params);
  const double m = params.m_star();
  return params.newton_const * lambda_star * (m - 1.0) * z_eta((1.0 - alpha) / m);
}

double theta0_of(double M1, double M2, const Parameters& params) {
  const double m = params.m_star();
  const double a = std::pow(M1, m), b = std::pow(M2, m);
  return a / (a + b);
}

double sigma_of(double M1, double M2, double pi_star, const Parameters& params) {
  const double m = params.m_star();
  return params.newton_const * (m - 1.0) * pi_star * M1 * M2 / (std::pow(M1, m) + std::pow(M2, m));
}

double pi_upper_bound(double M1, double M2, double mc, double alpha, double beta, const Parameters& params) {
  const double m = params.m_star();
  return mc * (std::pow(M1, m) + std::pow(M2, m)) /
         (params.newton_const * (m - 1.0) * std::pow(M1, 1.0 - alpha) * std::pow(M2, 1.0 - beta));
}

double single_critical_mass(double c_star, const Parameters& params) {
  const double m = params.m_star();
  return std::pow(2.0 / (params.newton_const * c_star * (m - 1.0)), 0.5 * params.dim);
}

Verdict theorem13_verdict(double M1, double M2, double pi_star, const Parameters& params, double tol) {
  if (!params.at_intersection()) throw Error(ErrorKind::IntersectionRequired, "needs m1 = m2 = m*");
  if (!(pi_star > 0.0) || !(M1 > 0.0) || !(M2 > 0.0))
    throw Error(ErrorKind::OutOfRange, "masses and pi_star must be positive");
  Verdict v;
  v.theorem = Theorem::T13;
  const double sigma = sigma_of(M1, M2, pi_star, params);
  v.outcome = sigma < 1.0 - tol ? Outcome::Global : sigma > 1.0 + tol ? Outcome::BlowUp : Outcome::Boundary;
  v.evidence = {{"M1", M1},
                {"M2", M2},
                {"theta0", theta0_of(M1, M2, params)},
                {"pi_star", pi_star},
                {"Sigma", sigma}};
  return v;
}

}  // namespace critmass
