#pragma once

#include <cstddef>
#include <functional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "critmass/model.hpp"

namespace critmass {

// (eta/theta)^eta ((1-eta)/(1-theta))^{1-eta}; throws OutOfRange outside (0,1)^2.
double young_A(double theta, double eta);

// eta^eta (1-eta)^{1-eta}.
double z_eta(double eta);

struct Kappas {
  double k1 = 0.0;
  double k2 = 0.0;
};

// Weights balancing the diffusion terms against the Newtonian constant; they satisfy
// k1 k2 = c (m1-1) theta k1^{m1} = c (m2-1) (1-theta) k2^{m2}. Throws DegenerateExponents.
Kappas kappas(double theta, const Parameters& params);

// f(x) = x - lambda_theta x^s with s = (1-alpha)/m1 + (1-beta)/m2 > 1, maximal at x0.
struct PeakFunction {
  double lambda_theta = 0.0;
  double exponent = 0.0;
  double x0 = 0.0;

  double operator()(double x) const;
  double derivative(double x) const;
  double peak() const { return (*this)(x0); }
};

// Throws IntersectionPoint when s == 1 and OutOfRange when s < 1.
PeakFunction peak_function(double lambda_theta, double s);
PeakFunction x0_and_f(double lambda_theta, double alpha, double beta, const Parameters& params);

enum class Outcome { Global, BlowUp, Boundary, Indeterminate };
enum class Theorem { T12, T13 };

std::string_view to_string(Outcome o) noexcept;
std::string_view to_string(Theorem t) noexcept;

struct ThetaSample {
  double theta = 0.0;
  double energy_bound = 0.0;  // threshold the initial free energy must stay below
  double R = 0.0;
  double x0 = 0.0;
  bool energy_ok = false;
  Outcome outcome = Outcome::Indeterminate;
};

struct Verdict {
  Outcome outcome = Outcome::Indeterminate;
  Theorem theorem = Theorem::T12;
  // Named scalar evidence in insertion order.
  std::vector<std::pair<std::string, double>> evidence;
  std::vector<ThetaSample> scan;

  double get(std::string_view key) const;
};

struct InitialDatum {
  double M1 = 0.0;
  double M2 = 0.0;
  double lm1 = 0.0;  // integral of u1^{m1}
  double lm2 = 0.0;  // integral of u2^{m2}
  double F0 = 0.0;
};

struct T12Options {
  std::size_t theta_scan = 101;
  double theta_lo = 0.005;
  double theta_hi = 0.995;
  double tol = 1e-6;
};

// Per-theta quantities of the off-intersection criterion.
ThetaSample theorem12_sample(const InitialDatum& u, const Parameters& params, double alpha, double beta,
                             double lambda_star, double theta, double tol = 1e-6);

// Exponent restriction under which the blow-up half of the criterion applies. It can only hold on
// the diagonal m1 = m2, where it is an identity.
bool blowup_exponent_condition(const Parameters& params, double alpha, double beta);

// Global: some theta has the energy bound and R < x0. BlowUp: some theta has the energy bound,
// R > x0 and the exponent restriction. Boundary: |R - x0| <= tol x0. Otherwise Indeterminate.
// Throws RegimeMismatch outside p>=1, q>=1, r>1 or at (m*, m*).
Verdict theorem12_verdict(const InitialDatum& u, const Parameters& params, double alpha, double beta,
                          double lambda_star, const T12Options& opts = {});

using LambdaOfExponents = std::function<double(double alpha, double beta)>;

// Best verdict over alpha_points interior alphas (beta from the balance relation), ranked
// Boundary, Global, BlowUp, Indeterminate. Pairs with inadmissible beta or s <= 1 are skipped.
Verdict theorem12_alpha_scan(const InitialDatum& u, const Parameters& params, const LambdaOfExponents& lambda_star,
                             std::size_t alpha_points = 11, const T12Options& opts = {});

// LHS - RHS of the theta-free form of R = x0.
double critical_identity_residual(double M1, double M2, double lm1, double lm2, const Parameters& params,
                                  double alpha, double beta, double lambda_star);

// lm2 placing (M1, M2, lm1) exactly on the critical surface; throws OutOfRange if none positive exists.
double critical_lm2(double M1, double M2, double lm1, const Parameters& params, double alpha, double beta,
                    double lambda_star);

// Both closed forms of the intersection-point constant; requires m1 = m2 = m* and alpha + beta = 2/d.
double mc_constant(double lambda_star, double alpha, double beta, const Parameters& params);
double mc_constant_z(double lambda_star, double alpha, double beta, const Parameters& params);

double theta0_of(double M1, double M2, const Parameters& params);

// c (m*-1) pi M1 M2 / (M1^{m*} + M2^{m*}).
double sigma_of(double M1, double M2, double pi_star, const Parameters& params);

// Upper bound on the two-species constant in terms of M_c.
double pi_upper_bound(double M1, double M2, double mc, double alpha, double beta, const Parameters& params);

// Equal-mass threshold (2 / (c C_* (m*-1)))^{d/2}.
double single_critical_mass(double c_star, const Parameters& params);

// Sigma < 1 - tol: Global; Sigma > 1 + tol: BlowUp; otherwise Boundary. Throws IntersectionRequired.
Verdict theorem13_verdict(double M1, double M2, double pi_star, const Parameters& params, double tol = 1e-6);

}  // namespace critmass
