#pragma once

#include "nlpbma/dataset.hpp"

#include <string>

namespace nlpbma {

enum class PriorFamily { PMOM, PIMOM, PEMOM };

std::string family_name(PriorFamily f);
PriorFamily family_from_name(const std::string& name);

/* Default prior scale per family, chosen so P(|theta| < 0.2) = 0.01 with
 * phi = 1, i.e. a coefficient below 0.2 in absolute value is treated as
 * practically negligible. */
double default_tau(PriorFamily family);

/* Hyperparameters of a product non-local prior on the regression
 * coefficients plus an inverse-gamma prior on the residual variance:
 *
 *   pMOM   pi(theta|phi) = prod theta_i^{2r} / ((2r-1)!! (tau phi)^r) N(theta_i; 0, tau phi)
 *   piMOM  pi(theta|phi) = prod (tau phi)^{1/2} / (sqrt(pi) theta_i^2) exp(-tau phi / theta_i^2)
 *   peMOM  pi(theta|phi) = prod exp(sqrt(2) - tau phi / theta_i^2) N(theta_i; 0, tau phi)
 *
 * phi ~ IG(a_phi/2, b_phi/2), density proportional to
 * phi^{-a_phi/2 - 1} exp(-b_phi / (2 phi)).
 *
 * tau_n is the auxiliary Gaussian scale used when the piMOM density is
 * factored against a N(0, tau_n phi) kernel; monotone inversion of that
 * factor requires tau_n <= 2 tau (see penalty_inverse.hpp).
 */
struct PriorSpec {
  PriorFamily family = PriorFamily::PMOM;
  double tau = 0.358;
  double tau_n = 0.716;
  int r = 1;
  double a_phi = 0.01;
  double b_phi = 0.01;

  static PriorSpec defaults(PriorFamily family);

  void validate() const;
};

/* Log prior density of one coordinate given phi; -inf at theta = 0. */
double univariate_log_density(const PriorSpec& spec, double theta, double phi);

/* Joint log prior density of a coefficient vector given phi. */
double log_density(const PriorSpec& spec, const Vector& theta, double phi);

/* The penalty factor d(theta, phi) with pi(theta|phi) = d * N(theta; 0, v):
 * v = tau phi for pMOM/peMOM and v = tau_n phi for piMOM. Zero at theta=0. */
double penalty_d(const PriorSpec& spec, double theta, double phi);
double log_penalty_d(const PriorSpec& spec, double theta, double phi);

/* P(|theta| < t) under the univariate prior, by adaptive quadrature. */
double prob_below_threshold(const PriorSpec& spec, double t, double phi = 1.0);

/* Total mass of the univariate density, by adaptive quadrature; equals 1 up
 * to quadrature error for a correctly normalized prior. */
double univariate_mass(const PriorSpec& spec, double phi = 1.0);

/* log N(x; 0, v) */
double log_normal_pdf0(double x, double v);

}  // namespace nlpbma
