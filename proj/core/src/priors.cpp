#include "nlpbma/priors.hpp"

#include "nlpbma/quadrature.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace nlpbma {

namespace {

constexpr double inf = std::numeric_limits<double>::infinity();
constexpr double log_2pi = 1.8378770664093453;

/* log (2r-1)!! = log( (2r)! / (2^r r!) ) */
double log_odd_double_factorial(int r) {
  return std::lgamma(2.0 * r + 1.0) - r * std::log(2.0) - std::lgamma(r + 1.0);
}

void check_args(double theta, double phi) {
  if (!std::isfinite(theta)) throw std::invalid_argument("prior density: non-finite theta");
  if (!(phi > 0.0) || !std::isfinite(phi))
    throw std::invalid_argument("prior density: phi must be positive and finite");
}

}  // namespace

std::string family_name(PriorFamily f) {
  switch (f) {
    case PriorFamily::PMOM: return "pmom";
    case PriorFamily::PIMOM: return "pimom";
    case PriorFamily::PEMOM: return "pemom";
  }
  throw std::logic_error("family_name: unknown family");
}

PriorFamily family_from_name(const std::string& name) {
  std::string key(name.size(), '\0');
  std::transform(name.begin(), name.end(), key.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  if (key == "pmom" || key == "mom") return PriorFamily::PMOM;
  if (key == "pimom" || key == "imom") return PriorFamily::PIMOM;
  if (key == "pemom" || key == "emom") return PriorFamily::PEMOM;
  throw std::invalid_argument("unknown prior family '" + name +
                              "' (expected pmom, pimom or pemom)");
}

double default_tau(PriorFamily family) {
  switch (family) {
    case PriorFamily::PMOM: return 0.358;
    case PriorFamily::PIMOM: return 0.133;
    case PriorFamily::PEMOM: return 0.119;
  }
  throw std::logic_error("default_tau: unknown family");
}

PriorSpec PriorSpec::defaults(PriorFamily family) {
  PriorSpec s;
  s.family = family;
  s.tau = default_tau(family);
  s.tau_n = 2.0 * s.tau;
  s.validate();
  return s;
}

void PriorSpec::validate() const {
  if (!(tau > 0.0) || !std::isfinite(tau))
    throw std::invalid_argument("PriorSpec: tau must be positive");
  if (!(tau_n > 0.0) || !std::isfinite(tau_n))
    throw std::invalid_argument("PriorSpec: tau_n must be positive");
  if (r < 1) throw std::invalid_argument("PriorSpec: r must be at least 1");
  if (!(a_phi > 0.0) || !(b_phi > 0.0))
    throw std::invalid_argument("PriorSpec: a_phi and b_phi must be positive");
  if (family == PriorFamily::PIMOM && tau_n > 2.0 * tau + 1e-12)
    throw std::invalid_argument(
        "PriorSpec: monotone inversion of the piMOM penalty requires tau_n <= 2*tau; "
        "the derivative of the log penalty has real roots whenever tau_n > 2*tau, so the "
        "often-quoted condition tau_n >= 2*tau does not give a monotone map");
}

double log_normal_pdf0(double x, double v) {
  return -0.5 * (log_2pi + std::log(v)) - 0.5 * x * x / v;
}

double univariate_log_density(const PriorSpec& spec, double theta, double phi) {
  check_args(theta, phi);
  if (theta == 0.0) return -inf;
  const double tp = spec.tau * phi;
  switch (spec.family) {
    case PriorFamily::PMOM:
      return 2.0 * spec.r * std::log(std::abs(theta)) -
             log_odd_double_factorial(spec.r) - spec.r * std::log(tp) +
             log_normal_pdf0(theta, tp);
    case PriorFamily::PIMOM:
      return 0.5 * std::log(tp) - 0.5 * std::log(M_PI) -
             2.0 * std::log(std::abs(theta)) - tp / (theta * theta);
    case PriorFamily::PEMOM:
      return M_SQRT2 - tp / (theta * theta) + log_normal_pdf0(theta, tp);
  }
  throw std::logic_error("univariate_log_density: unknown family");
}

double log_density(const PriorSpec& spec, const Vector& theta, double phi) {
  double total = 0.0;
  for (Eigen::Index i = 0; i < theta.size(); ++i)
    total += univariate_log_density(spec, theta[i], phi);
  return total;
}

double log_penalty_d(const PriorSpec& spec, double theta, double phi) {
  check_args(theta, phi);
  if (theta == 0.0) return -inf;
  const double tp = spec.tau * phi;
  const double z = theta * theta;
  switch (spec.family) {
    case PriorFamily::PMOM:
      return spec.r * std::log(z) - log_odd_double_factorial(spec.r) -
             spec.r * std::log(tp);
    case PriorFamily::PIMOM:
      /* pi_I(theta|phi) / N(theta; 0, tau_n phi) */
      return 0.5 * std::log(2.0 * spec.tau * spec.tau_n) + std::log(phi) -
             std::log(z) - tp / z + z / (2.0 * spec.tau_n * phi);
    case PriorFamily::PEMOM:
      return M_SQRT2 - tp / z;
  }
  throw std::logic_error("log_penalty_d: unknown family");
}

double penalty_d(const PriorSpec& spec, double theta, double phi) {
  if (theta == 0.0) {
    check_args(theta, phi);
    return 0.0;
  }
  return std::exp(log_penalty_d(spec, theta, phi));
}

double prob_below_threshold(const PriorSpec& spec, double t, double phi) {
  if (!(t >= 0.0) || !std::isfinite(t))
    throw std::invalid_argument("prob_below_threshold: t must be nonnegative and finite");
  if (t == 0.0) return 0.0;
  auto density = [&](double x) {
    return x == 0.0 ? 0.0 : std::exp(univariate_log_density(spec, x, phi));
  };
  QuadratureResult half = integrate_finite(density, 0.0, t, 1e-10);
  if (!half.converged)
    throw std::runtime_error("prob_below_threshold: quadrature did not converge");
  return 2.0 * half.value;
}

double univariate_mass(const PriorSpec& spec, double phi) {
  auto density = [&](double x) {
    return x == 0.0 ? 0.0 : std::exp(univariate_log_density(spec, x, phi));
  };
  QuadratureResult r = integrate_symmetric_real_line(density, 1e-10);
  if (!r.converged)
    throw std::runtime_error("univariate_mass: quadrature did not converge");
  return r.value;
}

}  // namespace nlpbma
