#include "nlpbma/penalty_inverse.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace nlpbma {

ImomPenaltyCurve::ImomPenaltyCurve(double tau_in, double tau_n_in, double phi_in,
                                   double tol_in)
    : tau(tau_in), tau_n(tau_n_in), phi(phi_in), tol(tol_in) {
  if (!(tau > 0.0) || !(tau_n > 0.0) || !(phi > 0.0) || !std::isfinite(tau) ||
      !std::isfinite(tau_n) || !std::isfinite(phi))
    throw std::invalid_argument("ImomPenaltyCurve: tau, tau_n, phi must be positive");
  if (tau_n > 2.0 * tau + 1e-12)
    throw std::invalid_argument(
        "ImomPenaltyCurve: monotonicity requires tau_n <= 2*tau (g' acquires real roots "
        "when tau_n > 2*tau; the reversed condition tau_n >= 2*tau does not make g "
        "monotone)");
  if (!(tol > 0.0)) throw std::invalid_argument("ImomPenaltyCurve: tol must be positive");
}

double g_of_z(const ImomPenaltyCurve& c, double z) {
  if (!(z > 0.0) || !std::isfinite(z))
    throw std::invalid_argument("g_of_z: z must be positive and finite");
  return 0.5 * std::log(2.0 * c.tau * c.tau_n) + std::log(c.phi) - std::log(z) -
         c.tau * c.phi / z + z / (2.0 * c.tau_n * c.phi);
}

double invert_g(const ImomPenaltyCurve& c, double t, InvertDiagnostics* diag) {
  if (!std::isfinite(t)) throw std::invalid_argument("invert_g: target must be finite");

  int iters = 0;
  auto f = [&](double z) {
    ++iters;
    return g_of_z(c, z) - t;
  };

  /* Quadratic-surrogate starting guess; it can land at a nonpositive value
   * (negative discriminant or b > 0), in which case the natural scale
   * tau_n * phi is used instead. */
  const double b = std::log(c.tau * c.tau_n) + 2.0 * std::log(c.phi) + std::log(2.0) - t;
  const double disc = b * b - 2.0 * c.tau / c.tau_n;
  double z0 = c.tau_n * c.phi;
  if (disc >= 0.0) {
    const double cand = c.tau_n * c.phi * (-b + std::sqrt(disc));
    if (std::isfinite(cand) && cand > 0.0) z0 = cand;
  }

  /* Geometric bracketing around the guess. */
  double zlo = z0, zhi = z0;
  double flo = f(z0), fhi = flo;
  for (int k = 0; k < 2000 && flo > 0.0 && zlo > 1e-290; ++k) {
    zhi = zlo;
    fhi = flo;
    zlo *= 0.5;
    flo = f(zlo);
  }
  for (int k = 0; k < 2000 && fhi < 0.0 && zhi < 1e290; ++k) {
    zlo = zhi;
    flo = fhi;
    zhi *= 2.0;
    fhi = f(zhi);
  }
  if (flo > 0.0 || fhi < 0.0)
    throw std::runtime_error("invert_g: failed to bracket the root for t = " +
                             std::to_string(t));

  /* Regula falsi with Illinois damping in x = log z. */
  double xlo = std::log(zlo), xhi = std::log(zhi);
  double z = zlo;
  int side = 0;
  for (int k = 0; k < 200; ++k) {
    if (std::abs(flo) <= c.tol) {
      z = zlo;
      break;
    }
    if (std::abs(fhi) <= c.tol) {
      z = zhi;
      break;
    }
    double x;
    if (std::isfinite(flo) && std::isfinite(fhi))
      x = (xlo * fhi - xhi * flo) / (fhi - flo);
    else
      x = 0.5 * (xlo + xhi);
    z = std::exp(x);
    const double fx = f(z);
    if (std::abs(fx) <= c.tol) break;
    if (fx < 0.0) {
      xlo = x;
      flo = fx;
      if (side == -1) fhi *= 0.5;
      side = -1;
    } else {
      xhi = x;
      fhi = fx;
      if (side == 1) flo *= 0.5;
      side = 1;
    }
  }
  const double residual = g_of_z(c, z) - t;
  if (std::abs(residual) > c.tol)
    throw std::runtime_error("invert_g: no convergence within iteration budget");
  if (diag) {
    diag->iterations = iters;
    diag->residual = residual;
  }
  return z;
}

}  // namespace nlpbma
