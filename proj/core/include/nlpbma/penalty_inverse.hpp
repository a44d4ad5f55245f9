#pragma once

#include <cstdint>

namespace nlpbma {

/* The piMOM density factors as pi_I(theta|phi) = exp(g(theta^2)) N(theta; 0, tau_n phi)
 * with
 *
 *   g(z) = 0.5 log(2 tau tau_n) + log phi - log z - tau phi / z + z / (2 tau_n phi).
 *
 * g is strictly increasing from -inf to +inf on z > 0 whenever tau_n <= 2 tau
 * (g' has real roots z = tau_n phi (1 +- sqrt(1 - 2 tau / tau_n)) as soon as
 * tau_n > 2 tau), so thresholds of the penalty can be recovered by inverting
 * g. Inversion uses a closed-form starting guess, geometric bracketing and
 * Illinois-damped regula falsi on (log z, g). */
struct ImomPenaltyCurve {
  double tau;
  double tau_n;
  double phi;
  double tol = 1e-5;

  ImomPenaltyCurve(double tau_in, double tau_n_in, double phi_in, double tol_in = 1e-5);
};

double g_of_z(const ImomPenaltyCurve& curve, double z);

struct InvertDiagnostics {
  int iterations = 0;
  double residual = 0.0;
};

/* Solve g(z) = t; the result satisfies |g(z) - t| <= curve.tol. */
double invert_g(const ImomPenaltyCurve& curve, double t, InvertDiagnostics* diag = nullptr);

}  // namespace nlpbma
