#pragma once

#include <functional>

namespace nlpbma {

struct QuadratureResult {
  double value = 0.0;
  double abs_error = 0.0;
  bool converged = false;
};

/* Adaptive integration over [a,b]; a and b must be finite. */
QuadratureResult integrate_finite(const std::function<double(double)>& f, double a,
                                  double b, double abs_tol = 1e-10);

/* Adaptive integration over [a, +inf). */
QuadratureResult integrate_upper(const std::function<double(double)>& f, double a,
                                 double abs_tol = 1e-10);

/* Integral of an even-symmetric density over the whole real line, split at
 * the origin so integrable singularities or zeros at 0 are handled. */
QuadratureResult integrate_symmetric_real_line(const std::function<double(double)>& f,
                                               double abs_tol = 1e-10);

}  // namespace nlpbma
