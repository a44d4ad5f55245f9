#include "nlpbma/quadrature.hpp"

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>
#include <cmath>
#include <stdexcept>

namespace nlpbma {

QuadratureResult integrate_finite(const std::function<double(double)>& f, double a,
                                  double b, double abs_tol) {
  if (!std::isfinite(a) || !std::isfinite(b))
    throw std::invalid_argument("integrate_finite: endpoints must be finite");
  boost::math::quadrature::tanh_sinh<double> integrator;
  double error = 0.0, l1 = 0.0;
  QuadratureResult r;
  r.value = integrator.integrate(f, a, b, 1e-12, &error, &l1);
  r.abs_error = error * std::max(l1, 1.0);
  r.converged = r.abs_error <= abs_tol;
  return r;
}

QuadratureResult integrate_upper(const std::function<double(double)>& f, double a,
                                 double abs_tol) {
  boost::math::quadrature::exp_sinh<double> integrator;
  double error = 0.0, l1 = 0.0;
  QuadratureResult r;
  auto shifted = [&](double t) { return f(a + t); };
  r.value = integrator.integrate(shifted, 1e-12, &error, &l1);
  r.abs_error = error * std::max(l1, 1.0);
  r.converged = r.abs_error <= abs_tol;
  return r;
}

QuadratureResult integrate_symmetric_real_line(const std::function<double(double)>& f,
                                               double abs_tol) {
  QuadratureResult half = integrate_upper(f, 0.0, 0.5 * abs_tol);
  QuadratureResult r;
  r.value = 2.0 * half.value;
  r.abs_error = 2.0 * half.abs_error;
  r.converged = half.converged;
  return r;
}

}  // namespace nlpbma
