#include "nlpbma/rng.hpp"

#include <cmath>

namespace nlpbma {

namespace {

constexpr double sqrt2 = 1.4142135623730951;
constexpr double log_sqrt_2pi = 0.9189385332046727;

/* Acklam's rational approximation to the standard normal quantile.
 * Relative error below 1.2e-9 everywhere on (0,1). */
double acklam(double p) {
  static const double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                             -2.759285104469687e+02, 1.383577518672690e+02,
                             -3.066479806614716e+01, 2.506628277459239e+00};
  static const double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                             -1.556989798598866e+02, 6.680131188771972e+01,
                             -1.328068155288572e+01};
  static const double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                             -2.400758277161838e+00, -2.549732539343734e+00,
                             4.374664141464968e+00,  2.938163982698783e+00};
  static const double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                             2.445134137142996e+00, 3.754408661907416e+00};
  const double plow = 0.02425;
  if (p < plow) {
    const double q = std::sqrt(-2.0 * std::log(p));
    return (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
           ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  }
  if (p > 1.0 - plow) {
    const double q = std::sqrt(-2.0 * std::log(1.0 - p));
    return -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
           ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  }
  const double q = p - 0.5;
  const double r = q * q;
  return (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
         (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
}

}  // namespace

double normal_cdf(double x) { return 0.5 * std::erfc(-x / sqrt2); }

double normal_cdf_complement(double x) { return 0.5 * std::erfc(x / sqrt2); }

double log_normal_cdf(double x) {
  if (x > -1.0) return std::log1p(-normal_cdf_complement(x));
  if (x > -36.0) return std::log(0.5 * std::erfc(-x / sqrt2));
  /* Deep lower tail: asymptotic expansion of Mills' ratio. */
  const double x2 = x * x;
  const double corr = 1.0 - 1.0 / x2 + 3.0 / (x2 * x2);
  return -0.5 * x2 - log_sqrt_2pi - std::log(-x) + std::log(corr);
}

double Rng::normal_quantile(double p) {
  if (!(p > 0.0) || !(p < 1.0))
    throw std::invalid_argument("normal_quantile: p must lie in (0,1)");
  double x = acklam(p);
  if (std::abs(x) < 35.0) {
    /* One Halley refinement against the exact cdf pushes the approximation
     * to near machine precision. */
    const double e = normal_cdf(x) - p;
    const double u = e * std::sqrt(2.0 * M_PI) * std::exp(0.5 * x * x);
    x = x - u / (1.0 + 0.5 * x * u);
  }
  return x;
}

}  // namespace nlpbma
