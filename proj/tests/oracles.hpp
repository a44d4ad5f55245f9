#pragma once

#include "nlpbma/dataset.hpp"
#include "nlpbma/priors.hpp"
#include "nlpbma/rng.hpp"
#include "nlpbma/tmvn.hpp"

#include <functional>
#include <vector>

/* Test-side reference implementations, deliberately independent of the
 * library's numeric routines: a hand-rolled adaptive Simpson integrator, a
 * rejection sampler for outer-truncated Gaussians, Kolmogorov-Smirnov
 * helpers, and a brute-force two-dimensional posterior integrator for the
 * single-covariate regression model. */
namespace oracle {

using nlpbma::Matrix;
using nlpbma::Vector;

double adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                        double tol = 1e-10, int max_depth = 30);

/* Integral over the real line of an even function, split at 0 with an
 * expanding upper cutoff. */
double integrate_even_real_line(const std::function<double(double)>& f,
                                double scale_hint, double tol = 1e-10);

/* One-sample Kolmogorov-Smirnov distance against a cdf. */
double ks_distance(std::vector<double> sample, const std::function<double(double)>& cdf);

/* Asymptotic critical value: P(D > c) = alpha. */
double ks_critical(double alpha, std::size_t n);

struct MomentSummary {
  Vector mean;
  Matrix cov;
  long long n = 0;
};

MomentSummary rejection_tmvn(const Vector& mu, const Matrix& sigma,
                             const nlpbma::OuterRectangle& region, int n_draws,
                             std::uint64_t seed, Matrix* draws_out = nullptr);

/* Posterior moments for y = x theta + eps, eps ~ N(0, phi), theta | phi
 * from a univariate non-local prior and phi ~ IG(a/2, b/2), computed by
 * nested quadrature on (theta, log phi). */
struct Posterior1d {
  double mean_theta = 0.0;
  double var_theta = 0.0;
  double mean_phi = 0.0;
  double var_phi = 0.0;
  double log_marginal = 0.0;  // includes the non-local penalty
};

Posterior1d posterior_1d_quadrature(const Vector& y, const Vector& x,
                                    const nlpbma::PriorSpec& spec);

/* Same machinery for the conjugate baseline N(0, v phi). */
Posterior1d posterior_1d_quadrature_normal(const Vector& y, const Vector& x, double v,
                                           double a_phi, double b_phi);

/* Batch-means standard error of the mean of a (possibly autocorrelated)
 * chain. */
double batch_means_se(const Vector& chain, int n_batches = 30);

}  // namespace oracle
