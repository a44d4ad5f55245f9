#pragma once

#include "nlpbma/dataset.hpp"
#include "nlpbma/priors.hpp"
#include "nlpbma/rng.hpp"

#include <cstdint>
#include <vector>

namespace nlpbma {

/* Survival function of a chi-squared(1) variable, S1(x) = erfc(sqrt(x/2)). */
double chi1_survival(double x);

/* The pMOM prior on one coordinate is the marginal of
 *
 *   lambda ~ pi(lambda) = S1(lambda / tau) / tau,
 *   theta | lambda ~ N(0, tau) restricted to theta^2 > lambda,
 *
 * so sampling reduces to inverting the lambda cdf. The cdf has the closed
 * form F(u) = H(u/tau) with H(x) = x S1(x) + F3(x), F3 the chi-squared(3)
 * cdf, which this table inverts by monotone interpolation on a log-spaced
 * grid plus one Newton polish. */
class LambdaInverseCdfTable {
public:
  LambdaInverseCdfTable(double tau, int grid_size = 4096);

  double tau() const { return tau_; }
  int grid_size() const { return static_cast<int>(lambda_.size()); }

  /* cdf F(lambda) = P(Lambda <= lambda) */
  double cdf(double lambda) const;

  /* quantile function; u must lie in (0,1) */
  double inverse(double u) const;

private:
  double tau_;
  std::vector<double> lambda_;
  std::vector<double> cdf_;
};

/* Exact helpers used by the table (exposed for tests): H and its density. */
double lambda_mixing_cdf_h(double x);
double lambda_mixing_pdf_h(double x);

/* n_draws x p matrix of pMOM(tau, r=1) prior draws via the latent
 * truncation construction above. */
Matrix sample_pmom_prior(int p, double tau, int n_draws, std::uint64_t seed);

struct RejectionSample {
  Matrix draws;
  double acceptance_rate = 0.0;
};

/* Univariate prior draws for peMOM (Gaussian envelope, acceptance
 * exp(-tau phi / theta^2)) or piMOM (Cauchy envelope with scale
 * sqrt(tau phi)); pMOM is delegated to the latent-truncation sampler. */
RejectionSample sample_nlp_prior_rejection(const PriorSpec& spec, double phi,
                                           int n_draws, std::uint64_t seed);

/* Draw from N(0, sd^2) conditioned on |x| > t. */
double sample_two_sided_tail_normal(Rng& rng, double sd, double t);

}  // namespace nlpbma
