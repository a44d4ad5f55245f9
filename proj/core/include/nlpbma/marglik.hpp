#pragma once

#include "nlpbma/dataset.hpp"
#include "nlpbma/model_indicator.hpp"
#include "nlpbma/priors.hpp"

#include <Eigen/Cholesky>
#include <cstdint>
#include <memory>
#include <vector>

namespace nlpbma {

struct MargLikConfig {
  int n_samples = 10000;        // penalty-factor Monte Carlo sample size
  std::uint64_t seed = 0;       // base seed; each model derives its own stream
  bool local_prior_only = false;  // skip the penalty factor (Normal-IG baseline)
};

struct LogMarginal {
  double value = 0.0;
  double mc_se = 0.0;   // Monte Carlo standard error of the log value
  int n_samples = 0;    // 0 on the exact path
  bool exact = true;
  bool degenerate_weights = false;  // one importance weight carries > 50% of the sum
};

/* Posterior quantities of the conjugate baseline
 * theta | phi ~ N(0, v phi I), phi ~ IG(a/2, b/2):
 * theta | phi, y ~ N(m, phi S^{-1}), phi | y ~ IG(alpha_post, beta_post). */
struct NormalIgPosterior {
  Vector m;
  Matrix S;
  Matrix chol_S;      // lower
  double q = 0.0;     // y'y - y'X m
  double alpha_post = 0.0;
  double beta_post = 0.0;
  double log_marginal = 0.0;
};

/* Shared per-dataset precomputation (Gram matrix); lets repeated model
 * evaluations avoid touching the n x p design. */
class GramCache {
public:
  explicit GramCache(const Dataset& data);

  Eigen::Index n() const { return n_; }
  Eigen::Index p() const { return XtX_.cols(); }
  double yty() const { return yty_; }

  /* Submatrix pieces for the given coordinates. */
  Matrix gram(const std::vector<int>& idx) const;
  Vector xty(const std::vector<int>& idx) const;

private:
  Eigen::Index n_;
  Matrix XtX_;
  Vector Xty_;
  double yty_;
};

NormalIgPosterior normal_ig_posterior(const GramCache& gram, const std::vector<int>& idx,
                                      double v_scale, double a_phi, double b_phi);

/* Closed-form log marginal likelihood under the conjugate baseline. */
double log_marginal_normal_ig(const Dataset& data, const ModelIndicator& model,
                              double v_scale, double a_phi, double b_phi);

/* Log marginal likelihood under the non-local prior: the conjugate value
 * times the posterior expectation of the penalty factor. Exact for pMOM
 * models of size <= 2; Monte Carlo (with batch-means standard error)
 * otherwise. piMOM uses importance sampling from the tau_n baseline. */
LogMarginal log_marginal_nlp(const Dataset& data, const ModelIndicator& model,
                             const PriorSpec& spec, const MargLikConfig& cfg);

/* Evaluator bound to one dataset; reuses the Gram cache across models. */
class MarginalEvaluator {
public:
  MarginalEvaluator(const Dataset& data, const PriorSpec& spec, const MargLikConfig& cfg);

  LogMarginal operator()(const ModelIndicator& model) const;

  const GramCache& gram() const { return *gram_; }
  const PriorSpec& spec() const { return spec_; }
  const MargLikConfig& config() const { return cfg_; }

private:
  std::shared_ptr<const GramCache> gram_;
  PriorSpec spec_;
  MargLikConfig cfg_;
};

/* Beta-binomial(1,1) model-space prior truncated at |model| <= n:
 * log P = -log(p+1) - log C(p, |model|), -inf beyond the truncation. */
double log_model_prior_betabinomial(const ModelIndicator& model, Eigen::Index n);

/* Deterministic per-model stream: identical for identical (seed, model). */
std::uint64_t model_stream_seed(std::uint64_t base, const ModelIndicator& model);

}  // namespace nlpbma
