#pragma once

#include "nlpbma/dataset.hpp"
#include "nlpbma/modelsearch.hpp"
#include "nlpbma/samplers.hpp"

#include <cstdint>
#include <vector>

namespace nlpbma {

struct BmaOptions {
  int draws_per_model = 1000;
  int chain_burn_in = 100;
  int top_k = -1;          // cap on the number of models averaged; -1 = all
  double min_prob = 0.0;   // drop models whose weight falls below this
  bool retain_draws = false;  // keep a weight-proportional pooled draw matrix
  int threads = 1;
};

struct BmaResult {
  Vector theta_mean;   // length p; zero on never-included coordinates
  Vector inclusion;    // marginal inclusion probabilities
  double phi_mean = 0.0;
  std::vector<ModelProb> models_used;  // weights renormalized over the averaged set
  double coverage = 0.0;  // input probability mass carried by the averaged set
  std::vector<ModelIndicator> failed_models;  // dropped after sampler failures
  Matrix pooled_theta;  // retain_draws only: rows are full-p coefficient draws
  Vector pooled_phi;
};

/* Mix per-model posterior means with the supplied model weights. Each
 * model's conditional posterior is summarized by its latent-truncation
 * Gibbs chain (the empty model contributes zero coefficients). Models whose
 * chain fails are dropped and the remaining weights renormalized. */
BmaResult bma_posterior_mean(const std::vector<ModelProb>& model_probs,
                             const Dataset& data, const PriorSpec& spec,
                             const BmaOptions& opts, std::uint64_t seed);

/* Point predictions X_new * theta_mean. */
Vector bma_predict(const BmaResult& bma, const Matrix& X_new);

struct PredictionBand {
  Vector point;
  Vector lower;
  Vector upper;
  double level = 0.0;
};

/* Equal-tailed posterior band for the linear predictor from the pooled
 * draws; requires retain_draws. */
PredictionBand bma_predict_band(const BmaResult& bma, const Matrix& X_new, double level);

}  // namespace nlpbma
