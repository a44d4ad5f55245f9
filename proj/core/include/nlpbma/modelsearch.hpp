#pragma once

#include "nlpbma/marglik.hpp"
#include "nlpbma/model_indicator.hpp"

#include <cstdint>
#include <memory>
#include <unordered_map>
#include <vector>

namespace nlpbma {

/* Marginal likelihoods are frozen at first evaluation and reused, so the
 * same model always carries the same value within a run no matter which
 * routine (search, enumeration, averaging) asks for it. */
class MarglikCacheStore {
public:
  explicit MarglikCacheStore(MarginalEvaluator eval) : eval_(std::move(eval)) {}

  const LogMarginal& get(const ModelIndicator& model);

  std::size_t size() const { return map_.size(); }
  long long quarantined() const { return quarantined_; }
  const MarginalEvaluator& evaluator() const { return eval_; }

private:
  MarginalEvaluator eval_;
  std::unordered_map<ModelIndicator, LogMarginal, ModelIndicatorHash> map_;
  long long quarantined_ = 0;
};

struct ModelProb {
  ModelIndicator model;
  double prob = 0.0;
  long long count = 0;        // visit count (search) or 0 (enumeration)
  double log_marginal = 0.0;
  double log_prior = 0.0;
};

struct ModelSearchOptions {
  bool randomized_order = false;  // permute the coordinate sweep each pass
  ModelIndicator start;           // empty -> null model
};

struct ModelSearchResult {
  std::unordered_map<ModelIndicator, long long, ModelIndicatorHash> visit_counts;
  long long n_sweeps = 0;
  ModelIndicator final_model;
  std::shared_ptr<MarglikCacheStore> cache;
  long long quarantined = 0;
};

/* Gibbs scan over inclusion indicators: each sweep updates every coordinate
 * from its exact conditional given the rest, using cached marginal
 * likelihoods and the truncated beta-binomial model prior. One visit is
 * recorded per sweep. */
ModelSearchResult gibbs_model_search(const Dataset& data, const PriorSpec& spec,
                                     long long n_sweeps, std::uint64_t seed,
                                     const MargLikConfig& mlcfg,
                                     const ModelSearchOptions& opts = {},
                                     std::shared_ptr<MarglikCacheStore> cache = nullptr);

/* Visit frequencies normalized to probabilities, sorted by probability with
 * a deterministic tie-break on the model key; top_k < 0 keeps all. */
std::vector<ModelProb> posterior_model_probs(const ModelSearchResult& result,
                                             int top_k = -1);

struct ModelPosterior {
  std::vector<ModelProb> models;  // sorted by probability, descending
  double log_normalizer = 0.0;
  std::shared_ptr<MarglikCacheStore> cache;
};

/* Exact posterior over all models (optionally capped in size), feasible for
 * small p; shares the cache with a prior search when given one. */
ModelPosterior enumerate_models(const Dataset& data, const PriorSpec& spec,
                                const MargLikConfig& mlcfg, int max_size = -1,
                                std::shared_ptr<MarglikCacheStore> cache = nullptr);

/* Marginal inclusion probability of each coordinate under the given model
 * probabilities. */
Vector inclusion_probs(const std::vector<ModelProb>& models, int p);

}  // namespace nlpbma
