#include "nlpbma/modelsearch.hpp"

#include "nlpbma/rng.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace nlpbma {

namespace {
constexpr double neg_inf = -std::numeric_limits<double>::infinity();
}

const LogMarginal& MarglikCacheStore::get(const ModelIndicator& model) {
  auto it = map_.find(model);
  if (it != map_.end()) return it->second;
  LogMarginal lm;
  try {
    lm = eval_(model);
  } catch (const std::exception&) {
    /* Quarantine: an unevaluable model never re-enters the search. */
    lm.value = neg_inf;
    lm.exact = false;
    ++quarantined_;
  }
  return map_.emplace(model, lm).first->second;
}

ModelSearchResult gibbs_model_search(const Dataset& data, const PriorSpec& spec,
                                     long long n_sweeps, std::uint64_t seed,
                                     const MargLikConfig& mlcfg,
                                     const ModelSearchOptions& opts,
                                     std::shared_ptr<MarglikCacheStore> cache) {
  if (n_sweeps < 1)
    throw std::invalid_argument("gibbs_model_search: n_sweeps must be positive");
  const int p = static_cast<int>(data.p());
  const Eigen::Index n = data.n();
  if (!cache) cache = std::make_shared<MarglikCacheStore>(MarginalEvaluator(data, spec, mlcfg));

  ModelIndicator current =
      opts.start.dimension() == p ? opts.start : ModelIndicator(p);
  Rng rng(seed);
  ModelSearchResult result;
  result.cache = cache;

  std::vector<int> order(p);
  std::iota(order.begin(), order.end(), 0);

  auto log_score = [&](const ModelIndicator& m) {
    const double lp = log_model_prior_betabinomial(m, n);
    if (lp == neg_inf) return neg_inf;
    return cache->get(m).value + lp;
  };

  for (long long sweep = 0; sweep < n_sweeps; ++sweep) {
    if (opts.randomized_order) {
      for (int i = p - 1; i > 0; --i) {
        const int j = static_cast<int>(rng.uniform() * (i + 1));
        std::swap(order[i], order[std::min(j, i)]);
      }
    }
    for (int i : order) {
      ModelIndicator off = current, on = current;
      off.set(i, false);
      on.set(i, true);
      const double s_off = log_score(off);
      const double s_on = log_score(on);
      if (s_on == neg_inf && s_off == neg_inf)
        throw std::runtime_error("gibbs_model_search: both conditional states unscorable");
      double p_on;
      if (s_on == neg_inf)
        p_on = 0.0;
      else if (s_off == neg_inf)
        p_on = 1.0;
      else
        p_on = 1.0 / (1.0 + std::exp(s_off - s_on));
      current.set(i, rng.uniform() < p_on);
    }
    ++result.visit_counts[current];
  }
  result.n_sweeps = n_sweeps;
  result.final_model = current;
  result.quarantined = cache->quarantined();
  return result;
}

namespace {

void sort_model_probs(std::vector<ModelProb>& v) {
  std::sort(v.begin(), v.end(), [](const ModelProb& a, const ModelProb& b) {
    if (a.prob != b.prob) return a.prob > b.prob;
    return a.model < b.model;
  });
}

}  // namespace

std::vector<ModelProb> posterior_model_probs(const ModelSearchResult& result, int top_k) {
  std::vector<ModelProb> out;
  out.reserve(result.visit_counts.size());
  const double total = static_cast<double>(result.n_sweeps);
  for (const auto& [model, count] : result.visit_counts) {
    ModelProb mp;
    mp.model = model;
    mp.count = count;
    mp.prob = count / total;
    if (result.cache) {
      mp.log_marginal = result.cache->get(model).value;
      mp.log_prior =
          log_model_prior_betabinomial(model, result.cache->evaluator().gram().n());
    }
    out.push_back(std::move(mp));
  }
  sort_model_probs(out);
  if (top_k >= 0 && static_cast<std::size_t>(top_k) < out.size()) out.resize(top_k);
  return out;
}

ModelPosterior enumerate_models(const Dataset& data, const PriorSpec& spec,
                                const MargLikConfig& mlcfg, int max_size,
                                std::shared_ptr<MarglikCacheStore> cache) {
  const int p = static_cast<int>(data.p());
  if (p > 25)
    throw std::invalid_argument("enumerate_models: refuse to enumerate 2^p models for p > 25");
  const Eigen::Index n = data.n();
  if (!cache) cache = std::make_shared<MarglikCacheStore>(MarginalEvaluator(data, spec, mlcfg));
  const int cap = max_size < 0 ? p : std::min(max_size, p);

  ModelPosterior post;
  post.cache = cache;
  std::vector<double> scores;
  for (std::uint64_t mask = 0; mask < (1ULL << p); ++mask) {
    if (__builtin_popcountll(mask) > cap) continue;
    ModelIndicator m(p);
    for (int i = 0; i < p; ++i)
      if (mask & (1ULL << i)) m.set(i, true);
    const double lp = log_model_prior_betabinomial(m, n);
    if (lp == neg_inf) continue;
    ModelProb mp;
    mp.model = std::move(m);
    mp.log_prior = lp;
    mp.log_marginal = cache->get(mp.model).value;
    post.models.push_back(std::move(mp));
    scores.push_back(post.models.back().log_marginal + lp);
  }
  double mx = neg_inf;
  for (double s : scores) mx = std::max(mx, s);
  if (!std::isfinite(mx))
    throw std::runtime_error("enumerate_models: no scorable model");
  double sum = 0.0;
  for (double s : scores) sum += std::exp(s - mx);
  post.log_normalizer = mx + std::log(sum);
  for (std::size_t i = 0; i < post.models.size(); ++i)
    post.models[i].prob = std::exp(scores[i] - post.log_normalizer);
  sort_model_probs(post.models);
  return post;
}

Vector inclusion_probs(const std::vector<ModelProb>& models, int p) {
  Vector out = Vector::Zero(p);
  for (const auto& mp : models)
    for (int i : mp.model.indices()) out[i] += mp.prob;
  return out;
}

}  // namespace nlpbma
