#include "nlpbma/bma.hpp"

#include "nlpbma/parallel.hpp"
#include "nlpbma/rng.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace nlpbma {

namespace {

struct PerModelFit {
  bool ok = false;
  Vector mean;          // on the model's coordinates
  double phi_mean = 0.0;
  Matrix draws;         // post burn-in, on the model's coordinates
  Vector phi_draws;
  std::vector<int> coords;
};

}  // namespace

BmaResult bma_posterior_mean(const std::vector<ModelProb>& model_probs,
                             const Dataset& data, const PriorSpec& spec,
                             const BmaOptions& opts, std::uint64_t seed) {
  if (model_probs.empty())
    throw std::invalid_argument("bma_posterior_mean: empty model list");
  if (opts.draws_per_model < 1 || opts.chain_burn_in < 0)
    throw std::invalid_argument("bma_posterior_mean: bad chain sizes");
  const int p = static_cast<int>(data.p());

  /* Select the averaged set: sorted by weight, capped, thresholded. */
  std::vector<ModelProb> picked = model_probs;
  std::sort(picked.begin(), picked.end(), [](const ModelProb& a, const ModelProb& b) {
    if (a.prob != b.prob) return a.prob > b.prob;
    return a.model < b.model;
  });
  if (opts.top_k >= 0 && static_cast<std::size_t>(opts.top_k) < picked.size())
    picked.resize(opts.top_k);
  picked.erase(std::remove_if(picked.begin(), picked.end(),
                              [&](const ModelProb& mp) {
                                return !(mp.prob > opts.min_prob) || mp.prob <= 0.0;
                              }),
               picked.end());
  if (picked.empty())
    throw std::invalid_argument("bma_posterior_mean: no model left after filtering");

  BmaResult out;
  out.coverage = 0.0;
  for (const auto& mp : picked) out.coverage += mp.prob;

  const int n_models = static_cast<int>(picked.size());
  std::vector<PerModelFit> fits(n_models);
  GibbsOptions gopt;
  gopt.n_iter = opts.draws_per_model + opts.chain_burn_in;
  gopt.burn_in = opts.chain_burn_in;

  parallel_for(n_models, opts.threads, [&](int i) {
    const ModelIndicator& model = picked[static_cast<std::size_t>(i)].model;
    PerModelFit& fit = fits[static_cast<std::size_t>(i)];
    try {
      const std::uint64_t chain_seed =
          Rng::derive_seed(model_stream_seed(seed, model), 0xb7aULL);
      ChainOutput chain = run_gibbs(data, model, spec, gopt, chain_seed);
      fit.draws = chain.post_burn_theta();
      fit.phi_draws = chain.post_burn_phi();
      fit.mean = fit.draws.cols() > 0 ? Vector(fit.draws.colwise().mean())
                                      : Vector(0);
      fit.phi_mean = fit.phi_draws.mean();
      fit.coords = chain.coordinates;
      fit.ok = true;
    } catch (const std::exception&) {
      fit.ok = false;
    }
  });

  double weight_ok = 0.0;
  for (int i = 0; i < n_models; ++i) {
    if (fits[static_cast<std::size_t>(i)].ok)
      weight_ok += picked[static_cast<std::size_t>(i)].prob;
    else
      out.failed_models.push_back(picked[static_cast<std::size_t>(i)].model);
  }
  if (!(weight_ok > 0.0))
    throw std::runtime_error("bma_posterior_mean: every candidate chain failed");

  out.theta_mean = Vector::Zero(p);
  out.inclusion = Vector::Zero(p);
  out.phi_mean = 0.0;
  out.models_used.reserve(n_models);
  for (int i = 0; i < n_models; ++i) {
    const auto& fit = fits[static_cast<std::size_t>(i)];
    if (!fit.ok) continue;
    ModelProb used = picked[static_cast<std::size_t>(i)];
    used.prob /= weight_ok;
    for (std::size_t j = 0; j < fit.coords.size(); ++j) {
      out.theta_mean[fit.coords[j]] += used.prob * fit.mean[static_cast<Eigen::Index>(j)];
      out.inclusion[fit.coords[j]] += used.prob;
    }
    out.phi_mean += used.prob * fit.phi_mean;
    out.models_used.push_back(std::move(used));
  }

  if (opts.retain_draws) {
    /* Weight-proportional pooling with largest-remainder rounding. */
    const int pool = opts.draws_per_model;
    std::vector<int> take(static_cast<std::size_t>(n_models), 0);
    std::vector<std::pair<double, int>> remainders;
    int assigned = 0;
    std::size_t used_idx = 0;
    for (int i = 0; i < n_models; ++i) {
      if (!fits[static_cast<std::size_t>(i)].ok) continue;
      const double share = out.models_used[used_idx].prob * pool;
      take[static_cast<std::size_t>(i)] = static_cast<int>(share);
      assigned += take[static_cast<std::size_t>(i)];
      remainders.push_back({share - std::floor(share), i});
      ++used_idx;
    }
    std::sort(remainders.begin(), remainders.end(), [](const auto& a, const auto& b) {
      if (a.first != b.first) return a.first > b.first;
      return a.second < b.second;
    });
    for (std::size_t r = 0; assigned < pool && r < remainders.size(); ++r, ++assigned)
      ++take[static_cast<std::size_t>(remainders[r].second)];

    out.pooled_theta = Matrix::Zero(pool, p);
    out.pooled_phi.resize(pool);
    int row = 0;
    for (int i = 0; i < n_models; ++i) {
      const auto& fit = fits[static_cast<std::size_t>(i)];
      for (int s = 0; s < take[static_cast<std::size_t>(i)] && row < pool; ++s, ++row) {
        const int src = s % std::max<int>(1, static_cast<int>(fit.phi_draws.size()));
        for (std::size_t j = 0; j < fit.coords.size(); ++j)
          out.pooled_theta(row, fit.coords[j]) = fit.draws(src, static_cast<Eigen::Index>(j));
        out.pooled_phi[row] = fit.phi_draws.size() > 0 ? fit.phi_draws[src] : 0.0;
      }
    }
    if (row < pool) {
      out.pooled_theta.conservativeResize(row, p);
      out.pooled_phi.conservativeResize(row);
    }
  }
  return out;
}

Vector bma_predict(const BmaResult& bma, const Matrix& X_new) {
  if (X_new.cols() != bma.theta_mean.size())
    throw std::invalid_argument("bma_predict: column count mismatch");
  return X_new * bma.theta_mean;
}

PredictionBand bma_predict_band(const BmaResult& bma, const Matrix& X_new, double level) {
  if (!(level > 0.0) || !(level < 1.0))
    throw std::invalid_argument("bma_predict_band: level must lie in (0,1)");
  if (bma.pooled_theta.rows() == 0)
    throw std::invalid_argument("bma_predict_band: no retained draws (set retain_draws)");
  if (X_new.cols() != bma.theta_mean.size())
    throw std::invalid_argument("bma_predict_band: column count mismatch");

  PredictionBand band;
  band.level = level;
  band.point = X_new * bma.theta_mean;
  const Eigen::Index m = X_new.rows();
  const Eigen::Index s = bma.pooled_theta.rows();
  band.lower.resize(m);
  band.upper.resize(m);
  std::vector<double> vals(static_cast<std::size_t>(s));
  const double lo_q = 0.5 * (1.0 - level), hi_q = 1.0 - lo_q;
  for (Eigen::Index i = 0; i < m; ++i) {
    for (Eigen::Index k = 0; k < s; ++k)
      vals[static_cast<std::size_t>(k)] = X_new.row(i).dot(bma.pooled_theta.row(k));
    std::sort(vals.begin(), vals.end());
    const auto pick = [&](double q) {
      const double pos = q * (s - 1);
      const Eigen::Index j = static_cast<Eigen::Index>(pos);
      const double frac = pos - j;
      return j + 1 < s ? vals[j] * (1.0 - frac) + vals[j + 1] * frac : vals[j];
    };
    band.lower[i] = pick(lo_q);
    band.upper[i] = pick(hi_q);
  }
  return band;
}

}  // namespace nlpbma
