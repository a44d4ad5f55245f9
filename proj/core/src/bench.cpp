#include "nlpbma/bench.hpp"

#include "nlpbma/diagnostics.hpp"
#include "nlpbma/parallel.hpp"
#include "nlpbma/rng.hpp"

#include <Eigen/QR>
#include <Eigen/SVD>
#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace nlpbma {

namespace {

double now_seconds() {
  return std::chrono::duration<double>(
             std::chrono::steady_clock::now().time_since_epoch())
      .count();
}

PriorFamily family_of(FitMethod m) {
  switch (m) {
    case FitMethod::Pmom: return PriorFamily::PMOM;
    case FitMethod::Pimom: return PriorFamily::PIMOM;
    case FitMethod::Pemom: return PriorFamily::PEMOM;
    default: throw std::logic_error("family_of: not a non-local-prior method");
  }
}

/* Closed-form model-averaged mean under the conjugate Normal-IG baseline. */
Vector lp_bma_mean(const std::vector<ModelProb>& probs, const GramCache& gram,
                   double v_scale, double a_phi, double b_phi, int p) {
  Vector mean = Vector::Zero(p);
  for (const auto& mp : probs) {
    if (!(mp.prob > 0.0)) continue;
    const auto idx = mp.model.indices();
    if (idx.empty()) continue;
    const NormalIgPosterior post = normal_ig_posterior(gram, idx, v_scale, a_phi, b_phi);
    for (std::size_t j = 0; j < idx.size(); ++j)
      mean[idx[j]] += mp.prob * post.m[static_cast<Eigen::Index>(j)];
  }
  return mean;
}

double slope_of_loglog(const std::vector<int>& n_grid, const std::vector<double>& values,
                       bool* censored) {
  std::vector<double> x, y;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (values[i] > 0.0 && std::isfinite(values[i])) {
      x.push_back(std::log(double(n_grid[i])));
      y.push_back(std::log(values[i]));
    }
  }
  if (censored) *censored = x.size() != values.size();
  if (x.size() < 2) return std::numeric_limits<double>::quiet_NaN();
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= x.size();
  my /= y.size();
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  return sxy / sxx;
}

double median_of(std::vector<double> v) {
  v.erase(std::remove_if(v.begin(), v.end(),
                         [](double x) { return !std::isfinite(x); }),
          v.end());
  if (v.empty()) return std::numeric_limits<double>::quiet_NaN();
  std::sort(v.begin(), v.end());
  const std::size_t m = v.size() / 2;
  return v.size() % 2 == 1 ? v[m] : 0.5 * (v[m - 1] + v[m]);
}

}  // namespace

Vector staircase_signal(int p) {
  if (p < 5) throw std::invalid_argument("staircase_signal: p must be at least 5");
  Vector theta = Vector::Zero(p);
  for (int j = 0; j < 5; ++j) theta[j] = 0.6 * (j + 1);
  return theta;
}

Dataset gen_equicorr_data(const EquicorrConfig& cfg, int replicate) {
  if (cfg.n < 1 || cfg.p < 1) throw std::invalid_argument("gen_equicorr_data: bad sizes");
  if (cfg.rho < 0.0 || cfg.rho >= 1.0)
    throw std::invalid_argument("gen_equicorr_data: rho must lie in [0,1)");
  if (!(cfg.phi_star > 0.0))
    throw std::invalid_argument("gen_equicorr_data: phi_star must be positive");
  if (cfg.theta_star.size() != cfg.p)
    throw std::invalid_argument("gen_equicorr_data: theta_star length mismatch");

  Rng rng(Rng::derive_seed(cfg.seed, static_cast<std::uint64_t>(replicate)));
  const double a = std::sqrt(cfg.rho), b = std::sqrt(1.0 - cfg.rho);
  Dataset data;
  data.X.resize(cfg.n, cfg.p);
  data.y.resize(cfg.n);
  for (int i = 0; i < cfg.n; ++i) {
    const double shared = rng.normal();
    for (int j = 0; j < cfg.p; ++j) data.X(i, j) = a * shared + b * rng.normal();
  }
  const double noise_sd = std::sqrt(cfg.phi_star);
  for (int i = 0; i < cfg.n; ++i)
    data.y[i] = data.X.row(i).dot(cfg.theta_star) + noise_sd * rng.normal();
  return data;
}

std::string method_name(FitMethod m) {
  switch (m) {
    case FitMethod::Pmom: return "pmom";
    case FitMethod::Pimom: return "pimom";
    case FitMethod::Pemom: return "pemom";
    case FitMethod::Ridge: return "ridge";
    case FitMethod::OlsOracle: return "ols_oracle";
    case FitMethod::NormalBma: return "normal_bma";
  }
  throw std::logic_error("method_name: unknown method");
}

FitMethod method_from_name(const std::string& name) {
  if (name == "pmom") return FitMethod::Pmom;
  if (name == "pimom") return FitMethod::Pimom;
  if (name == "pemom") return FitMethod::Pemom;
  if (name == "ridge") return FitMethod::Ridge;
  if (name == "ols_oracle") return FitMethod::OlsOracle;
  if (name == "normal_bma") return FitMethod::NormalBma;
  throw std::invalid_argument("unknown method '" + name + "'");
}

Vector ridge_gcv(const Dataset& data, double* kappa_out) {
  data.validate();
  const Eigen::Index n = data.n();
  Eigen::BDCSVD<Matrix> svd(data.X, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const Vector d = svd.singularValues();
  const Vector uty = svd.matrixU().transpose() * data.y;
  const double yty = data.y.squaredNorm();

  double best_gcv = std::numeric_limits<double>::infinity();
  double best_kappa = 1.0;
  for (int g = 0; g <= 60; ++g) {
    const double kappa = std::pow(10.0, -6.0 + 0.2 * g);
    double fit = 0.0, edf = 0.0;
    for (Eigen::Index i = 0; i < d.size(); ++i) {
      const double d2 = d[i] * d[i];
      const double shrink = d2 / (d2 + kappa);
      fit += shrink * (2.0 - shrink) * uty[i] * uty[i];
      edf += shrink;
    }
    const double rss = std::max(yty - fit, 0.0);
    const double denom = 1.0 - edf / double(n);
    if (denom <= 1e-8) continue;
    const double gcv = (rss / double(n)) / (denom * denom);
    if (gcv < best_gcv) {
      best_gcv = gcv;
      best_kappa = kappa;
    }
  }
  if (kappa_out) *kappa_out = best_kappa;
  Vector coef = Vector::Zero(data.p());
  Vector scaled(d.size());
  for (Eigen::Index i = 0; i < d.size(); ++i)
    scaled[i] = d[i] * uty[i] / (d[i] * d[i] + best_kappa);
  coef = svd.matrixV() * scaled;
  return coef;
}

Vector ols_oracle(const Dataset& data, const Vector& theta_star) {
  if (theta_star.size() != data.p())
    throw std::invalid_argument("ols_oracle: theta_star length mismatch");
  std::vector<int> support;
  for (Eigen::Index j = 0; j < theta_star.size(); ++j)
    if (theta_star[j] != 0.0) support.push_back(static_cast<int>(j));
  Vector coef = Vector::Zero(data.p());
  if (support.empty()) return coef;
  Matrix Xs(data.n(), static_cast<Eigen::Index>(support.size()));
  for (std::size_t j = 0; j < support.size(); ++j)
    Xs.col(static_cast<Eigen::Index>(j)) = data.X.col(support[j]);
  const Vector beta = Xs.colPivHouseholderQr().solve(data.y);
  for (std::size_t j = 0; j < support.size(); ++j)
    coef[support[j]] = beta[static_cast<Eigen::Index>(j)];
  return coef;
}

Vector fit_coefficients(const Dataset& data, FitMethod method, const Vector& theta_star,
                        const FitOptions& opts, std::uint64_t seed) {
  switch (method) {
    case FitMethod::Ridge: return ridge_gcv(data);
    case FitMethod::OlsOracle: return ols_oracle(data, theta_star);
    case FitMethod::NormalBma: {
      PriorSpec spec = PriorSpec::defaults(PriorFamily::PMOM);
      MargLikConfig ml;
      ml.n_samples = opts.marglik_samples;
      ml.seed = Rng::derive_seed(seed, 11);
      ml.local_prior_only = true;
      ModelSearchResult search = gibbs_model_search(data, spec, opts.sweeps,
                                                    Rng::derive_seed(seed, 22), ml);
      const auto probs = posterior_model_probs(search);
      return lp_bma_mean(probs, search.cache->evaluator().gram(), spec.tau, spec.a_phi,
                         spec.b_phi, static_cast<int>(data.p()));
    }
    case FitMethod::Pmom:
    case FitMethod::Pimom:
    case FitMethod::Pemom: {
      PriorSpec spec = PriorSpec::defaults(family_of(method));
      MargLikConfig ml;
      ml.n_samples = opts.marglik_samples;
      ml.seed = Rng::derive_seed(seed, 11);
      ModelSearchResult search = gibbs_model_search(data, spec, opts.sweeps,
                                                    Rng::derive_seed(seed, 22), ml);
      const auto probs = posterior_model_probs(search);
      BmaOptions bo;
      bo.draws_per_model = opts.draws_per_model;
      bo.chain_burn_in = opts.chain_burn_in;
      bo.top_k = opts.bma_top_k;
      bo.threads = opts.threads;
      const BmaResult bma =
          bma_posterior_mean(probs, data, spec, bo, Rng::derive_seed(seed, 33));
      return bma.theta_mean;
    }
  }
  throw std::logic_error("fit_coefficients: unknown method");
}

SimStudyResult run_sim_study(const SimStudyConfig& cfg) {
  if (cfg.replicates < 1) throw std::invalid_argument("run_sim_study: no replicates");
  if (cfg.methods.empty()) throw std::invalid_argument("run_sim_study: no methods");
  SimStudyResult result;
  result.config = cfg;
  const int n_methods = static_cast<int>(cfg.methods.size());
  result.rows.resize(static_cast<std::size_t>(cfg.replicates) * n_methods);

  parallel_for(cfg.replicates, cfg.threads, [&](int rep) {
    const Dataset data = gen_equicorr_data(cfg.design, rep);
    for (int mi = 0; mi < n_methods; ++mi) {
      const FitMethod method = cfg.methods[static_cast<std::size_t>(mi)];
      const std::uint64_t seed =
          Rng::derive_seed(cfg.design.seed, 1000003ULL * rep + 17ULL * mi + 1);
      const double t0 = now_seconds();
      const Vector coef = fit_coefficients(data, method, cfg.design.theta_star, cfg.fit, seed);
      SseRow row;
      row.replicate = rep;
      row.method = method;
      row.seconds = now_seconds() - t0;
      for (Eigen::Index j = 0; j < coef.size(); ++j) {
        const double err = coef[j] - cfg.design.theta_star[j];
        row.sse += err * err;
        if (cfg.design.theta_star[j] == 0.0)
          row.sse_zero += err * err;
        else
          row.sse_nonzero += err * err;
      }
      result.rows[static_cast<std::size_t>(rep) * n_methods + mi] = row;
    }
  });

  for (int mi = 0; mi < n_methods; ++mi) {
    MethodSummary s;
    s.method = cfg.methods[static_cast<std::size_t>(mi)];
    const int R = cfg.replicates;
    auto accum = [&](auto pick, double& mean_out, double& se_out) {
      double mean = 0.0;
      for (int r = 0; r < R; ++r) mean += pick(result.rows[static_cast<std::size_t>(r) * n_methods + mi]);
      mean /= R;
      double var = 0.0;
      for (int r = 0; r < R; ++r) {
        const double d = pick(result.rows[static_cast<std::size_t>(r) * n_methods + mi]) - mean;
        var += d * d;
      }
      var = R > 1 ? var / (R - 1) : 0.0;
      mean_out = mean;
      se_out = std::sqrt(var / R);
    };
    accum([](const SseRow& r) { return r.sse; }, s.mean_sse, s.se_sse);
    accum([](const SseRow& r) { return r.sse_zero; }, s.mean_sse_zero, s.se_sse_zero);
    accum([](const SseRow& r) { return r.sse_nonzero; }, s.mean_sse_nonzero,
          s.se_sse_nonzero);
    result.summary.push_back(s);
  }
  return result;
}

int ShrinkageReport::count_slopes_at_most(double threshold) const {
  int c = 0;
  for (const auto& b : batches)
    if (std::isfinite(b.slope) && b.slope <= threshold) ++c;
  return c;
}

ShrinkageReport empirical_shrinkage_rate(PriorFamily family, const ShrinkageOptions& opts) {
  if (opts.p < 3) throw std::invalid_argument("empirical_shrinkage_rate: p too small");
  if (opts.n_grid.size() < 2)
    throw std::invalid_argument("empirical_shrinkage_rate: need at least two grid points");
  const int spur = opts.p - 1;  // designated spurious coordinate
  Vector theta_star = Vector::Zero(opts.p);
  theta_star[0] = 1.0;
  theta_star[1] = 0.7;

  ShrinkageReport report;
  report.family = family;
  report.batches.resize(static_cast<std::size_t>(opts.batches));

  parallel_for(opts.batches, opts.threads, [&](int b) {
    ShrinkageBatch batch;
    batch.abs_spurious.resize(opts.n_grid.size(), 0.0);
    batch.abs_spurious_lp.resize(opts.n_grid.size(), 0.0);
    for (std::size_t gi = 0; gi < opts.n_grid.size(); ++gi) {
      std::vector<double> rep_vals, rep_vals_lp;
      for (int rep = 0; rep < opts.reps_per_batch; ++rep) {
        const int dataset_index =
            (b * opts.reps_per_batch + rep) * static_cast<int>(opts.n_grid.size()) +
            static_cast<int>(gi);
        EquicorrConfig dc;
        dc.n = opts.n_grid[gi];
        dc.p = opts.p;
        dc.rho = 0.0;
        dc.phi_star = 1.0;
        dc.theta_star = theta_star;
        dc.seed = opts.seed;
        const Dataset data = gen_equicorr_data(dc, dataset_index);

        PriorSpec spec = PriorSpec::defaults(family);
        MargLikConfig ml;
        ml.n_samples = opts.marglik_samples;
        ml.seed = Rng::derive_seed(opts.seed, 7000 + dataset_index);
        const ModelPosterior post = enumerate_models(data, spec, ml);

        BmaOptions bo;
        bo.draws_per_model = opts.draws_per_model;
        bo.chain_burn_in = opts.chain_burn_in;
        bo.min_prob = opts.min_model_prob;
        const BmaResult bma = bma_posterior_mean(
            post.models, data, spec, bo, Rng::derive_seed(opts.seed, 9000 + dataset_index));
        rep_vals.push_back(std::abs(bma.theta_mean[spur]));

        MargLikConfig ml_lp = ml;
        ml_lp.local_prior_only = true;
        const ModelPosterior post_lp = enumerate_models(data, spec, ml_lp);
        const Vector lp_mean =
            lp_bma_mean(post_lp.models, post_lp.cache->evaluator().gram(), spec.tau,
                        spec.a_phi, spec.b_phi, opts.p);
        rep_vals_lp.push_back(std::abs(lp_mean[spur]));
      }
      batch.abs_spurious[gi] = median_of(rep_vals);
      batch.abs_spurious_lp[gi] = median_of(rep_vals_lp);
    }
    bool cens1 = false, cens2 = false;
    batch.slope = slope_of_loglog(opts.n_grid, batch.abs_spurious, &cens1);
    batch.slope_lp = slope_of_loglog(opts.n_grid, batch.abs_spurious_lp, &cens2);
    batch.censored = cens1 || cens2;
    report.batches[static_cast<std::size_t>(b)] = std::move(batch);
  });

  std::vector<double> slopes, slopes_lp;
  for (const auto& b : report.batches) {
    slopes.push_back(b.slope);
    slopes_lp.push_back(b.slope_lp);
    if (std::isfinite(b.slope) && std::isfinite(b.slope_lp) && b.slope < b.slope_lp)
      ++report.batches_steeper_than_lp;
  }
  report.median_slope = median_of(slopes);
  report.median_slope_lp = median_of(slopes_lp);
  return report;
}

LooResult loo_cv_r2(const Dataset& data, FitMethod method, const FitOptions& opts,
                    std::uint64_t seed, int threads) {
  data.validate();
  const Eigen::Index n = data.n();
  if (n < 10) throw std::invalid_argument("loo_cv_r2: need at least 10 observations");
  if (method == FitMethod::OlsOracle)
    throw std::invalid_argument("loo_cv_r2: the oracle needs the unknown truth");

  Vector preds(n);
  const Vector dummy_truth = Vector::Zero(data.p());
  parallel_for(static_cast<int>(n), threads, [&](int i) {
    Dataset fold;
    fold.y.resize(n - 1);
    fold.X.resize(n - 1, data.p());
    Eigen::Index r = 0;
    for (Eigen::Index t = 0; t < n; ++t) {
      if (t == i) continue;
      fold.y[r] = data.y[t];
      fold.X.row(r) = data.X.row(t);
      ++r;
    }
    const Vector coef = fit_coefficients(fold, method, dummy_truth, opts,
                                         Rng::derive_seed(seed, 31ULL * i + 5));
    preds[i] = data.X.row(i).dot(coef);
  });

  LooResult out;
  const double corr = pearson_correlation(preds, data.y);
  out.degenerate = corr == 0.0 && (preds.maxCoeff() - preds.minCoeff()) <= 0.0;
  out.r2 = corr * corr;
  return out;
}

}  // namespace nlpbma
