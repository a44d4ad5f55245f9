#include "nlpbma/marglik.hpp"

#include "nlpbma/penalty_inverse.hpp"
#include "nlpbma/rng.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace nlpbma {

namespace {

constexpr double log_2pi = 1.8378770664093453;

double logsumexp(const std::vector<double>& v, std::size_t begin, std::size_t end) {
  double mx = -std::numeric_limits<double>::infinity();
  for (std::size_t i = begin; i < end; ++i) mx = std::max(mx, v[i]);
  if (!std::isfinite(mx)) return mx;
  double s = 0.0;
  for (std::size_t i = begin; i < end; ++i) s += std::exp(v[i] - mx);
  return mx + std::log(s);
}

/* E[phi^{-1}] and E[phi^{-2}] for phi ~ IG(alpha, beta). */
double ig_inv_moment1(double alpha, double beta) { return alpha / beta; }
double ig_inv_moment2(double alpha, double beta) {
  return alpha * (alpha + 1.0) / (beta * beta);
}

}  // namespace

GramCache::GramCache(const Dataset& data) : n_(data.n()) {
  data.validate();
  XtX_ = data.X.transpose() * data.X;
  Xty_ = data.X.transpose() * data.y;
  yty_ = data.y.squaredNorm();
}

Matrix GramCache::gram(const std::vector<int>& idx) const {
  const auto k = static_cast<Eigen::Index>(idx.size());
  Matrix out(k, k);
  for (Eigen::Index a = 0; a < k; ++a)
    for (Eigen::Index b = 0; b < k; ++b) out(a, b) = XtX_(idx[a], idx[b]);
  return out;
}

Vector GramCache::xty(const std::vector<int>& idx) const {
  const auto k = static_cast<Eigen::Index>(idx.size());
  Vector out(k);
  for (Eigen::Index a = 0; a < k; ++a) out[a] = Xty_(idx[a]);
  return out;
}

NormalIgPosterior normal_ig_posterior(const GramCache& gram, const std::vector<int>& idx,
                                      double v_scale, double a_phi, double b_phi) {
  if (!(v_scale > 0.0) || !(a_phi > 0.0) || !(b_phi > 0.0))
    throw std::invalid_argument("normal_ig_posterior: scales must be positive");
  const auto k = static_cast<Eigen::Index>(idx.size());
  const double n = static_cast<double>(gram.n());
  NormalIgPosterior post;
  post.alpha_post = 0.5 * (a_phi + n);

  if (k == 0) {
    post.q = gram.yty();
    post.beta_post = 0.5 * (b_phi + post.q);
    post.log_marginal = -0.5 * n * log_2pi + 0.5 * a_phi * std::log(0.5 * b_phi) +
                        std::lgamma(post.alpha_post) - std::lgamma(0.5 * a_phi) -
                        post.alpha_post * std::log(post.beta_post);
    return post;
  }

  post.S = gram.gram(idx);
  post.S.diagonal().array() += 1.0 / v_scale;
  if (!post.S.allFinite())
    throw std::runtime_error("normal_ig_posterior: non-finite Gram submatrix");
  Eigen::LLT<Matrix> llt(post.S);
  if (llt.info() != Eigen::Success)
    throw std::runtime_error("normal_ig_posterior: S not positive definite");
  post.chol_S = llt.matrixL();
  const Vector xty = gram.xty(idx);
  post.m = llt.solve(xty);
  if (!post.m.allFinite())
    throw std::runtime_error("normal_ig_posterior: posterior mean overflowed");
  post.q = gram.yty() - xty.dot(post.m);
  if (post.q < 0.0) post.q = 0.0;
  post.beta_post = 0.5 * (b_phi + post.q);

  double half_logdet = 0.0;
  for (Eigen::Index i = 0; i < k; ++i) half_logdet += std::log(post.chol_S(i, i));

  post.log_marginal = -0.5 * n * log_2pi - 0.5 * k * std::log(v_scale) - half_logdet +
                      0.5 * a_phi * std::log(0.5 * b_phi) + std::lgamma(post.alpha_post) -
                      std::lgamma(0.5 * a_phi) - post.alpha_post * std::log(post.beta_post);
  return post;
}

double log_marginal_normal_ig(const Dataset& data, const ModelIndicator& model,
                              double v_scale, double a_phi, double b_phi) {
  if (model.dimension() != data.p())
    throw std::invalid_argument("log_marginal_normal_ig: model dimension mismatch");
  GramCache gram(data);
  return normal_ig_posterior(gram, model.indices(), v_scale, a_phi, b_phi).log_marginal;
}

std::uint64_t model_stream_seed(std::uint64_t base, const ModelIndicator& model) {
  std::uint64_t h = Rng::derive_seed(base, 0x6d6f64656cULL);
  h = Rng::derive_seed(h, static_cast<std::uint64_t>(model.dimension()));
  for (auto w : model.words()) h = Rng::derive_seed(h, w);
  return h;
}

namespace {

/* Monte Carlo posterior mean of the penalty factor. Draws come from the
 * conjugate baseline posterior (scale v_draw); log weights are the summed
 * log penalties, plus a density correction when the baseline scale differs
 * from the non-local Gaussian kernel scale (piMOM never needs one because
 * its factorization already uses tau_n). */
LogMarginal mc_penalty_factor(const NormalIgPosterior& post, const PriorSpec& spec,
                              const MargLikConfig& cfg, std::uint64_t stream) {
  const auto k = post.m.size();
  Rng rng(stream);
  const int S = std::max(cfg.n_samples, 100);
  std::vector<double> logw(static_cast<std::size_t>(S));

  /* chol of S^{-1} for theta | phi draws */
  Matrix Sinv = post.chol_S.triangularView<Eigen::Lower>()
                    .solve(Matrix::Identity(k, k));
  Sinv = post.chol_S.transpose().triangularView<Eigen::Upper>().solve(Sinv);
  Eigen::LLT<Matrix> llt(Sinv);
  if (llt.info() != Eigen::Success)
    throw std::runtime_error("mc_penalty_factor: covariance factorization failed");
  const Matrix Lc = llt.matrixL();

  Vector zdraw(k), theta(k);
  for (int s = 0; s < S; ++s) {
    const double phi = rng.inverse_gamma(post.alpha_post, post.beta_post);
    for (Eigen::Index i = 0; i < k; ++i) zdraw[i] = rng.normal();
    theta = post.m + std::sqrt(phi) * (Lc * zdraw);
    double lw = 0.0;
    for (Eigen::Index i = 0; i < k; ++i) {
      if (theta[i] == 0.0) {
        lw = -std::numeric_limits<double>::infinity();
        break;
      }
      lw += log_penalty_d(spec, theta[i], phi);
    }
    logw[static_cast<std::size_t>(s)] = lw;
  }

  LogMarginal out;
  out.exact = false;
  out.n_samples = S;
  const double log_mean = logsumexp(logw, 0, logw.size()) - std::log(double(S));

  /* max-weight share */
  double mx = -std::numeric_limits<double>::infinity();
  for (double v : logw) mx = std::max(mx, v);
  out.degenerate_weights = (mx - log_mean - std::log(double(S))) > std::log(0.5);

  /* batch-means standard error of the log estimate */
  const int B = 50;
  const int per = S / B;
  if (per >= 2) {
    std::vector<double> bm(B);
    for (int b = 0; b < B; ++b)
      bm[b] = logsumexp(logw, b * per, (b + 1) * per) - std::log(double(per));
    double mean = 0.0;
    for (double v : bm) mean += v;
    mean /= B;
    double var = 0.0;
    for (double v : bm) var += (v - mean) * (v - mean);
    var /= (B - 1);
    out.mc_se = std::sqrt(var / B);
  }
  out.value = log_mean;
  return out;
}

}  // namespace

LogMarginal log_marginal_nlp(const Dataset& data, const ModelIndicator& model,
                             const PriorSpec& spec, const MargLikConfig& cfg) {
  MarginalEvaluator eval(data, spec, cfg);
  return eval(model);
}

MarginalEvaluator::MarginalEvaluator(const Dataset& data, const PriorSpec& spec,
                                     const MargLikConfig& cfg)
    : gram_(std::make_shared<const GramCache>(data)), spec_(spec), cfg_(cfg) {
  spec_.validate();
  if (cfg_.n_samples < 100)
    throw std::invalid_argument("MarginalEvaluator: n_samples must be at least 100");
}

LogMarginal MarginalEvaluator::operator()(const ModelIndicator& model) const {
  if (model.dimension() != gram_->p())
    throw std::invalid_argument("MarginalEvaluator: model dimension mismatch");
  const std::vector<int> idx = model.indices();
  const auto k = static_cast<Eigen::Index>(idx.size());

  const bool pimom = spec_.family == PriorFamily::PIMOM;
  const double v_scale = pimom ? spec_.tau_n : spec_.tau;
  NormalIgPosterior post =
      normal_ig_posterior(*gram_, idx, v_scale, spec_.a_phi, spec_.b_phi);

  LogMarginal out;
  if (k == 0 || cfg_.local_prior_only) {
    out.value = post.log_marginal;
    out.exact = true;
    return out;
  }

  if (spec_.family == PriorFamily::PMOM && spec_.r == 1 && k <= 2) {
    /* Exact posterior moments of prod theta_i^2 / (tau phi). */
    const double e1 = ig_inv_moment1(post.alpha_post, post.beta_post);
    Matrix Sinv = post.chol_S.triangularView<Eigen::Lower>()
                      .solve(Matrix::Identity(k, k));
    Sinv = post.chol_S.transpose().triangularView<Eigen::Upper>().solve(Sinv);
    double g;
    if (k == 1) {
      g = (post.m[0] * post.m[0] * e1 + Sinv(0, 0)) / spec_.tau;
    } else {
      const double e2 = ig_inv_moment2(post.alpha_post, post.beta_post);
      const double m1 = post.m[0], m2 = post.m[1];
      const double s11 = Sinv(0, 0), s22 = Sinv(1, 1), s12 = Sinv(0, 1);
      g = (m1 * m1 * m2 * m2 * e2 +
           (m1 * m1 * s22 + m2 * m2 * s11 + 4.0 * m1 * m2 * s12) * e1 +
           (s11 * s22 + 2.0 * s12 * s12)) /
          (spec_.tau * spec_.tau);
    }
    if (!(g > 0.0))
      throw std::runtime_error("MarginalEvaluator: nonpositive exact penalty factor");
    out.value = post.log_marginal + std::log(g);
    out.exact = true;
    return out;
  }

  out = mc_penalty_factor(post, spec_, cfg_, model_stream_seed(cfg_.seed, model));
  out.value += post.log_marginal;
  return out;
}

double log_model_prior_betabinomial(const ModelIndicator& model, Eigen::Index n) {
  const int p = model.dimension();
  const int k = model.count();
  if (k > n) return -std::numeric_limits<double>::infinity();
  const double log_choose = std::lgamma(p + 1.0) - std::lgamma(k + 1.0) -
                            std::lgamma(double(p - k) + 1.0);
  return -std::log(double(p) + 1.0) - log_choose;
}

}  // namespace nlpbma
