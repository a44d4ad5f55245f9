#include "nlpbma/samplers.hpp"

#include "nlpbma/penalty_inverse.hpp"
#include "nlpbma/rng.hpp"

#include <Eigen/Cholesky>
#include <cmath>
#include <stdexcept>

namespace nlpbma {

namespace {

Matrix select_columns(const Matrix& X, const std::vector<int>& idx) {
  Matrix out(X.rows(), static_cast<Eigen::Index>(idx.size()));
  for (std::size_t j = 0; j < idx.size(); ++j) out.col(j) = X.col(idx[j]);
  return out;
}

void check_common(const Dataset& data, const ModelIndicator& model,
                  const PriorSpec& spec, const GibbsOptions& opt) {
  data.validate();
  spec.validate();
  if (model.dimension() != data.p())
    throw std::invalid_argument("gibbs sampler: model dimension mismatch");
  if (opt.n_iter < 1) throw std::invalid_argument("gibbs sampler: n_iter must be positive");
  if (opt.resolved_burn_in() >= opt.n_iter)
    throw std::invalid_argument("gibbs sampler: burn_in must be smaller than n_iter");
}

/* phi chain for the empty model; the non-local part is vacuous. */
ChainOutput null_model_chain(const Dataset& data, const PriorSpec& spec,
                             const GibbsOptions& opt, std::uint64_t seed) {
  Rng rng(seed);
  const double yty = data.y.squaredNorm();
  const double shape = 0.5 * (spec.a_phi + data.n());
  const double rate = 0.5 * (spec.b_phi + yty);
  ChainOutput out;
  out.theta_draws.resize(opt.n_iter, 0);
  out.phi_draws.resize(opt.n_iter);
  for (int t = 0; t < opt.n_iter; ++t) out.phi_draws[t] = rng.inverse_gamma(shape, rate);
  out.burn_in = opt.resolved_burn_in();
  out.seed = seed;
  out.mh_acceptance = 1.0;
  return out;
}

enum class PhiStep { Exact, MetropolisWithin };

struct GibbsEngine {
  const Dataset& data;
  const PriorSpec& spec;
  const GibbsOptions& opt;
  PriorFamily family;

  ChainOutput run(const ModelIndicator& model, std::uint64_t seed) const {
    const std::vector<int> idx = model.indices();
    const int k = static_cast<int>(idx.size());
    const Eigen::Index n = data.n();
    const Matrix Xk = select_columns(data.X, idx);
    const Vector Xty = Xk.transpose() * data.y;

    Matrix S = Xk.transpose() * Xk;
    if (family == PriorFamily::PIMOM) {
      if (k >= n)
        throw std::invalid_argument("gibbs_pimom: model size must be below n");
      /* The latent decomposition factors the prior against an N(0, tau_n phi)
       * kernel, which joins the likelihood in the theta step. */
      S.diagonal().array() += 1.0 / spec.tau_n;
    } else {
      S.diagonal().array() += 1.0 / spec.tau;
    }
    Eigen::LLT<Matrix> llt(S);
    if (llt.info() != Eigen::Success)
      throw std::invalid_argument("gibbs sampler: X'X submatrix is rank deficient");

    const Vector m = llt.solve(Xty);
    Matrix Sinv = llt.solve(Matrix::Identity(k, k));
    Eigen::LLT<Matrix> llt_sinv(Sinv);
    if (llt_sinv.info() != Eigen::Success)
      throw std::runtime_error("gibbs sampler: posterior covariance not positive definite");
    const Matrix Lc = llt_sinv.matrixL();
    const Vector c0 = Lc.triangularView<Eigen::Lower>().solve(m);

    ChainInit init = initial_state(Xk, data.y, spec);

    Rng rng(seed);
    ChainOutput out;
    out.theta_draws.resize(opt.n_iter, k);
    out.phi_draws.resize(opt.n_iter);
    if (opt.store_lambda) out.lambda_draws.resize(opt.n_iter, k);
    out.burn_in = opt.resolved_burn_in();
    out.seed = seed;
    out.coordinates = idx;

    Vector theta = init.theta;
    double phi = init.phi;
    long long mh_proposals = 0, mh_accepts = 0;

    OuterRectangle region;
    region.lower.resize(k);
    region.upper.resize(k);
    Vector z(k), w(k), lambda_row(k);

    for (int t = 0; t < opt.n_iter; ++t) {
      const double srsq = (data.y - Xk * theta).squaredNorm();
      const double ttheta = theta.squaredNorm();

      /* --- phi | theta, y (latents integrated out) --- */
      if (family == PriorFamily::PMOM) {
        const double shape = 0.5 * (spec.a_phi + n + 3.0 * k);
        const double rate = 0.5 * (spec.b_phi + srsq + ttheta / spec.tau);
        phi = rng.inverse_gamma(shape, rate);
      } else {
        double inv_sq_sum = 0.0;
        for (int i = 0; i < k; ++i) inv_sq_sum += 1.0 / (theta[i] * theta[i]);
        double shape, rate;
        if (family == PriorFamily::PIMOM) {
          shape = 0.5 * (spec.a_phi + n - k);
          rate = 0.5 * (spec.b_phi + srsq);
        } else {
          shape = 0.5 * (spec.a_phi + n + k);
          rate = 0.5 * (spec.b_phi + srsq + ttheta / spec.tau);
        }
        const double proposal = rng.inverse_gamma(shape, rate);
        const double log_accept = (phi - proposal) * spec.tau * inv_sq_sum;
        ++mh_proposals;
        if (std::log(rng.uniform_open()) < log_accept) {
          phi = proposal;
          ++mh_accepts;
        }
      }

      /* --- latent thresholds --- */
      const double tau_phi = spec.tau * phi;
      for (int i = 0; i < k; ++i) {
        const double u = rng.uniform_open();
        const double th2 = theta[i] * theta[i];
        double bound;  // theta_i^2 must stay above this
        switch (family) {
          case PriorFamily::PMOM:
            bound = u * th2;
            if (opt.store_lambda) lambda_row[i] = u * th2 / tau_phi;
            break;
          case PriorFamily::PEMOM: {
            bound = tau_phi / (tau_phi / th2 - std::log(u));
            if (opt.store_lambda)
              lambda_row[i] = u * std::exp(M_SQRT2 - tau_phi / th2);
            break;
          }
          case PriorFamily::PIMOM:
          default: {
            ImomPenaltyCurve curve(spec.tau, spec.tau_n, phi);
            const double target = std::log(u) + g_of_z(curve, th2);
            bound = invert_g(curve, target);
            if (opt.store_lambda) lambda_row[i] = std::exp(target);
            break;
          }
        }
        const double thr = std::sqrt(std::max(bound, 0.0));
        region.lower[i] = -thr;
        region.upper[i] = thr;
      }
      if (opt.store_lambda) out.lambda_draws.row(t) = lambda_row;

      /* --- theta | lambda, phi, y: one outer-truncated normal sweep --- */
      const double sqrt_phi = std::sqrt(phi);
      const Matrix D = sqrt_phi * Lc;
      const Vector alpha = c0 / sqrt_phi;
      z = Lc.triangularView<Eigen::Lower>().solve(theta) / sqrt_phi;
      w = theta;
      tmvn_gibbs_sweep(D, alpha, region, z, w, rng, out.tmvn);
      theta = w;
      for (int i = 0; i < k; ++i) {
        if (theta[i] > region.lower[i] && theta[i] < region.upper[i]) {
          ++out.tmvn.snap_events;
          theta[i] = theta[i] < 0.0 ? region.lower[i] : region.upper[i];
        }
      }

      out.theta_draws.row(t) = theta;
      out.phi_draws[t] = phi;
    }
    out.mh_acceptance =
        mh_proposals > 0 ? static_cast<double>(mh_accepts) / mh_proposals : 1.0;
    return out;
  }
};

ChainOutput run_family(const Dataset& data, const ModelIndicator& model,
                       const PriorSpec& spec, const GibbsOptions& opt,
                       std::uint64_t seed, PriorFamily family) {
  check_common(data, model, spec, opt);
  if (model.count() == 0) return null_model_chain(data, spec, opt, seed);
  GibbsEngine engine{data, spec, opt, family};
  return engine.run(model, seed);
}

}  // namespace

ChainInit initial_state(const Matrix& Xk, const Vector& y, const PriorSpec& spec) {
  const int k = static_cast<int>(Xk.cols());
  Matrix S = Xk.transpose() * Xk;
  S.diagonal().array() += 1.0 / spec.tau;
  Eigen::LLT<Matrix> llt(S);
  if (llt.info() != Eigen::Success)
    throw std::invalid_argument("initial_state: design submatrix is degenerate");
  ChainInit init;
  init.theta = llt.solve(Xk.transpose() * y);
  const double n = static_cast<double>(y.size());
  const double srsq = (y - Xk * init.theta).squaredNorm();
  init.phi = std::max(srsq / n, 1e-12 * (y.squaredNorm() / n + 1.0));
  for (int i = 0; i < k; ++i) {
    if (init.theta[i] == 0.0) {
      const double sign = Xk.col(i).dot(y) >= 0.0 ? 1.0 : -1.0;
      init.theta[i] = sign * 1e-3 * std::sqrt(init.phi * spec.tau);
    }
  }
  return init;
}

ChainOutput gibbs_pmom(const Dataset& data, const ModelIndicator& model,
                       const PriorSpec& spec, const GibbsOptions& opt,
                       std::uint64_t seed) {
  if (spec.family != PriorFamily::PMOM)
    throw std::invalid_argument("gibbs_pmom: spec.family must be PMOM");
  if (spec.r != 1)
    throw std::invalid_argument("gibbs_pmom: only the r = 1 latent construction is supported");
  return run_family(data, model, spec, opt, seed, PriorFamily::PMOM);
}

ChainOutput gibbs_pimom(const Dataset& data, const ModelIndicator& model,
                        const PriorSpec& spec, const GibbsOptions& opt,
                        std::uint64_t seed) {
  if (spec.family != PriorFamily::PIMOM)
    throw std::invalid_argument("gibbs_pimom: spec.family must be PIMOM");
  return run_family(data, model, spec, opt, seed, PriorFamily::PIMOM);
}

ChainOutput gibbs_pemom(const Dataset& data, const ModelIndicator& model,
                        const PriorSpec& spec, const GibbsOptions& opt,
                        std::uint64_t seed) {
  if (spec.family != PriorFamily::PEMOM)
    throw std::invalid_argument("gibbs_pemom: spec.family must be PEMOM");
  return run_family(data, model, spec, opt, seed, PriorFamily::PEMOM);
}

ChainOutput run_gibbs(const Dataset& data, const ModelIndicator& model,
                      const PriorSpec& spec, const GibbsOptions& opt,
                      std::uint64_t seed) {
  switch (spec.family) {
    case PriorFamily::PMOM: return gibbs_pmom(data, model, spec, opt, seed);
    case PriorFamily::PIMOM: return gibbs_pimom(data, model, spec, opt, seed);
    case PriorFamily::PEMOM: return gibbs_pemom(data, model, spec, opt, seed);
  }
  throw std::logic_error("run_gibbs: unknown family");
}

}  // namespace nlpbma
