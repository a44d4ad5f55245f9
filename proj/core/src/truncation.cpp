#include "nlpbma/truncation.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace nlpbma {

namespace {

constexpr double sqrt_2_over_pi = 0.7978845608028654;

/* chi-squared(3) cdf: F3(x) = erf(sqrt(x/2)) - sqrt(2x/pi) exp(-x/2) */
double chi3_cdf(double x) {
  if (x <= 0.0) return 0.0;
  return std::erf(std::sqrt(0.5 * x)) - sqrt_2_over_pi * std::sqrt(x) * std::exp(-0.5 * x);
}

}  // namespace

double chi1_survival(double x) {
  if (x < 0.0) throw std::invalid_argument("chi1_survival: negative argument");
  return std::erfc(std::sqrt(0.5 * x));
}

double lambda_mixing_cdf_h(double x) {
  if (x <= 0.0) return 0.0;
  return x * chi1_survival(x) + chi3_cdf(x);
}

double lambda_mixing_pdf_h(double x) {
  /* H'(x) = S1(x): the F3' and x S1' terms cancel through
   * x f1(x) = f3(x). */
  return x <= 0.0 ? (x == 0.0 ? 1.0 : 0.0) : chi1_survival(x);
}

LambdaInverseCdfTable::LambdaInverseCdfTable(double tau, int grid_size) : tau_(tau) {
  if (!(tau > 0.0) || !std::isfinite(tau))
    throw std::invalid_argument("LambdaInverseCdfTable: tau must be positive");
  if (grid_size < 64)
    throw std::invalid_argument("LambdaInverseCdfTable: grid_size must be at least 64");

  /* log-spaced grid in x = lambda / tau covering cdf values from ~1e-13 to
   * within ~1e-13 of 1 */
  const double x_lo = 1e-13;
  const double x_hi = 80.0;
  lambda_.resize(grid_size);
  cdf_.resize(grid_size);
  const double step = std::log(x_hi / x_lo) / (grid_size - 1);
  for (int i = 0; i < grid_size; ++i) {
    const double x = x_lo * std::exp(step * i);
    lambda_[i] = tau * x;
    cdf_[i] = lambda_mixing_cdf_h(x);
  }

  /* Normalization check: the trapezoid integral of the mixing density over
   * the grid must match the closed-form cdf increment. */
  double trap = 0.0;
  for (int i = 1; i < grid_size; ++i) {
    const double x0 = lambda_[i - 1] / tau, x1 = lambda_[i] / tau;
    trap += 0.5 * (lambda_mixing_pdf_h(x0) + lambda_mixing_pdf_h(x1)) * (x1 - x0);
  }
  const double closed = cdf_.back() - cdf_.front();
  if (!(std::abs(trap - closed) < 5e-4) || !(cdf_.back() > 1.0 - 1e-9))
    throw std::runtime_error("LambdaInverseCdfTable: mixing density fails normalization");
  for (int i = 1; i < grid_size; ++i) {
    if (cdf_[i] >= cdf_[i - 1]) continue;
    /* Near saturation the closed form wobbles at the ulp level; anything
     * larger means the formula itself is wrong. */
    if (cdf_[i - 1] - cdf_[i] > 1e-12)
      throw std::runtime_error("LambdaInverseCdfTable: cdf not monotone");
    cdf_[i] = cdf_[i - 1];
  }
}

double LambdaInverseCdfTable::cdf(double lambda) const {
  if (lambda <= 0.0) return 0.0;
  return lambda_mixing_cdf_h(lambda / tau_);
}

double LambdaInverseCdfTable::inverse(double u) const {
  if (!(u > 0.0) || !(u < 1.0))
    throw std::invalid_argument("LambdaInverseCdfTable::inverse: u must lie in (0,1)");

  double x;
  if (u <= cdf_.front()) {
    /* Left tail: H(x) ~ x for small x. */
    x = u;
  } else if (u >= cdf_.back()) {
    /* Right tail: solve the asymptotic tail 1-H(x) ~ 2 sqrt(2/(pi x)) e^{-x/2}. */
    const double t = 1.0 - u;
    x = lambda_.back() / tau_;
    for (int it = 0; it < 50; ++it) {
      const double f = 1.0 - lambda_mixing_cdf_h(x);
      const double fp = -lambda_mixing_pdf_h(x);
      if (fp == 0.0) break;
      const double next = x - (f - t) / fp;
      if (!(next > 0.0)) break;
      if (std::abs(next - x) < 1e-12 * x) {
        x = next;
        break;
      }
      x = next;
    }
  } else {
    const auto it = std::upper_bound(cdf_.begin(), cdf_.end(), u);
    const std::size_t j = static_cast<std::size_t>(it - cdf_.begin()) - 1;
    const double f0 = cdf_[j], f1 = cdf_[j + 1];
    const double x0 = lambda_[j] / tau_, x1 = lambda_[j + 1] / tau_;
    x = f1 > f0 ? x0 + (u - f0) * (x1 - x0) / (f1 - f0) : x0;
    /* One Newton polish against the closed-form cdf. */
    const double pdf = lambda_mixing_pdf_h(x);
    if (pdf > 0.0) {
      const double corrected = x - (lambda_mixing_cdf_h(x) - u) / pdf;
      if (corrected > 0.0 && corrected >= x0 * 0.5 && corrected <= x1 * 2.0) x = corrected;
    }
  }
  return tau_ * x;
}

double sample_two_sided_tail_normal(Rng& rng, double sd, double t) {
  if (!(sd > 0.0)) throw std::invalid_argument("tail normal: sd must be positive");
  if (t < 0.0) throw std::invalid_argument("tail normal: negative threshold");
  if (t == 0.0) return rng.normal(0.0, sd);
  const double surv = normal_cdf_complement(t / sd);
  if (!(surv > 0.0))
    throw std::runtime_error("tail normal: truncation region has vanishing mass");
  const double sign = rng.uniform() < 0.5 ? -1.0 : 1.0;
  const double v = rng.uniform_open();
  /* quantile of the upper tail: P(X > x) = v * surv */
  const double x = -Rng::normal_quantile(std::min(1.0 - 1e-17, v * surv));
  return sign * sd * std::max(x, t / sd);
}

Matrix sample_pmom_prior(int p, double tau, int n_draws, std::uint64_t seed) {
  if (p < 1) throw std::invalid_argument("sample_pmom_prior: p must be positive");
  if (n_draws < 1) throw std::invalid_argument("sample_pmom_prior: n_draws must be positive");
  LambdaInverseCdfTable table(tau);
  Rng rng(seed);
  Matrix out(n_draws, p);
  for (int i = 0; i < n_draws; ++i)
    for (int j = 0; j < p; ++j) {
      const double lambda = table.inverse(rng.uniform_open());
      out(i, j) = sample_two_sided_tail_normal(rng, std::sqrt(tau), std::sqrt(lambda));
    }
  return out;
}

RejectionSample sample_nlp_prior_rejection(const PriorSpec& spec, double phi, int n_draws,
                                           std::uint64_t seed) {
  if (!(phi > 0.0)) throw std::invalid_argument("prior rejection: phi must be positive");
  if (n_draws < 1) throw std::invalid_argument("prior rejection: n_draws must be positive");
  if (spec.family == PriorFamily::PMOM)
    throw std::invalid_argument("prior rejection: use the latent-truncation pMOM sampler");

  Rng rng(seed);
  const double scale = std::sqrt(spec.tau * phi);
  Matrix out(n_draws, 1);
  long long proposals = 0;
  for (int i = 0; i < n_draws; ++i) {
    for (;;) {
      ++proposals;
      if (proposals > 4000LL + 2000LL * (i + 1LL))
        throw std::runtime_error("prior rejection: acceptance rate collapsed");
      if (spec.family == PriorFamily::PEMOM) {
        const double theta = rng.normal(0.0, scale);
        if (theta != 0.0 &&
            rng.uniform() < std::exp(-spec.tau * phi / (theta * theta))) {
          out(i, 0) = theta;
          break;
        }
      } else {
        /* piMOM target over Cauchy(0, scale): the density ratio is bounded
         * by sqrt(pi) at eta -> inf, so the normalized acceptance weight
         * (1+eta^2) exp(-1/eta^2) / eta^2 already lies in (0, 1). */
        const double theta = rng.cauchy(0.0, scale);
        const double eta2 = (theta * theta) / (scale * scale);
        if (eta2 > 0.0) {
          const double accept = (1.0 + eta2) * std::exp(-1.0 / eta2) / eta2;
          if (rng.uniform() < accept) {
            out(i, 0) = theta;
            break;
          }
        }
      }
    }
  }
  RejectionSample rs;
  rs.draws = std::move(out);
  rs.acceptance_rate = static_cast<double>(n_draws) / static_cast<double>(proposals);
  return rs;
}

}  // namespace nlpbma
