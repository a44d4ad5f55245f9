#include "nlpbma/tmvn.hpp"

#include <Eigen/Cholesky>
#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace nlpbma {

namespace {

constexpr double sentinel = 1e300;

bool is_neg_inf(double x) { return x <= -sentinel; }
bool is_pos_inf(double x) { return x >= sentinel; }

double phi_of(double x) {
  if (is_neg_inf(x)) return 0.0;
  if (is_pos_inf(x)) return 1.0;
  return normal_cdf(x);
}

}  // namespace

void OuterRectangle::validate(Eigen::Index p) const {
  if (lower.size() != p || upper.size() != p)
    throw std::invalid_argument("OuterRectangle: dimension mismatch");
  for (Eigen::Index i = 0; i < p; ++i) {
    if (std::isnan(lower[i]) || std::isnan(upper[i]))
      throw std::invalid_argument("OuterRectangle: NaN endpoint");
    if (lower[i] > upper[i])
      throw std::invalid_argument("OuterRectangle: lower > upper at coordinate " +
                                  std::to_string(i));
  }
}

bool OuterRectangle::admits(const Vector& theta) const {
  for (Eigen::Index i = 0; i < theta.size(); ++i)
    if (theta[i] > lower[i] && theta[i] < upper[i]) return false;
  return true;
}

std::vector<Interval> merge_intervals(std::vector<Interval> intervals) {
  std::vector<Interval> in;
  in.reserve(intervals.size());
  for (const auto& iv : intervals) {
    if (std::isnan(iv.first) || std::isnan(iv.second))
      throw std::invalid_argument("merge_intervals: NaN endpoint");
    if (iv.first < iv.second) in.push_back(iv);
  }
  std::sort(in.begin(), in.end());
  std::vector<Interval> out;
  for (const auto& iv : in) {
    if (!out.empty() && iv.first <= out.back().second)
      out.back().second = std::max(out.back().second, iv.second);
    else
      out.push_back(iv);
  }
  return out;
}

double sample_normal_excluding(Rng& rng, double mean,
                               const std::vector<Interval>& exclusions,
                               TmvnDiagnostics* diag) {
  if (exclusions.empty()) return mean + rng.normal();

  /* Work on the standardized scale x = z - mean. Kept segments are the
   * complement of the union of (a_j, b_j) in cdf space. */
  const std::size_t m = exclusions.size();
  std::vector<double> pa(m), pb(m);
  double kept = 0.0;
  double prev = 0.0;
  for (std::size_t j = 0; j < m; ++j) {
    pa[j] = phi_of(exclusions[j].first - mean);
    pb[j] = phi_of(exclusions[j].second - mean);
    kept += pa[j] - prev;
    prev = pb[j];
  }
  kept += 1.0 - prev;

  if (!(kept > 1e-12)) {
    /* Numerically all mass is excluded: pin the draw to the admissible
     * boundary point closest to the mean. */
    if (diag) ++diag->atom_events;
    double best = std::numeric_limits<double>::quiet_NaN();
    double best_dist = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < m; ++j) {
      for (double cand : {exclusions[j].first, exclusions[j].second}) {
        if (is_neg_inf(cand) || is_pos_inf(cand)) continue;
        /* skip endpoints interior to another exclusion interval */
        bool interior = false;
        for (std::size_t k = 0; k < m; ++k)
          if (cand > exclusions[k].first && cand < exclusions[k].second) interior = true;
        if (interior) continue;
        const double dist = std::abs(cand - mean);
        if (dist < best_dist) {
          best_dist = dist;
          best = cand;
        }
      }
    }
    if (!std::isfinite(best))
      throw std::runtime_error("sample_normal_excluding: empty admissible set");
    return best;
  }

  const double target = rng.uniform_open() * kept;
  double acc = 0.0;
  prev = 0.0;
  double v = std::numeric_limits<double>::quiet_NaN();
  for (std::size_t j = 0; j <= m; ++j) {
    const double hi = (j < m) ? pa[j] : 1.0;
    const double seg = hi - prev;
    if (target <= acc + seg || j == m) {
      v = prev + (target - acc);
      break;
    }
    acc += seg;
    prev = pb[j];
  }
  v = std::min(std::max(v, std::numeric_limits<double>::min()), 1.0 - 1e-17);
  return mean + Rng::normal_quantile(v);
}

void tmvn_gibbs_sweep(const Matrix& D, const Vector& alpha, const OuterRectangle& region,
                      Vector& z, Vector& w, Rng& rng, TmvnDiagnostics& diag) {
  const Eigen::Index p = D.rows();
  std::vector<Interval> raw;
  for (Eigen::Index i = 0; i < p; ++i) {
    raw.clear();
    /* Rows j >= i carry coefficient d_ji on z_i (D lower triangular). */
    for (Eigen::Index j = i; j < p; ++j) {
      const double d = D(j, i);
      if (std::abs(d) < 1e-300) continue;
      if (region.lower[j] >= region.upper[j]) continue;
      const double r = w[j] - d * z[i];
      double lo = (region.lower[j] - r) / d;
      double hi = (region.upper[j] - r) / d;
      if (d < 0.0) std::swap(lo, hi);
      if (std::isnan(lo) || std::isnan(hi)) continue;
      raw.emplace_back(lo, hi);
    }
    const double zi_new = raw.empty()
                              ? alpha[i] + rng.normal()
                              : sample_normal_excluding(rng, alpha[i],
                                                        merge_intervals(std::move(raw)),
                                                        &diag);
    const double delta = zi_new - z[i];
    if (delta != 0.0) {
      for (Eigen::Index j = i; j < p; ++j) w[j] += D(j, i) * delta;
      z[i] = zi_new;
    }
  }
}

Vector project_to_region(Vector theta, const OuterRectangle& region) {
  for (Eigen::Index i = 0; i < theta.size(); ++i) {
    const double lo = region.lower[i], hi = region.upper[i];
    if (theta[i] > lo && theta[i] < hi) {
      if (is_neg_inf(lo) && is_pos_inf(hi))
        throw std::invalid_argument("project_to_region: coordinate fully excluded");
      if (is_neg_inf(lo))
        theta[i] = hi;
      else if (is_pos_inf(hi))
        theta[i] = lo;
      else
        theta[i] = (theta[i] - lo < hi - theta[i]) ? lo : hi;
    }
  }
  return theta;
}

TmvnSample gibbs_tmvn_outer(const Vector& mu, const Matrix& sigma,
                            const OuterRectangle& region, int n_draws, int burn_in,
                            std::uint64_t seed, const Vector* init) {
  const Eigen::Index p = mu.size();
  if (sigma.rows() != p || sigma.cols() != p)
    throw std::invalid_argument("gibbs_tmvn_outer: covariance dimension mismatch");
  region.validate(p);
  if (n_draws < 1) throw std::invalid_argument("gibbs_tmvn_outer: n_draws must be positive");
  if (burn_in < 0) throw std::invalid_argument("gibbs_tmvn_outer: negative burn_in");

  Eigen::LLT<Matrix> llt(sigma);
  if (llt.info() != Eigen::Success)
    throw std::invalid_argument("gibbs_tmvn_outer: covariance not positive definite");
  const Matrix D = llt.matrixL();

  Vector theta0 = project_to_region(init ? *init : mu, region);
  Vector z = D.triangularView<Eigen::Lower>().solve(theta0);
  Vector w = D * z;
  const Vector alpha = D.triangularView<Eigen::Lower>().solve(mu);

  Rng rng(seed);
  TmvnSample out;
  out.draws.resize(n_draws, p);
  const int total = burn_in + n_draws;
  for (int it = 0; it < total; ++it) {
    if (it > 0 && it % 256 == 0) w = D * z;
    tmvn_gibbs_sweep(D, alpha, region, z, w, rng, out.diagnostics);
    if (it >= burn_in) {
      Vector draw = w;
      /* Guard against rounding right at an exclusion boundary. */
      for (Eigen::Index i = 0; i < p; ++i) {
        if (draw[i] > region.lower[i] && draw[i] < region.upper[i]) {
          ++out.diagnostics.snap_events;
          draw[i] = (draw[i] - region.lower[i] < region.upper[i] - draw[i])
                        ? region.lower[i]
                        : region.upper[i];
        }
      }
      out.draws.row(it - burn_in) = draw;
      ++out.diagnostics.draws;
    }
  }
  return out;
}

}  // namespace nlpbma
