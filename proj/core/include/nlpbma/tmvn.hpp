#pragma once

#include "nlpbma/dataset.hpp"
#include "nlpbma/rng.hpp"

#include <cstdint>
#include <utility>
#include <vector>

namespace nlpbma {

/* Componentwise exclusion region: theta is admissible when
 * theta_i <= lower[i] or theta_i >= upper[i] for every i, i.e. the open
 * rectangle prod (lower_i, upper_i) is removed. lower_i == upper_i encodes
 * "no exclusion"; magnitudes >= 1e300 act as infinite endpoints. */
struct OuterRectangle {
  Vector lower;
  Vector upper;

  void validate(Eigen::Index p) const;
  bool admits(const Vector& theta) const;
};

using Interval = std::pair<double, double>;

/* Sort by left endpoint and fuse overlapping or touching open intervals;
 * empty intervals (a >= b) are dropped. */
std::vector<Interval> merge_intervals(std::vector<Interval> intervals);

struct TmvnDiagnostics {
  long long atom_events = 0;   // kept mass below 1e-12, draw pinned to a boundary
  long long snap_events = 0;   // emitted coordinate nudged onto the region boundary
  long long draws = 0;
};

/* One draw from N(mean, 1) conditioned on avoiding the merged open
 * intervals (inverse-cdf on the gap-compressed scale). */
double sample_normal_excluding(Rng& rng, double mean,
                               const std::vector<Interval>& exclusions,
                               TmvnDiagnostics* diag = nullptr);

/* One systematic-scan Gibbs sweep over the whitened coordinates.
 * D is the lower Cholesky factor of the covariance, alpha = D^{-1} mu,
 * z the whitened state and w = D z (kept in sync). */
void tmvn_gibbs_sweep(const Matrix& D, const Vector& alpha, const OuterRectangle& region,
                      Vector& z, Vector& w, Rng& rng, TmvnDiagnostics& diag);

struct TmvnSample {
  Matrix draws;
  TmvnDiagnostics diagnostics;
};

/* Gibbs sampler for N(mu, sigma) restricted to the outer region. Draws are
 * collected after burn_in full sweeps, one sweep per draw. */
TmvnSample gibbs_tmvn_outer(const Vector& mu, const Matrix& sigma,
                            const OuterRectangle& region, int n_draws, int burn_in,
                            std::uint64_t seed, const Vector* init = nullptr);

/* Push coordinates of theta that fall inside their exclusion interval to the
 * nearest boundary (used to build a feasible chain start). */
Vector project_to_region(Vector theta, const OuterRectangle& region);

}  // namespace nlpbma
