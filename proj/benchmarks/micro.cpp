#include "nlpbma/marglik.hpp"
#include "nlpbma/penalty_inverse.hpp"
#include "nlpbma/priors.hpp"
#include "nlpbma/rng.hpp"
#include "nlpbma/samplers.hpp"
#include "nlpbma/tmvn.hpp"
#include "nlpbma/truncation.hpp"

#include <benchmark/benchmark.h>

namespace {

using namespace nlpbma;

Dataset synthetic_data(int n, int p, std::uint64_t seed) {
  Rng rng(seed);
  Dataset d;
  d.X.resize(n, p);
  d.y.resize(n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < p; ++j) d.X(i, j) = rng.normal();
    d.y[i] = 1.2 * d.X(i, 0) - 0.7 * d.X(i, 1) + rng.normal();
  }
  return d;
}

void bm_tmvn_draws(benchmark::State& state) {
  const int dim = int(state.range(0));
  Vector mu = Vector::Zero(dim);
  Matrix sigma = Matrix::Identity(dim, dim);
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j)
      if (i != j) sigma(i, j) = 0.3;
  OuterRectangle region;
  region.lower = Vector::Constant(dim, -0.4);
  region.upper = Vector::Constant(dim, 0.4);

  std::uint64_t seed = 1;
  for (auto _ : state) {
    const TmvnSample s = gibbs_tmvn_outer(mu, sigma, region, 256, 32, seed++);
    benchmark::DoNotOptimize(s.draws.sum());
  }
  state.SetItemsProcessed(state.iterations() * 256);
}
BENCHMARK(bm_tmvn_draws)->Arg(2)->Arg(5)->Arg(10);

void bm_penalty_inversion(benchmark::State& state) {
  const ImomPenaltyCurve curve(0.133, 0.266, 1.0);
  double t = -50.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(invert_g(curve, t));
    t += 0.01;
    if (t > 50.0) t = -50.0;
  }
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(bm_penalty_inversion);

void bm_marglik_mc(benchmark::State& state) {
  const int k = int(state.range(0));
  const Dataset data = synthetic_data(200, 12, 5);
  const PriorSpec spec = PriorSpec::defaults(PriorFamily::PIMOM);
  ModelIndicator model(12);
  for (int j = 0; j < k; ++j) model.set(j, true);
  MargLikConfig cfg;
  cfg.n_samples = 2000;
  std::uint64_t seed = 1;
  for (auto _ : state) {
    cfg.seed = seed++;
    benchmark::DoNotOptimize(log_marginal_nlp(data, model, spec, cfg).value);
  }
  state.SetItemsProcessed(state.iterations() * cfg.n_samples);
}
BENCHMARK(bm_marglik_mc)->Arg(2)->Arg(5)->Arg(8);

void bm_prior_sampling(benchmark::State& state) {
  const PriorSpec spec = PriorSpec::defaults(PriorFamily::PEMOM);
  std::uint64_t seed = 1;
  for (auto _ : state) {
    const RejectionSample s = sample_nlp_prior_rejection(spec, 1.0, 1024, seed++);
    benchmark::DoNotOptimize(s.draws.sum());
  }
  state.SetItemsProcessed(state.iterations() * 1024);
}
BENCHMARK(bm_prior_sampling);

void bm_gibbs_chain(benchmark::State& state) {
  const Dataset data = synthetic_data(150, 6, 9);
  const PriorSpec spec = PriorSpec::defaults(PriorFamily::PMOM);
  ModelIndicator model(6);
  model.set(0, true);
  model.set(1, true);
  model.set(3, true);
  GibbsOptions opt;
  opt.n_iter = 512;
  opt.burn_in = 64;
  std::uint64_t seed = 1;
  for (auto _ : state) {
    const ChainOutput c = run_gibbs(data, model, spec, opt, seed++);
    benchmark::DoNotOptimize(c.theta_draws.sum());
  }
  state.SetItemsProcessed(state.iterations() * opt.n_iter);
}
BENCHMARK(bm_gibbs_chain);

}  // namespace

int main(int argc, char** argv) {
  benchmark::Initialize(&argc, argv);
  if (benchmark::ReportUnrecognizedArguments(argc, argv)) return 1;
  benchmark::RunSpecifiedBenchmarks();
  benchmark::Shutdown();
  return 0;
}
