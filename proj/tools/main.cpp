#include "nlpbma/bench.hpp"
#include "nlpbma/bma.hpp"
#include "nlpbma/diagnostics.hpp"
#include "nlpbma/io.hpp"
#include "nlpbma/modelsearch.hpp"
#include "nlpbma/report.hpp"
#include "nlpbma/rng.hpp"
#include "nlpbma/truncation.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdint>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

namespace {

using namespace nlpbma;
using nlohmann::json;
using ConfigPairs = std::vector<std::pair<std::string, std::string>>;

constexpr int kExitOk = 0;
constexpr int kExitInput = 2;
constexpr int kExitConfig = 3;
constexpr int kExitNumeric = 4;

std::uint64_t resolve_seed(const CLI::Option* opt, std::uint64_t value) {
  if (opt->count() > 0) return value;
  std::random_device rd;
  return (std::uint64_t(rd()) << 32) ^ rd();
}

void emit_json(const json& report, const std::string& out_path) {
  const std::string text = report.dump(2) + "\n";
  if (out_path.empty())
    std::cout << text;
  else
    write_text_file(out_path, text);
}

void emit_manifest_sidecar(const std::string& out_path, const std::string& command,
                           const ConfigPairs& config, std::uint64_t seed) {
  if (out_path.empty()) return;
  write_text_file(out_path + ".manifest.json", manifest_json(command, config, seed) + "\n");
}

struct PriorFlags {
  std::string family = "pmom";
  double tau = -1.0;
  double tau_n = -1.0;
  int r = 1;
  double a_phi = 0.01;
  double b_phi = 0.01;

  void attach(CLI::App* cmd) {
    cmd->add_option("--family", family, "Prior family: pmom, pimom or pemom")
        ->check(CLI::IsMember({"pmom", "pimom", "pemom"}))
        ->capture_default_str();
    cmd->add_option("--tau", tau, "Prior scale (default: family calibration)");
    cmd->add_option("--tau-n", tau_n,
                    "Auxiliary Gaussian scale for the piMOM factorization (default 2 tau)");
    cmd->add_option("--r", r, "pMOM moment order")->capture_default_str();
    cmd->add_option("--a-phi", a_phi, "Residual variance prior shape parameter a")
        ->capture_default_str();
    cmd->add_option("--b-phi", b_phi, "Residual variance prior rate parameter b")
        ->capture_default_str();
  }

  PriorSpec resolve() const {
    PriorSpec spec = PriorSpec::defaults(family_from_name(family));
    if (tau > 0.0) {
      spec.tau = tau;
      spec.tau_n = 2.0 * tau;
    }
    if (tau_n > 0.0) spec.tau_n = tau_n;
    spec.r = r;
    spec.a_phi = a_phi;
    spec.b_phi = b_phi;
    spec.validate();
    return spec;
  }

  void record(ConfigPairs& config) const {
    const PriorSpec spec = resolve();
    config.emplace_back("family", family_name(spec.family));
    config.emplace_back("tau", format_double(spec.tau));
    config.emplace_back("tau_n", format_double(spec.tau_n));
    config.emplace_back("r", std::to_string(spec.r));
    config.emplace_back("a_phi", format_double(spec.a_phi));
    config.emplace_back("b_phi", format_double(spec.b_phi));
  }
};

Dataset load_dataset(const std::string& path, bool allow_no_predictors) {
  const CsvTable table = read_csv(path);
  if (allow_no_predictors && table.header.size() == 1) {
    if (table.values.rows() < 1) throw CsvError("no data rows", 2);
    Dataset data;
    data.y = table.values.col(0);
    data.X.resize(data.y.size(), 0);
    return data;
  }
  return dataset_from_table(table);
}

std::vector<int> parse_index_list(const std::string& text, int p) {
  std::vector<int> out;
  std::stringstream ss(text);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    if (tok.empty()) continue;
    int v = 0;
    try {
      v = std::stoi(tok);
    } catch (const std::exception&) {
      throw std::invalid_argument("bad covariate index '" + tok + "'");
    }
    if (v < 1 || v > p)
      throw std::invalid_argument("covariate index " + tok + " outside 1.." +
                                  std::to_string(p));
    out.push_back(v - 1);
  }
  return out;
}

json model_to_json(const ModelProb& mp) {
  json j;
  json idx = json::array();
  for (int i : mp.model.indices()) idx.push_back(i + 1);
  j["covariates"] = idx;
  j["mask"] = mp.model.to_hex();
  j["size"] = mp.model.count();
  j["prob"] = mp.prob;
  j["log_marginal"] = mp.log_marginal;
  j["log_prior"] = mp.log_prior;
  if (mp.count > 0) j["visits"] = mp.count;
  return j;
}

json vector_to_json(const Vector& v) {
  json a = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v[i]);
  return a;
}

/* ---------------------------------------------------------------- fit --- */

struct FitArgs {
  std::string data_path;
  PriorFlags prior;
  long long sweeps = 1000;
  int draws = 1000;
  int chain_burn_in = 100;
  int marglik_samples = 10000;
  int top_k = 10;
  double min_prob = 0.0;
  bool enumerate = false;
  bool no_standardize = false;
  int threads = 1;
  std::uint64_t seed = 0;
  std::string out;
};

int run_fit(const FitArgs& a, std::uint64_t seed) {
  const Dataset raw = load_dataset(a.data_path, true);
  Dataset data = raw;
  Standardization std_info;
  const bool standardized = !a.no_standardize && raw.p() > 0;
  if (standardized) std::tie(data, std_info) = standardize(raw);

  const PriorSpec spec = a.prior.resolve();
  MargLikConfig ml;
  ml.n_samples = a.marglik_samples;
  ml.seed = Rng::derive_seed(seed, 11);

  std::vector<ModelProb> probs;
  std::shared_ptr<MarglikCacheStore> cache;
  long long quarantined = 0;
  if (a.enumerate || data.p() == 0) {
    ModelPosterior post = enumerate_models(data, spec, ml);
    probs = post.models;
    cache = post.cache;
  } else {
    ModelSearchResult search =
        gibbs_model_search(data, spec, a.sweeps, Rng::derive_seed(seed, 22), ml);
    probs = posterior_model_probs(search);
    cache = search.cache;
    quarantined = search.quarantined;
  }

  BmaOptions bo;
  bo.draws_per_model = a.draws;
  bo.chain_burn_in = a.chain_burn_in;
  bo.min_prob = a.min_prob;
  bo.threads = a.threads;
  const BmaResult bma =
      bma_posterior_mean(probs, data, spec, bo, Rng::derive_seed(seed, 33));

  ConfigPairs config;
  config.emplace_back("data", a.data_path);
  a.prior.record(config);
  config.emplace_back("sweeps", std::to_string(a.sweeps));
  config.emplace_back("draws_per_model", std::to_string(a.draws));
  config.emplace_back("chain_burn_in", std::to_string(a.chain_burn_in));
  config.emplace_back("marglik_samples", std::to_string(a.marglik_samples));
  config.emplace_back("top_k", std::to_string(a.top_k));
  config.emplace_back("min_prob", format_double(a.min_prob));
  config.emplace_back("search", a.enumerate || data.p() == 0 ? "enumerate" : "gibbs");
  config.emplace_back("standardize", standardized ? "true" : "false");

  json report;
  report["manifest"] = json::parse(manifest_json("fit", config, seed));
  json tops = json::array();
  const int n_top = a.top_k < 0 ? int(probs.size())
                                : std::min<int>(a.top_k, int(probs.size()));
  for (int i = 0; i < n_top; ++i) tops.push_back(model_to_json(probs[size_t(i)]));
  report["top_models"] = tops;
  report["inclusion"] = vector_to_json(bma.inclusion);
  report["theta_mean"] = vector_to_json(bma.theta_mean);
  report["phi_mean"] = bma.phi_mean;
  report["averaged_models"] = bma.models_used.size();
  report["averaged_mass"] = bma.coverage;
  if (!raw.column_names.empty()) report["columns"] = raw.column_names;
  if (standardized) {
    const auto [intercept, slopes] = std_info.to_original(bma.theta_mean);
    report["original_scale"] = {{"intercept", intercept},
                                {"slopes", vector_to_json(slopes)}};
  }

  json diag;
  diag["quarantined_models"] = quarantined;
  diag["failed_chains"] = bma.failed_models.size();
  if (!probs.empty() && probs.front().model.count() > 0) {
    GibbsOptions gopt;
    gopt.n_iter = a.draws + a.chain_burn_in;
    gopt.burn_in = a.chain_burn_in;
    const ChainOutput chain = run_gibbs(data, probs.front().model, spec, gopt,
                                        Rng::derive_seed(seed, 44));
    const Matrix theta = chain.post_burn_theta();
    json ac = json::array();
    for (Eigen::Index j = 0; j < theta.cols(); ++j)
      ac.push_back(autocorrelation(theta.col(j)));
    diag["top_model_lag1_theta"] = ac;
    diag["top_model_lag1_phi"] = autocorrelation(chain.post_burn_phi());
    diag["mh_acceptance"] = chain.mh_acceptance;
  }
  report["diagnostics"] = diag;

  emit_json(report, a.out);
  emit_manifest_sidecar(a.out, "fit", config, seed);
  return kExitOk;
}

/* ------------------------------------------------------- prior-sample --- */

struct PriorSampleArgs {
  PriorFlags prior;
  double phi = 1.0;
  int n_draws = 10000;
  std::uint64_t seed = 0;
  std::string out;
};

int run_prior_sample(const PriorSampleArgs& a, std::uint64_t seed) {
  const PriorSpec spec = a.prior.resolve();
  if (a.n_draws < 1) throw std::invalid_argument("need at least one draw");
  if (!(a.phi > 0.0)) throw std::invalid_argument("phi must be positive");

  Matrix draws;
  double acceptance = 1.0;
  if (spec.family == PriorFamily::PMOM) {
    draws = std::sqrt(a.phi) * sample_pmom_prior(1, spec.tau, a.n_draws, seed);
  } else {
    RejectionSample rs = sample_nlp_prior_rejection(spec, a.phi, a.n_draws, seed);
    draws = std::move(rs.draws);
    acceptance = rs.acceptance_rate;
  }

  write_text_file(a.out, render_csv({"theta"}, draws));

  ConfigPairs config;
  a.prior.record(config);
  config.emplace_back("phi", format_double(a.phi));
  config.emplace_back("draws", std::to_string(a.n_draws));
  emit_manifest_sidecar(a.out, "prior-sample", config, seed);

  double below = 0.0;
  for (Eigen::Index i = 0; i < draws.rows(); ++i)
    if (std::abs(draws(i, 0)) < 0.2) below += 1.0;
  json summary;
  summary["manifest"] = json::parse(manifest_json("prior-sample", config, seed));
  summary["draws"] = a.n_draws;
  summary["acceptance_rate"] = acceptance;
  summary["sample_prob_below_0.2"] = below / a.n_draws;
  std::cout << summary.dump(2) << "\n";
  return kExitOk;
}

/* ------------------------------------------------------------ marglik --- */

struct MarglikArgs {
  std::string data_path;
  PriorFlags prior;
  std::string model = "full";
  int samples = 10000;
  bool local_only = false;
  bool standardize_data = false;
  std::uint64_t seed = 0;
  std::string out;
};

int run_marglik(const MarglikArgs& a, std::uint64_t seed) {
  Dataset data = load_dataset(a.data_path, true);
  if (a.standardize_data && data.p() > 0) data = standardize(data).first;
  const PriorSpec spec = a.prior.resolve();
  const int p = int(data.p());

  ModelIndicator model(p);
  if (a.model == "full") {
    for (int i = 0; i < p; ++i) model.set(i, true);
  } else if (a.model != "null") {
    model = ModelIndicator::from_indices(p, parse_index_list(a.model, p));
  }

  MargLikConfig ml;
  ml.n_samples = a.samples;
  ml.seed = seed;
  ml.local_prior_only = a.local_only;
  const LogMarginal lm = log_marginal_nlp(data, model, spec, ml);
  const double v_scale = spec.family == PriorFamily::PIMOM ? spec.tau_n : spec.tau;
  const double local = log_marginal_normal_ig(data, model, v_scale, spec.a_phi, spec.b_phi);

  ConfigPairs config;
  config.emplace_back("data", a.data_path);
  a.prior.record(config);
  config.emplace_back("model", a.model);
  config.emplace_back("samples", std::to_string(a.samples));
  config.emplace_back("local_prior_only", a.local_only ? "true" : "false");
  config.emplace_back("standardize", a.standardize_data ? "true" : "false");

  json report;
  report["manifest"] = json::parse(manifest_json("marglik", config, seed));
  json m;
  json idx = json::array();
  for (int i : model.indices()) idx.push_back(i + 1);
  m["covariates"] = idx;
  m["mask"] = model.to_hex();
  m["size"] = model.count();
  report["model"] = m;
  report["log_marginal"] = lm.value;
  report["mc_se"] = lm.mc_se;
  report["n_samples"] = lm.n_samples;
  report["exact"] = lm.exact;
  report["degenerate_weights"] = lm.degenerate_weights;
  report["local_log_marginal"] = local;
  report["log_penalty_factor"] = a.local_only ? 0.0 : lm.value - local;
  report["log_model_prior"] = log_model_prior_betabinomial(model, data.n());

  emit_json(report, a.out);
  emit_manifest_sidecar(a.out, "marglik", config, seed);
  return kExitOk;
}

/* ----------------------------------------------------------- simulate --- */

struct SimulateArgs {
  int n = 100;
  int p = 100;
  double rho = 0.0;
  double phi_star = 1.0;
  int replicate = 0;
  std::string signal = "staircase";
  std::uint64_t seed = 0;
  std::string out;
};

Vector parse_signal(const std::string& text, int p) {
  if (text == "staircase") return staircase_signal(p);
  Vector theta = Vector::Zero(p);
  std::stringstream ss(text);
  std::string tok;
  int j = 0;
  while (std::getline(ss, tok, ',')) {
    if (j >= p) throw std::invalid_argument("signal has more entries than covariates");
    try {
      theta[j++] = std::stod(tok);
    } catch (const std::exception&) {
      throw std::invalid_argument("bad signal entry '" + tok + "'");
    }
  }
  return theta;
}

int run_simulate(const SimulateArgs& a, std::uint64_t seed) {
  EquicorrConfig cfg;
  cfg.n = a.n;
  cfg.p = a.p;
  cfg.rho = a.rho;
  cfg.phi_star = a.phi_star;
  cfg.theta_star = parse_signal(a.signal, a.p);
  cfg.seed = seed;
  const Dataset data = gen_equicorr_data(cfg, a.replicate);

  std::vector<std::string> header{"y"};
  for (int j = 1; j <= a.p; ++j) header.push_back("x" + std::to_string(j));
  Matrix table(a.n, a.p + 1);
  table.col(0) = data.y;
  table.rightCols(a.p) = data.X;
  write_text_file(a.out, render_csv(header, table));
  write_text_file(a.out + ".truth.csv", render_csv({"theta_star"}, cfg.theta_star));

  ConfigPairs config;
  config.emplace_back("n", std::to_string(a.n));
  config.emplace_back("p", std::to_string(a.p));
  config.emplace_back("rho", format_double(a.rho));
  config.emplace_back("phi_star", format_double(a.phi_star));
  config.emplace_back("replicate", std::to_string(a.replicate));
  config.emplace_back("signal", a.signal);
  emit_manifest_sidecar(a.out, "simulate", config, seed);

  json summary;
  summary["manifest"] = json::parse(manifest_json("simulate", config, seed));
  summary["rows"] = a.n;
  summary["columns"] = a.p + 1;
  std::cout << summary.dump(2) << "\n";
  return kExitOk;
}

/* ---------------------------------------------------------- benchmark --- */

struct BenchmarkArgs {
  std::string study = "sse";
  std::string preset;
  int n = 100;
  int p = 100;
  double rho = 0.0;
  double phi_star = 1.0;
  int replicates = 50;
  std::string methods = "pmom,pimom,pemom,ridge,ols_oracle";
  long long sweeps = 200;
  int marglik_samples = 1000;
  int draws = 500;
  int chain_burn_in = 50;
  int top_k = 50;
  std::string family = "pmom";
  std::string n_grid = "100,200,400,800";
  int batches = 10;
  int reps_per_batch = 3;
  int threads = 1;
  std::uint64_t seed = 0;
  std::string out;
  std::string out_csv;
};

std::vector<FitMethod> parse_methods(const std::string& text) {
  std::vector<FitMethod> out;
  std::stringstream ss(text);
  std::string tok;
  while (std::getline(ss, tok, ','))
    if (!tok.empty()) out.push_back(method_from_name(tok));
  if (out.empty()) throw std::invalid_argument("no methods given");
  return out;
}

std::vector<int> parse_int_list(const std::string& text) {
  std::vector<int> out;
  std::stringstream ss(text);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    if (tok.empty()) continue;
    try {
      out.push_back(std::stoi(tok));
    } catch (const std::exception&) {
      throw std::invalid_argument("bad integer '" + tok + "'");
    }
  }
  return out;
}

void apply_preset(BenchmarkArgs& a, const CLI::App* cmd) {
  auto defaulted = [&](const std::string& flag) {
    return cmd->get_option(flag)->count() == 0;
  };
  if (a.preset == "sim-small") {
    if (defaulted("--n")) a.n = 60;
    if (defaulted("--p")) a.p = 8;
    if (defaulted("--replicates")) a.replicates = 3;
    if (defaulted("--methods")) a.methods = "pmom,ridge,ols_oracle";
    if (defaulted("--sweeps")) a.sweeps = 60;
    if (defaulted("--marglik-samples")) a.marglik_samples = 400;
    if (defaulted("--draws")) a.draws = 150;
    if (defaulted("--chain-burn-in")) a.chain_burn_in = 30;
  } else if (a.preset == "sim-highdim") {
    if (defaulted("--n")) a.n = 100;
    if (defaulted("--p")) a.p = 100;
    if (defaulted("--replicates")) a.replicates = 50;
    if (defaulted("--methods")) a.methods = "pmom,pimom,pemom,ridge,ols_oracle";
    if (defaulted("--sweeps")) a.sweeps = 200;
    if (defaulted("--marglik-samples")) a.marglik_samples = 1000;
    if (defaulted("--draws")) a.draws = 500;
    if (defaulted("--chain-burn-in")) a.chain_burn_in = 50;
  } else if (!a.preset.empty()) {
    throw std::invalid_argument("unknown preset '" + a.preset + "'");
  }
}

int run_benchmark(const BenchmarkArgs& a, std::uint64_t seed) {
  ConfigPairs config;
  config.emplace_back("study", a.study);
  config.emplace_back("threads", std::to_string(a.threads));

  if (a.study == "sse") {
    SimStudyConfig cfg;
    cfg.design.n = a.n;
    cfg.design.p = a.p;
    cfg.design.rho = a.rho;
    cfg.design.phi_star = a.phi_star;
    cfg.design.theta_star = staircase_signal(a.p);
    cfg.design.seed = seed;
    cfg.replicates = a.replicates;
    cfg.methods = parse_methods(a.methods);
    cfg.fit.sweeps = a.sweeps;
    cfg.fit.marglik_samples = a.marglik_samples;
    cfg.fit.draws_per_model = a.draws;
    cfg.fit.chain_burn_in = a.chain_burn_in;
    cfg.fit.bma_top_k = a.top_k;
    cfg.threads = a.threads;
    const SimStudyResult result = run_sim_study(cfg);

    config.emplace_back("n", std::to_string(a.n));
    config.emplace_back("p", std::to_string(a.p));
    config.emplace_back("rho", format_double(a.rho));
    config.emplace_back("phi_star", format_double(a.phi_star));
    config.emplace_back("replicates", std::to_string(a.replicates));
    config.emplace_back("methods", a.methods);
    config.emplace_back("sweeps", std::to_string(a.sweeps));
    config.emplace_back("marglik_samples", std::to_string(a.marglik_samples));
    config.emplace_back("draws_per_model", std::to_string(a.draws));
    config.emplace_back("chain_burn_in", std::to_string(a.chain_burn_in));

    json report = json::parse(to_json(result));
    report["manifest"] = json::parse(manifest_json("benchmark", config, seed));
    emit_json(report, a.out);
    if (!a.out_csv.empty()) write_text_file(a.out_csv, sse_rows_csv(result));
    emit_manifest_sidecar(a.out, "benchmark", config, seed);
    return kExitOk;
  }

  if (a.study == "shrinkage") {
    ShrinkageOptions opts;
    opts.n_grid = parse_int_list(a.n_grid);
    opts.p = a.p;
    opts.batches = a.batches;
    opts.reps_per_batch = a.reps_per_batch;
    opts.draws_per_model = a.draws;
    opts.chain_burn_in = a.chain_burn_in;
    opts.marglik_samples = a.marglik_samples;
    opts.seed = seed;
    opts.threads = a.threads;
    const ShrinkageReport rep = empirical_shrinkage_rate(family_from_name(a.family), opts);

    config.emplace_back("family", a.family);
    config.emplace_back("n_grid", a.n_grid);
    config.emplace_back("p", std::to_string(a.p));
    config.emplace_back("batches", std::to_string(a.batches));
    config.emplace_back("reps_per_batch", std::to_string(a.reps_per_batch));
    config.emplace_back("draws_per_model", std::to_string(a.draws));
    config.emplace_back("chain_burn_in", std::to_string(a.chain_burn_in));
    config.emplace_back("marglik_samples", std::to_string(a.marglik_samples));

    json report = json::parse(to_json(rep));
    report["manifest"] = json::parse(manifest_json("benchmark", config, seed));
    emit_json(report, a.out);
    emit_manifest_sidecar(a.out, "benchmark", config, seed);
    return kExitOk;
  }

  throw std::invalid_argument("unknown study '" + a.study + "'");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Bayesian variable selection and model averaging under product "
               "non-local priors"};
  app.require_subcommand(1);

  FitArgs fit;
  CLI::App* cmd_fit = app.add_subcommand(
      "fit", "Model search plus Bayesian model averaging on a CSV dataset");
  cmd_fit->add_option("--data", fit.data_path, "CSV file; first column is the response")
      ->required();
  fit.prior.attach(cmd_fit);
  cmd_fit->add_option("--sweeps", fit.sweeps, "Model-search sweeps")->capture_default_str();
  cmd_fit->add_option("--draws", fit.draws, "Posterior draws per model")
      ->capture_default_str();
  cmd_fit->add_option("--chain-burn-in", fit.chain_burn_in, "Burn-in per chain")
      ->capture_default_str();
  cmd_fit->add_option("--marglik-samples", fit.marglik_samples,
                      "Monte Carlo samples per marginal likelihood")
      ->capture_default_str();
  cmd_fit->add_option("--top-k", fit.top_k, "Models listed in the report (-1 = all)")
      ->capture_default_str();
  cmd_fit->add_option("--min-prob", fit.min_prob,
                      "Drop models below this weight before averaging")
      ->capture_default_str();
  cmd_fit->add_flag("--enumerate", fit.enumerate,
                    "Enumerate all models instead of searching (small p only)");
  cmd_fit->add_flag("--no-standardize", fit.no_standardize,
                    "Fit on the raw scale instead of standardized columns");
  cmd_fit->add_option("--threads", fit.threads, "Worker threads")->capture_default_str();
  const CLI::Option* fit_seed =
      cmd_fit->add_option("--seed", fit.seed, "RNG seed (generated when omitted)");
  cmd_fit->add_option("--out", fit.out, "Report path (stdout when omitted)");

  PriorSampleArgs ps;
  CLI::App* cmd_ps =
      app.add_subcommand("prior-sample", "Draw from a univariate non-local prior");
  ps.prior.attach(cmd_ps);
  cmd_ps->add_option("--phi", ps.phi, "Residual variance the prior conditions on")
      ->capture_default_str();
  cmd_ps->add_option("-n,--draws", ps.n_draws, "Number of draws")->capture_default_str();
  const CLI::Option* ps_seed =
      cmd_ps->add_option("--seed", ps.seed, "RNG seed (generated when omitted)");
  cmd_ps->add_option("--out", ps.out, "Output CSV path")->required();

  MarglikArgs ml;
  CLI::App* cmd_ml = app.add_subcommand(
      "marglik", "Log marginal likelihood of one model on a CSV dataset");
  cmd_ml->add_option("--data", ml.data_path, "CSV file; first column is the response")
      ->required();
  ml.prior.attach(cmd_ml);
  cmd_ml->add_option("--model", ml.model,
                     "'full', 'null' or comma-separated 1-based covariate indices")
      ->capture_default_str();
  cmd_ml->add_option("--samples", ml.samples, "Monte Carlo samples for the penalty factor")
      ->capture_default_str();
  cmd_ml->add_flag("--local-only", ml.local_only,
                   "Evaluate the conjugate baseline without the penalty factor");
  cmd_ml->add_flag("--standardize", ml.standardize_data, "Standardize columns first");
  const CLI::Option* ml_seed =
      cmd_ml->add_option("--seed", ml.seed, "RNG seed (generated when omitted)");
  cmd_ml->add_option("--out", ml.out, "Report path (stdout when omitted)");

  SimulateArgs sim;
  CLI::App* cmd_sim =
      app.add_subcommand("simulate", "Generate an equicorrelated benchmark dataset");
  cmd_sim->add_option("--n", sim.n, "Observations")->capture_default_str();
  cmd_sim->add_option("--p", sim.p, "Covariates")->capture_default_str();
  cmd_sim->add_option("--rho", sim.rho, "Pairwise covariate correlation")
      ->capture_default_str();
  cmd_sim->add_option("--phi-star", sim.phi_star, "Residual variance")
      ->capture_default_str();
  cmd_sim->add_option("--replicate", sim.replicate, "Replicate index (stream selector)")
      ->capture_default_str();
  cmd_sim->add_option("--signal", sim.signal,
                      "'staircase' or comma-separated coefficients")
      ->capture_default_str();
  const CLI::Option* sim_seed =
      cmd_sim->add_option("--seed", sim.seed, "RNG seed (generated when omitted)");
  cmd_sim->add_option("--out", sim.out, "Output CSV path")->required();

  BenchmarkArgs bench;
  CLI::App* cmd_bench =
      app.add_subcommand("benchmark", "Replicated estimation studies (SSE, shrinkage)");
  cmd_bench->add_option("--study", bench.study, "'sse' or 'shrinkage'")
      ->check(CLI::IsMember({"sse", "shrinkage"}))
      ->capture_default_str();
  cmd_bench->add_option("--preset", bench.preset, "'sim-small' or 'sim-highdim'");
  cmd_bench->add_option("--n", bench.n, "Observations")->capture_default_str();
  cmd_bench->add_option("--p", bench.p, "Covariates")->capture_default_str();
  cmd_bench->add_option("--rho", bench.rho, "Pairwise covariate correlation")
      ->capture_default_str();
  cmd_bench->add_option("--phi-star", bench.phi_star, "Residual variance")
      ->capture_default_str();
  cmd_bench->add_option("--replicates", bench.replicates, "Replicates")
      ->capture_default_str();
  cmd_bench->add_option("--methods", bench.methods, "Comma-separated method list")
      ->capture_default_str();
  cmd_bench->add_option("--sweeps", bench.sweeps, "Model-search sweeps per fit")
      ->capture_default_str();
  cmd_bench->add_option("--marglik-samples", bench.marglik_samples,
                        "Monte Carlo samples per marginal likelihood")
      ->capture_default_str();
  cmd_bench->add_option("--draws", bench.draws, "Posterior draws per model")
      ->capture_default_str();
  cmd_bench->add_option("--chain-burn-in", bench.chain_burn_in, "Burn-in per chain")
      ->capture_default_str();
  cmd_bench->add_option("--top-k", bench.top_k, "Models averaged per fit")
      ->capture_default_str();
  cmd_bench->add_option("--family", bench.family, "Shrinkage study prior family")
      ->check(CLI::IsMember({"pmom", "pimom", "pemom"}))
      ->capture_default_str();
  cmd_bench->add_option("--n-grid", bench.n_grid, "Shrinkage study sample sizes")
      ->capture_default_str();
  cmd_bench->add_option("--batches", bench.batches, "Shrinkage study batches")
      ->capture_default_str();
  cmd_bench->add_option("--reps-per-batch", bench.reps_per_batch,
                        "Shrinkage study replicates per batch")
      ->capture_default_str();
  cmd_bench->add_option("--threads", bench.threads, "Worker threads")
      ->capture_default_str();
  const CLI::Option* bench_seed =
      cmd_bench->add_option("--seed", bench.seed, "RNG seed (generated when omitted)");
  cmd_bench->add_option("--out", bench.out, "JSON report path (stdout when omitted)");
  cmd_bench->add_option("--out-csv", bench.out_csv, "Per-replicate CSV path (sse study)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }

  try {
    if (cmd_fit->parsed()) return run_fit(fit, resolve_seed(fit_seed, fit.seed));
    if (cmd_ps->parsed()) return run_prior_sample(ps, resolve_seed(ps_seed, ps.seed));
    if (cmd_ml->parsed()) return run_marglik(ml, resolve_seed(ml_seed, ml.seed));
    if (cmd_sim->parsed()) return run_simulate(sim, resolve_seed(sim_seed, sim.seed));
    if (cmd_bench->parsed()) {
      apply_preset(bench, cmd_bench);
      return run_benchmark(bench, resolve_seed(bench_seed, bench.seed));
    }
  } catch (const CsvError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return kExitInput;
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::runtime_error& e) {
    const std::string msg = e.what();
    if (msg.find("cannot open") != std::string::npos) {
      std::cerr << "input error: " << msg << "\n";
      return kExitInput;
    }
    std::cerr << "numeric error: " << msg << "\n";
    return kExitNumeric;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitNumeric;
  }
  return kExitConfig;
}
