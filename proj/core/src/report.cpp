#include "nlpbma/report.hpp"

#include "nlpbma/io.hpp"
#include "nlpbma/version.hpp"

#include <json.hpp>

#include <cmath>

namespace nlpbma {

namespace {

using nlohmann::json;

json finite_or_null(double x) {
  if (std::isfinite(x)) return x;
  return nullptr;
}

}  // namespace

std::string to_json(const SimStudyResult& result) {
  json j;
  j["design"] = {{"n", result.config.design.n},
                 {"p", result.config.design.p},
                 {"rho", result.config.design.rho},
                 {"phi_star", result.config.design.phi_star},
                 {"seed", result.config.design.seed}};
  j["replicates"] = result.config.replicates;
  j["sweeps"] = result.config.fit.sweeps;
  json summary = json::array();
  for (const auto& s : result.summary) {
    summary.push_back({{"method", method_name(s.method)},
                       {"mean_sse", finite_or_null(s.mean_sse)},
                       {"se_sse", finite_or_null(s.se_sse)},
                       {"mean_sse_zero", finite_or_null(s.mean_sse_zero)},
                       {"se_sse_zero", finite_or_null(s.se_sse_zero)},
                       {"mean_sse_nonzero", finite_or_null(s.mean_sse_nonzero)},
                       {"se_sse_nonzero", finite_or_null(s.se_sse_nonzero)}});
  }
  j["summary"] = summary;
  return j.dump(2);
}

std::string to_json(const ShrinkageReport& report) {
  json j;
  j["family"] = family_name(report.family);
  j["median_slope"] = finite_or_null(report.median_slope);
  j["median_slope_lp"] = finite_or_null(report.median_slope_lp);
  j["batches_steeper_than_lp"] = report.batches_steeper_than_lp;
  json batches = json::array();
  for (const auto& b : report.batches) {
    json bj;
    bj["abs_spurious"] = b.abs_spurious;
    bj["abs_spurious_lp"] = b.abs_spurious_lp;
    bj["slope"] = finite_or_null(b.slope);
    bj["slope_lp"] = finite_or_null(b.slope_lp);
    bj["censored"] = b.censored;
    batches.push_back(bj);
  }
  j["batches"] = batches;
  return j.dump(2);
}

/* Wall-clock timings are deliberately left out: the CSV must be
 * byte-identical across reruns of the same configuration. */
std::string sse_rows_csv(const SimStudyResult& result) {
  std::string out = "replicate,method,sse,sse_zero,sse_nonzero\n";
  for (const auto& row : result.rows) {
    out += std::to_string(row.replicate);
    out.push_back(',');
    out += method_name(row.method);
    out.push_back(',');
    out += format_double(row.sse);
    out.push_back(',');
    out += format_double(row.sse_zero);
    out.push_back(',');
    out += format_double(row.sse_nonzero);
    out.push_back('\n');
  }
  return out;
}

std::string manifest_json(const std::string& command,
                          const std::vector<std::pair<std::string, std::string>>& config,
                          std::uint64_t seed) {
  json j;
  j["command"] = command;
  j["seed"] = seed;
  j["version"] = version_string;
  json c = json::object();
  for (const auto& [k, v] : config) c[k] = v;
  j["config"] = c;
  return j.dump(2);
}

}  // namespace nlpbma
