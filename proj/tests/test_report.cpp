#include "nlpbma/report.hpp"

#include "nlpbma/version.hpp"

#include <doctest.h>
#include <json.hpp>

#include <limits>

using namespace nlpbma;
using nlohmann::json;

namespace {

SimStudyResult tiny_result() {
  SimStudyResult r;
  r.config.design.n = 10;
  r.config.design.p = 4;
  r.config.design.rho = 0.25;
  r.config.design.seed = 99;
  r.config.replicates = 2;
  r.config.fit.sweeps = 50;
  r.rows = {{0, FitMethod::Pmom, 1.25, 0.25, 1.0, 0.0},
            {0, FitMethod::Ridge, 3.5, 1.5, 2.0, 0.0},
            {1, FitMethod::Pmom, 0.75, 0.25, 0.5, 0.0},
            {1, FitMethod::Ridge, 2.5, 0.5, 2.0, 0.0}};
  MethodSummary a;
  a.method = FitMethod::Pmom;
  a.mean_sse = 1.0;
  a.se_sse = 0.25;
  MethodSummary b;
  b.method = FitMethod::Ridge;
  b.mean_sse = 3.0;
  b.se_sse = std::numeric_limits<double>::quiet_NaN();
  r.summary = {a, b};
  return r;
}

}  // namespace

TEST_SUITE("report") {

TEST_CASE("simulation study JSON carries config and per method summaries") {
  auto r = tiny_result();
  const auto text = to_json(r);
  auto j = json::parse(text);
  CHECK(j["design"]["n"] == 10);
  CHECK(j["design"]["rho"] == 0.25);
  CHECK(j["replicates"] == 2);
  CHECK(j["sweeps"] == 50);
  REQUIRE(j["summary"].size() == 2);
  CHECK(j["summary"][0]["method"] == "pmom");
  CHECK(j["summary"][0]["mean_sse"] == 1.0);
  CHECK(j["summary"][1]["method"] == "ridge");
  CHECK(j["summary"][1]["se_sse"].is_null());
  CHECK(to_json(r) == text);
}

TEST_CASE("sse rows render as a stable CSV") {
  auto r = tiny_result();
  const auto csv = sse_rows_csv(r);
  CHECK(csv ==
        "replicate,method,sse,sse_zero,sse_nonzero\n"
        "0,pmom,1.25,0.25,1\n"
        "0,ridge,3.5,1.5,2\n"
        "1,pmom,0.75,0.25,0.5\n"
        "1,ridge,2.5,0.5,2\n");
}

TEST_CASE("shrinkage report JSON") {
  ShrinkageReport rep;
  rep.family = PriorFamily::PIMOM;
  rep.median_slope = -1.7;
  rep.median_slope_lp = -1.0;
  rep.batches_steeper_than_lp = 9;
  ShrinkageBatch batch;
  batch.abs_spurious = {0.1, 0.05};
  batch.abs_spurious_lp = {0.2, 0.14};
  batch.slope = -1.6;
  batch.slope_lp = -0.9;
  rep.batches = {batch};
  auto j = json::parse(to_json(rep));
  CHECK(j["family"] == "pimom");
  CHECK(j["median_slope"] == -1.7);
  CHECK(j["batches_steeper_than_lp"] == 9);
  REQUIRE(j["batches"].size() == 1);
  CHECK(j["batches"][0]["slope"] == -1.6);
  CHECK(j["batches"][0]["censored"] == false);
  CHECK(j["batches"][0]["abs_spurious"][1] == 0.05);
}

TEST_CASE("manifest records command, seed, version and config") {
  const auto text = manifest_json("fit", {{"family", "pmom"}, {"tau", "0.358"}}, 77);
  auto j = json::parse(text);
  CHECK(j["command"] == "fit");
  CHECK(j["seed"] == 77);
  CHECK(j["version"] == version_string);
  CHECK(j["config"]["family"] == "pmom");
  CHECK(j["config"]["tau"] == "0.358");
  CHECK(manifest_json("fit", {{"family", "pmom"}, {"tau", "0.358"}}, 77) == text);
  CHECK(manifest_json("fit", {{"family", "pmom"}, {"tau", "0.358"}}, 78) != text);
}

}  // TEST_SUITE
