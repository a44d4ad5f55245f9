#include "nlpbma/penalty_inverse.hpp"
#include "nlpbma/priors.hpp"
#include "nlpbma/rng.hpp"

#include "oracles.hpp"

#include <doctest.h>

#include <cmath>

using namespace nlpbma;

namespace {

double pmom_below(double t, double tau) {
  // P(|theta| < t) = (2 Phi(a) - 1) - 2 a phi(a) with a = t / sqrt(tau)
  const double a = t / std::sqrt(tau);
  const double dens = std::exp(-0.5 * a * a) / std::sqrt(2.0 * M_PI);
  return (2.0 * normal_cdf(a) - 1.0) - 2.0 * a * dens;
}

double pimom_below(double t, double tau, double phi) {
  return std::erfc(std::sqrt(tau * phi) / t);
}

double simpson_mass(const PriorSpec& spec, double phi) {
  auto f = [&](double th) {
    const double lp = univariate_log_density(spec, th, phi);
    return lp < -700.0 ? 0.0 : std::exp(lp);
  };
  const double scale = std::sqrt(spec.tau * phi) + std::sqrt(spec.tau_n * phi);
  return oracle::integrate_even_real_line(f, scale, 1e-11);
}

}  // namespace

TEST_SUITE("priors") {

TEST_CASE("family names round trip and defaults carry the documented scales") {
  CHECK(family_from_name("pmom") == PriorFamily::PMOM);
  CHECK(family_from_name("piMOM") == PriorFamily::PIMOM);
  CHECK(family_from_name("pemom") == PriorFamily::PEMOM);
  CHECK_THROWS_AS(family_from_name("cauchy"), std::invalid_argument);
  CHECK(family_name(PriorFamily::PIMOM) == "pimom");

  CHECK(default_tau(PriorFamily::PMOM) == doctest::Approx(0.358));
  CHECK(default_tau(PriorFamily::PIMOM) == doctest::Approx(0.133));
  CHECK(default_tau(PriorFamily::PEMOM) == doctest::Approx(0.119));
  for (auto fam : {PriorFamily::PMOM, PriorFamily::PIMOM, PriorFamily::PEMOM}) {
    const auto spec = PriorSpec::defaults(fam);
    CHECK(spec.tau == doctest::Approx(default_tau(fam)));
    CHECK(spec.tau_n == doctest::Approx(2.0 * spec.tau));
    CHECK(spec.r == 1);
    CHECK(spec.a_phi == doctest::Approx(0.01));
    CHECK(spec.b_phi == doctest::Approx(0.01));
    CHECK_NOTHROW(spec.validate());
  }
}

TEST_CASE("spec validation rejects inconsistent hyperparameters") {
  PriorSpec s = PriorSpec::defaults(PriorFamily::PMOM);
  s.tau = 0.0;
  CHECK_THROWS_AS(s.validate(), std::invalid_argument);
  s = PriorSpec::defaults(PriorFamily::PMOM);
  s.r = 0;
  CHECK_THROWS_AS(s.validate(), std::invalid_argument);
  s = PriorSpec::defaults(PriorFamily::PEMOM);
  s.a_phi = -1.0;
  CHECK_THROWS_AS(s.validate(), std::invalid_argument);
  s = PriorSpec::defaults(PriorFamily::PIMOM);
  s.tau_n = 2.5 * s.tau;  // breaks monotone invertibility of the penalty
  CHECK_THROWS_AS(s.validate(), std::invalid_argument);
  s.tau_n = 1.5 * s.tau;
  CHECK_NOTHROW(s.validate());
}

TEST_CASE("every family integrates to unit mass") {
  for (auto fam : {PriorFamily::PMOM, PriorFamily::PIMOM, PriorFamily::PEMOM}) {
    auto spec = PriorSpec::defaults(fam);
    for (double phi : {0.5, 1.0, 2.7}) {
      const double lib = univariate_mass(spec, phi);
      const double ind = simpson_mass(spec, phi);
      CHECK(std::abs(lib - 1.0) <= 1e-6);
      CHECK(std::abs(ind - 1.0) <= 1e-6);
    }
  }
  // Second-order product moment prior is normalized too.
  PriorSpec r2 = PriorSpec::defaults(PriorFamily::PMOM);
  r2.r = 2;
  CHECK(std::abs(univariate_mass(r2, 1.3) - 1.0) <= 1e-6);
}

TEST_CASE("default scales put one percent of mass below 0.2") {
  for (auto fam : {PriorFamily::PMOM, PriorFamily::PIMOM, PriorFamily::PEMOM}) {
    const auto spec = PriorSpec::defaults(fam);
    const double p = prob_below_threshold(spec, 0.2, 1.0);
    CHECK(p > 0.01 - 0.002);
    CHECK(p < 0.01 + 0.002);
  }
}

TEST_CASE("quadrature tail probabilities match closed forms") {
  const auto pm = PriorSpec::defaults(PriorFamily::PMOM);
  for (double t : {0.1, 0.2, 0.5, 1.0}) {
    CHECK(prob_below_threshold(pm, t, 1.0) ==
          doctest::Approx(pmom_below(t, pm.tau)).epsilon(1e-8));
  }
  const auto pi = PriorSpec::defaults(PriorFamily::PIMOM);
  for (double t : {0.1, 0.2, 0.5, 1.0}) {
    for (double phi : {0.5, 1.0}) {
      CHECK(prob_below_threshold(pi, t, phi) ==
            doctest::Approx(pimom_below(t, pi.tau, phi)).epsilon(1e-8));
    }
  }
}

TEST_CASE("pmom second moment is 3 tau phi at r = 1") {
  const auto spec = PriorSpec::defaults(PriorFamily::PMOM);
  for (double phi : {1.0, 2.0}) {
    auto f = [&](double th) {
      const double lp = univariate_log_density(spec, th, phi);
      return lp < -700.0 ? 0.0 : th * th * std::exp(lp);
    };
    const double m2 = oracle::integrate_even_real_line(f, std::sqrt(spec.tau * phi), 1e-11);
    CHECK(m2 == doctest::Approx(3.0 * spec.tau * phi).epsilon(1e-8));
  }
}

TEST_CASE("density factors as penalty times gaussian kernel") {
  Rng rng(17);
  for (auto fam : {PriorFamily::PMOM, PriorFamily::PIMOM, PriorFamily::PEMOM}) {
    const auto spec = PriorSpec::defaults(fam);
    for (int i = 0; i < 200; ++i) {
      const double th = (rng.uniform() - 0.5) * 8.0;
      if (std::abs(th) < 1e-4) continue;
      const double phi = 0.2 + 3.0 * rng.uniform();
      const double v = (fam == PriorFamily::PIMOM ? spec.tau_n : spec.tau) * phi;
      const double lhs = univariate_log_density(spec, th, phi);
      const double rhs = log_penalty_d(spec, th, phi) + log_normal_pdf0(th, v);
      CHECK(lhs == doctest::Approx(rhs).epsilon(1e-10));
    }
  }
}

TEST_CASE("vector density is the sum of coordinates") {
  const auto spec = PriorSpec::defaults(PriorFamily::PEMOM);
  Vector th(3);
  th << 0.4, -1.2, 2.0;
  double expect = 0.0;
  for (int i = 0; i < 3; ++i) expect += univariate_log_density(spec, th[i], 1.7);
  CHECK(log_density(spec, th, 1.7) == doctest::Approx(expect).epsilon(1e-14));
}

TEST_CASE("zero coefficients carry zero prior density") {
  for (auto fam : {PriorFamily::PMOM, PriorFamily::PIMOM, PriorFamily::PEMOM}) {
    const auto spec = PriorSpec::defaults(fam);
    CHECK(univariate_log_density(spec, 0.0, 1.0) == -std::numeric_limits<double>::infinity());
    CHECK(penalty_d(spec, 0.0, 1.0) == 0.0);
    CHECK_THROWS_AS(univariate_log_density(spec, std::nan(""), 1.0), std::invalid_argument);
    CHECK_THROWS_AS(univariate_log_density(spec, 1.0, 0.0), std::invalid_argument);
  }
}

TEST_CASE("pimom penalty ties out against the inversion curve") {
  const auto spec = PriorSpec::defaults(PriorFamily::PIMOM);
  for (double phi : {0.6, 1.0, 2.4}) {
    const ImomPenaltyCurve curve{spec.tau, spec.tau_n, phi};
    for (double th : {0.05, 0.3, 1.0, 3.0, -0.7}) {
      const double lhs = g_of_z(curve, th * th);
      const double rhs = log_penalty_d(spec, th, phi);
      CHECK(lhs == doctest::Approx(rhs).epsilon(1e-10));
    }
  }
}

}  // TEST_SUITE
