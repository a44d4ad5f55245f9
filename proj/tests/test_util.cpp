#include "nlpbma/dataset.hpp"
#include "nlpbma/diagnostics.hpp"
#include "nlpbma/model_indicator.hpp"
#include "nlpbma/quadrature.hpp"
#include "nlpbma/rng.hpp"

#include "oracles.hpp"

#include <doctest.h>

#include <cmath>
#include <set>

using namespace nlpbma;

TEST_SUITE("util") {

TEST_CASE("normal quantile inverts the cdf across the support") {
  const double ps[] = {1e-300, 1e-100, 1e-12, 1e-6, 0.01, 0.3, 0.5, 0.7, 0.99,
                       1.0 - 1e-6, 1.0 - 1e-12};
  double prev = -1e400;
  for (double p : ps) {
    const double x = Rng::normal_quantile(p);
    CHECK(x > prev);
    prev = x;
    if (p >= 1e-300) {
      const double back = (x < 0) ? normal_cdf(x) : 1.0 - normal_cdf_complement(x);
      if (p > 1e-12 && p < 1.0 - 1e-12) {
        CHECK(back == doctest::Approx(p).epsilon(1e-10));
      } else {
        CHECK(std::log(back) == doctest::Approx(std::log(p)).epsilon(1e-6));
      }
    }
  }
  CHECK(Rng::normal_quantile(0.5) == doctest::Approx(0.0).epsilon(1e-14));
}

TEST_CASE("normal cdf symmetry and log tail") {
  CHECK(normal_cdf(0.0) == doctest::Approx(0.5));
  CHECK(normal_cdf(1.0) + normal_cdf(-1.0) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(normal_cdf_complement(2.0) == doctest::Approx(normal_cdf(-2.0)).epsilon(1e-14));
  // Deep tail stays finite and tracks the Mills-ratio expansion.
  const double lx = log_normal_cdf(-40.0);
  CHECK(std::isfinite(lx));
  const double mills = -0.5 * 40.0 * 40.0 - std::log(40.0) - 0.5 * std::log(2.0 * M_PI);
  CHECK(lx == doctest::Approx(mills).epsilon(1e-3));
  CHECK(log_normal_cdf(-2.0) == doctest::Approx(std::log(normal_cdf(-2.0))).epsilon(1e-12));
}

TEST_CASE("rng streams are deterministic and derive_seed separates streams") {
  Rng a(42), b(42), c(43);
  bool all_equal = true;
  bool any_diff = false;
  for (int i = 0; i < 100; ++i) {
    const double ua = a.uniform();
    all_equal = all_equal && (ua == b.uniform());
    any_diff = any_diff || (ua != c.uniform());
  }
  CHECK(all_equal);
  CHECK(any_diff);
  std::set<std::uint64_t> seeds;
  for (std::uint64_t i = 0; i < 64; ++i) seeds.insert(Rng::derive_seed(7, i));
  CHECK(seeds.size() == 64);
}

TEST_CASE("gamma and inverse gamma moments match theory") {
  Rng rng(2024);
  const int m = 200000;
  double s = 0.0, s2 = 0.0;
  for (int i = 0; i < m; ++i) {
    const double g = rng.gamma(3.5, 2.0);
    s += g;
    s2 += g * g;
  }
  const double mean = s / m;
  const double var = s2 / m - mean * mean;
  CHECK(mean == doctest::Approx(7.0).epsilon(0.01));
  CHECK(var == doctest::Approx(14.0).epsilon(0.05));

  double si = 0.0;
  for (int i = 0; i < m; ++i) si += rng.inverse_gamma(4.0, 6.0);
  CHECK(si / m == doctest::Approx(2.0).epsilon(0.01));  // b/(a-1)

  double sl = 0.0, sl2 = 0.0;
  for (int i = 0; i < m; ++i) {
    const double g = rng.gamma(0.4, 1.0);  // boosted small-shape path
    sl += g;
    sl2 += g * g;
  }
  CHECK(sl / m == doctest::Approx(0.4).epsilon(0.02));
  CHECK(sl2 / m - (sl / m) * (sl / m) == doctest::Approx(0.4).epsilon(0.05));
}

TEST_CASE("uniform and normal draws look like their distributions") {
  Rng rng(99);
  const int m = 100000;
  double su = 0.0, sn = 0.0, sn2 = 0.0;
  for (int i = 0; i < m; ++i) {
    const double u = rng.uniform();
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
    su += u;
    const double z = rng.normal();
    sn += z;
    sn2 += z * z;
  }
  CHECK(su / m == doctest::Approx(0.5).epsilon(0.01));
  CHECK(std::abs(sn / m) < 0.02);
  CHECK(sn2 / m == doctest::Approx(1.0).epsilon(0.02));
}

TEST_CASE("quadrature wrappers hit known integrals") {
  auto sq = [](double x) { return x * x; };
  CHECK(integrate_finite(sq, 0.0, 1.0).value == doctest::Approx(1.0 / 3.0).epsilon(1e-10));
  auto ex = [](double x) { return std::exp(-x); };
  CHECK(integrate_upper(ex, 0.0).value == doctest::Approx(1.0).epsilon(1e-10));
  auto gauss = [](double x) { return std::exp(-0.5 * x * x) / std::sqrt(2.0 * M_PI); };
  CHECK(integrate_symmetric_real_line(gauss).value == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("test-side simpson oracle agrees with closed forms") {
  auto gauss = [](double x) { return std::exp(-0.5 * x * x) / std::sqrt(2.0 * M_PI); };
  CHECK(oracle::integrate_even_real_line(gauss, 1.0) == doctest::Approx(1.0).epsilon(1e-9));
  auto cube = [](double x) { return x * x * x; };
  CHECK(oracle::adaptive_simpson(cube, 0.0, 2.0) == doctest::Approx(4.0).epsilon(1e-10));
}

TEST_CASE("model indicator bit operations and hex round trip") {
  ModelIndicator m(130);
  CHECK(m.count() == 0);
  m.set(0, true);
  m.set(64, true);
  m.set(129, true);
  CHECK(m.count() == 3);
  CHECK(m.test(64));
  CHECK_FALSE(m.test(63));
  const auto idx = m.indices();
  REQUIRE(idx.size() == 3);
  CHECK(idx[0] == 0);
  CHECK(idx[1] == 64);
  CHECK(idx[2] == 129);
  const std::string hex = m.to_hex();
  ModelIndicator back = ModelIndicator::from_hex(130, hex);
  CHECK(back == m);
  m.set(64, false);
  CHECK(m.count() == 2);
  CHECK(ModelIndicator::from_hex(130, m.to_hex()) == m);
  CHECK_THROWS_AS(m.set(130, true), std::out_of_range);
  CHECK_THROWS_AS((void)m.test(200), std::out_of_range);
  // hex value exceeding the declared dimension is rejected
  ModelIndicator wide(10);
  wide.set(9, true);
  CHECK_THROWS_AS(ModelIndicator::from_hex(5, wide.to_hex()), std::invalid_argument);
}

TEST_CASE("model indicator ordering is total and hash spreads") {
  ModelIndicator a(8), b(8);
  a.set(1, true);
  b.set(2, true);
  CHECK(a != b);
  CHECK((a < b || b < a));
  std::set<std::size_t> hashes;
  ModelIndicatorHash h;
  for (int i = 0; i < 8; ++i) {
    ModelIndicator m(8);
    m.set(i, true);
    hashes.insert(h(m));
  }
  CHECK(hashes.size() >= 7);
}

TEST_CASE("standardize centers, scales, and inverts exactly") {
  Rng rng(5);
  const int n = 40, p = 3;
  Dataset d;
  d.X.resize(n, p);
  d.y.resize(n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < p; ++j) d.X(i, j) = 2.0 + 3.0 * rng.normal();
    d.y[i] = -1.0 + 0.5 * rng.normal();
  }
  auto [std_data, info] = standardize(d);
  for (int j = 0; j < p; ++j) {
    CHECK(std_data.X.col(j).mean() == doctest::Approx(0.0).scale(1.0).epsilon(1e-12));
    const double v = std_data.X.col(j).squaredNorm() / (n - 1);
    CHECK(v == doctest::Approx(1.0).epsilon(1e-12));
  }
  CHECK(std_data.y.mean() == doctest::Approx(0.0).scale(1.0).epsilon(1e-12));

  // Back-transformed coefficients reproduce predictions on the raw scale.
  Vector theta_std(p);
  theta_std << 0.7, -0.2, 1.1;
  auto [intercept, slopes] = info.to_original(theta_std);
  Vector pred_raw = (d.X * slopes).array() + intercept;
  Vector pred_std = std_data.X * theta_std;
  Vector pred_back = pred_std.array() * info.y_scale + info.y_mean;
  CHECK((pred_raw - pred_back).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("dataset validation rejects malformed inputs") {
  Dataset d;
  d.X = Matrix::Zero(4, 2);
  d.y = Vector::Zero(3);
  CHECK_THROWS_AS(d.validate(), std::invalid_argument);
  d.y = Vector::Zero(4);
  d.X(1, 1) = std::numeric_limits<double>::quiet_NaN();
  CHECK_THROWS_AS(d.validate(), std::invalid_argument);
}

TEST_CASE("autocorrelation tracks an AR(1) process") {
  Rng rng(31);
  const int n = 60000;
  const double rho = 0.6;
  Vector x(n);
  x[0] = 0.0;
  for (int i = 1; i < n; ++i) x[i] = rho * x[i - 1] + rng.normal();
  CHECK(autocorrelation(x, 1) == doctest::Approx(rho).epsilon(0.03));
  Vector iid(n);
  for (int i = 0; i < n; ++i) iid[i] = rng.normal();
  CHECK(std::abs(autocorrelation(iid, 1)) < 0.02);
  Vector flat = Vector::Constant(100, 3.0);
  CHECK(autocorrelation(flat, 1) == 0.0);
}

TEST_CASE("pearson correlation endpoints") {
  Vector a(5), b(5);
  a << 1, 2, 3, 4, 5;
  b = 2.0 * a.array() - 3.0;
  CHECK(pearson_correlation(a, b) == doctest::Approx(1.0).epsilon(1e-12));
  b = -b;
  CHECK(pearson_correlation(a, b) == doctest::Approx(-1.0).epsilon(1e-12));
  Vector flat = Vector::Constant(5, 1.0);
  CHECK(pearson_correlation(a, flat) == 0.0);
}

}  // TEST_SUITE
