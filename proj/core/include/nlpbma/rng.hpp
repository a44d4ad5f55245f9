#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <stdexcept>

namespace nlpbma {

/* Deterministic random source. All variate generation is written out
 * explicitly (inverse-cdf normal, Marsaglia-Tsang gamma) so that a given
 * seed produces the same stream on every platform; std::normal_distribution
 * and friends are implementation-defined and would break byte-level
 * reproducibility of reports. */
class Rng {
public:
  explicit Rng(std::uint64_t seed) : engine_(seed), seed_(seed) {}

  std::uint64_t seed() const { return seed_; }

  std::uint64_t next_u64() { return engine_(); }

  /* Uniform on [0,1) with 53-bit resolution. */
  double uniform() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  /* Uniform on the open interval (0,1); never returns 0. */
  double uniform_open() {
    double u;
    do {
      u = uniform();
    } while (u <= 0.0);
    return u;
  }

  double uniform(double a, double b) { return a + (b - a) * uniform(); }

  double normal() { return normal_quantile(uniform_open()); }

  double normal(double mean, double sd) { return mean + sd * normal(); }

  /* Gamma(shape, scale) via Marsaglia-Tsang squeeze; shape < 1 handled by
   * the standard u^{1/shape} boost. */
  double gamma(double shape, double scale) {
    if (!(shape > 0.0) || !(scale > 0.0))
      throw std::invalid_argument("Rng::gamma: shape and scale must be positive");
    if (shape < 1.0) {
      const double u = uniform_open();
      return gamma(shape + 1.0, scale) * std::pow(u, 1.0 / shape);
    }
    const double d = shape - 1.0 / 3.0;
    const double c = 1.0 / std::sqrt(9.0 * d);
    for (;;) {
      double x, v;
      do {
        x = normal();
        v = 1.0 + c * x;
      } while (v <= 0.0);
      v = v * v * v;
      const double u = uniform_open();
      if (u < 1.0 - 0.0331 * x * x * x * x) return d * v * scale;
      if (std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) return d * v * scale;
    }
  }

  /* Inverse gamma with density ~ x^{-shape-1} exp(-rate/x). */
  double inverse_gamma(double shape, double rate) {
    return rate / gamma(shape, 1.0);
  }

  double chi_squared(double dof) { return gamma(0.5 * dof, 2.0); }

  double exponential(double rate) { return -std::log(uniform_open()) / rate; }

  double cauchy(double location, double scale) {
    return location + scale * std::tan(M_PI * (uniform_open() - 0.5));
  }

  /* Derive an independent stream for a worker task; splitmix64 mixing keeps
   * nearby indexes uncorrelated. */
  static std::uint64_t derive_seed(std::uint64_t base, std::uint64_t index) {
    std::uint64_t z = base + 0x9e3779b97f4a7c15ULL * (index + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  /* Acklam/Wichura style rational approximation refined by one Halley step;
   * accurate to ~1e-15 over (0,1), monotone, and dependency-free. */
  static double normal_quantile(double p);

private:
  std::mt19937_64 engine_;
  std::uint64_t seed_;
};

double normal_cdf(double x);
double normal_cdf_complement(double x);
double log_normal_cdf(double x);

}
