#include "nlpbma/diagnostics.hpp"

#include <cmath>
#include <stdexcept>

namespace nlpbma {

double autocorrelation(const Vector& series, int lag) {
  const Eigen::Index n = series.size();
  if (lag < 1 || n <= lag)
    throw std::invalid_argument("autocorrelation: need more observations than lag");
  const double mean = series.mean();
  double denom = 0.0, num = 0.0;
  for (Eigen::Index t = 0; t < n; ++t) denom += (series[t] - mean) * (series[t] - mean);
  if (denom <= 0.0) return 0.0;
  for (Eigen::Index t = 0; t + lag < n; ++t)
    num += (series[t] - mean) * (series[t + lag] - mean);
  return num / denom;
}

double pearson_correlation(const Vector& a, const Vector& b) {
  if (a.size() != b.size() || a.size() < 2)
    throw std::invalid_argument("pearson_correlation: size mismatch");
  const double ma = a.mean(), mb = b.mean();
  double saa = 0.0, sbb = 0.0, sab = 0.0;
  for (Eigen::Index i = 0; i < a.size(); ++i) {
    saa += (a[i] - ma) * (a[i] - ma);
    sbb += (b[i] - mb) * (b[i] - mb);
    sab += (a[i] - ma) * (b[i] - mb);
  }
  if (saa <= 0.0 || sbb <= 0.0) return 0.0;
  return sab / std::sqrt(saa * sbb);
}

}  // namespace nlpbma
