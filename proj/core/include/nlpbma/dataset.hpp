#pragma once

#include <Eigen/Dense>
#include <stdexcept>
#include <string>
#include <vector>

namespace nlpbma {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/* Regression data: response y (length n) and design X (n x p). */
struct Dataset {
  Vector y;
  Matrix X;
  std::vector<std::string> column_names;

  Dataset() = default;
  Dataset(Vector y_in, Matrix X_in) : y(std::move(y_in)), X(std::move(X_in)) {
    validate();
  }

  Eigen::Index n() const { return y.size(); }
  Eigen::Index p() const { return X.cols(); }

  void validate() const {
    if (X.rows() != y.size())
      throw std::invalid_argument("Dataset: X has " + std::to_string(X.rows()) +
                                  " rows but y has " + std::to_string(y.size()));
    if (y.size() == 0) throw std::invalid_argument("Dataset: empty response");
    if (!y.allFinite() || !X.allFinite())
      throw std::invalid_argument("Dataset: non-finite entries");
  }
};

/* Column means/scales used to standardize a dataset and to map standardized
 * coefficients back to the original scale. */
struct Standardization {
  double y_mean = 0.0;
  double y_scale = 1.0;
  Vector x_mean;
  Vector x_scale;

  /* theta on the standardized scale -> (intercept, slopes) on the raw scale */
  std::pair<double, Vector> to_original(const Vector& theta_std) const {
    Vector slopes(theta_std.size());
    for (Eigen::Index j = 0; j < theta_std.size(); ++j)
      slopes[j] = theta_std[j] * y_scale / x_scale[j];
    double intercept = y_mean;
    for (Eigen::Index j = 0; j < theta_std.size(); ++j)
      intercept -= slopes[j] * x_mean[j];
    return {intercept, slopes};
  }
};

/* Center and scale y and every column of X to mean zero, unit variance.
 * Constant columns keep scale 1 so the transform stays invertible. */
inline std::pair<Dataset, Standardization> standardize(const Dataset& data) {
  const auto n = data.n();
  const auto p = data.p();
  Standardization s;
  s.x_mean.resize(p);
  s.x_scale.resize(p);
  s.y_mean = data.y.mean();
  {
    const double var = (data.y.array() - s.y_mean).square().sum() / double(n > 1 ? n - 1 : 1);
    s.y_scale = var > 0.0 ? std::sqrt(var) : 1.0;
  }
  Dataset out;
  out.column_names = data.column_names;
  out.y = (data.y.array() - s.y_mean) / s.y_scale;
  out.X.resize(n, p);
  for (Eigen::Index j = 0; j < p; ++j) {
    s.x_mean[j] = data.X.col(j).mean();
    const double var =
        (data.X.col(j).array() - s.x_mean[j]).square().sum() / double(n > 1 ? n - 1 : 1);
    s.x_scale[j] = var > 0.0 ? std::sqrt(var) : 1.0;
    out.X.col(j) = (data.X.col(j).array() - s.x_mean[j]) / s.x_scale[j];
  }
  return {std::move(out), std::move(s)};
}

}  // namespace nlpbma
