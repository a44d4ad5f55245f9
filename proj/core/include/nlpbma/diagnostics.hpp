#pragma once

#include "nlpbma/dataset.hpp"

namespace nlpbma {

/* Lag-k sample autocorrelation; 0 for degenerate (constant) series. */
double autocorrelation(const Vector& series, int lag = 1);

/* Pearson correlation; 0 when either argument is constant. */
double pearson_correlation(const Vector& a, const Vector& b);

}  // namespace nlpbma
