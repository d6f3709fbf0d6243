#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace pinfield {

struct LinearFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r2 = 0.0;
};

/// Ordinary least squares y = intercept + slope * x; needs at least two points.
LinearFit fit_line(std::span<const double> x, std::span<const double> y);

/// Mean with a standard error.
struct Estimate {
  double mean = 0.0;
  double error = 0.0;
  std::size_t samples = 0;  ///< batches for batch means, replicas for replica averages
};

/// Splits the series into `batches` contiguous batches of equal length (a trailing
/// remainder is dropped) and returns the grand mean with the batch-means error.
Estimate batch_means(std::span<const double> series, std::size_t batches);

/// Mean and standard error of independent samples.
Estimate sample_mean(std::span<const double> samples);

}  // namespace pinfield
