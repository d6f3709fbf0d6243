#include "pinfield/statistics.hpp"

#include <cmath>

#include "pinfield/lattice.hpp"

namespace pinfield {

LinearFit fit_line(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2) throw InvalidArgument("fit_line: need at least two (x, y) pairs");
  const auto n = static_cast<double>(x.size());
  double mx = 0.0;
  double my = 0.0;
  for (std::size_t k = 0; k < x.size(); ++k) {
    mx += x[k];
    my += y[k];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0;
  double sxy = 0.0;
  double syy = 0.0;
  for (std::size_t k = 0; k < x.size(); ++k) {
    sxx += (x[k] - mx) * (x[k] - mx);
    sxy += (x[k] - mx) * (y[k] - my);
    syy += (y[k] - my) * (y[k] - my);
  }
  if (sxx == 0.0) throw InvalidArgument("fit_line: x values are all equal");
  LinearFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  fit.r2 = syy > 0.0 ? (sxy * sxy) / (sxx * syy) : 1.0;
  return fit;
}

Estimate sample_mean(std::span<const double> samples) {
  Estimate est;
  est.samples = samples.size();
  if (samples.empty()) return est;
  double sum = 0.0;
  for (double v : samples) sum += v;
  est.mean = sum / static_cast<double>(samples.size());
  if (samples.size() > 1) {
    double ss = 0.0;
    for (double v : samples) ss += (v - est.mean) * (v - est.mean);
    const double var = ss / static_cast<double>(samples.size() - 1);
    est.error = std::sqrt(var / static_cast<double>(samples.size()));
  }
  return est;
}

Estimate batch_means(std::span<const double> series, std::size_t batches) {
  if (batches < 2) throw InvalidArgument("batch_means: need at least two batches");
  const std::size_t length = series.size() / batches;
  if (length == 0) throw InvalidArgument("batch_means: fewer samples than batches");
  std::vector<double> averages(batches, 0.0);
  for (std::size_t b = 0; b < batches; ++b) {
    double s = 0.0;
    for (std::size_t k = 0; k < length; ++k) s += series[b * length + k];
    averages[b] = s / static_cast<double>(length);
  }
  return sample_mean(averages);
}

}  // namespace pinfield
