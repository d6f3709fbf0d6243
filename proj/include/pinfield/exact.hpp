#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "pinfield/lattice.hpp"
#include "pinfield/model.hpp"

namespace pinfield {

/// Largest volume handled by exhaustive enumeration of the 2^|Lambda| pinned subsets.
inline constexpr std::size_t kMaxExactSites = 22;

class VolumeTooLarge : public InvalidArgument {
 public:
  using InvalidArgument::InvalidArgument;
};

/// Exact quenched observables of the Gaussian model with delta-pinning.
struct ExactSolution {
  double log_z = 0.0;
  std::vector<double> pin_probability;  ///< mu(phi_i = 0)
  std::vector<double> mean;             ///< mu(phi_i)
  std::vector<double> second_moment;    ///< mu(phi_i^2)
  double overlap = 0.0;                 ///< sum_i eta_i mu(phi_i)
  double pinned_fraction = 0.0;

  double variance(std::size_t i) const { return second_moment[i] - mean[i] * mean[i]; }
  double variance_sum() const;
};

/// Pinned-subset expansion
///   Z = sum_{A subset Lambda} eps^|A| Z^Gauss_{Lambda \ A}[eta]
/// with every observable accumulated in log-scaled form. The result does not
/// depend on `threads`: subsets are processed in fixed chunks merged in order.
ExactSolution exact_mixed_solution(const Volume& vol, const FieldConfig& eta, double epsilon,
                                   double curvature = 1.0, int threads = 1);

/// Batched form over several fields and pinning strengths sharing one pass over
/// the subsets. Entry [f * epsilons.size() + e] belongs to (etas[f], epsilons[e]).
std::vector<ExactSolution> exact_mixed_grid(const Volume& vol, std::span<const FieldConfig> etas,
                                            std::span<const double> epsilons, double curvature = 1.0,
                                            int threads = 1);

/// log(eps^|A| Z^Gauss_{Lambda\A}[eta]) for every subset A, indexed by bitmask
/// (bit i set means site i is pinned). Unnormalized; -inf where eps = 0 and A is nonempty.
std::vector<double> subset_log_weights(const Volume& vol, const FieldConfig& eta, double epsilon,
                                       double curvature = 1.0);

/// Both sides of the curvature rescaling
///   log Z^{c}_{eps}[eta] = -(|Lambda|/2) log c + log Z^{1}_{eps sqrt(c)}[eta / sqrt(c)].
struct ScalingIdentityReport {
  double direct_log_z = 0.0;
  double rescaled_log_z = 0.0;
  double discrepancy = 0.0;  ///< |direct - rescaled| / max(1, |direct|)
};

ScalingIdentityReport scaling_identity_check(const Volume& vol, const FieldConfig& eta, double epsilon,
                                             double curvature);

}  // namespace pinfield
