#pragma once

#include <span>
#include <string>
#include <vector>

#include "pinfield/bounds.hpp"
#include "pinfield/sampler.hpp"
#include "pinfield/statistics.hpp"

namespace pinfield {

/// Linear size of the box [-L, L]^d: the distance 2(L + 1) between its Dirichlet exterior layers.
inline double linear_size(int L) { return 2.0 * (L + 1); }

struct ScanPoint {
  int L = 0;
  std::size_t sites = 0;
  double value = 0.0;       ///< normalized measurement
  double error = 0.0;       ///< standard error of `value`
  double comparison = 0.0;  ///< exactly computable reference curve
  double bound = 0.0;       ///< finite-volume lower bound implied by the constants
  std::string engine;
  bool slow_mixing = false;
};

struct ScalingScanResult {
  std::string kind;
  std::string normalization;
  std::vector<ScanPoint> points;
  bool has_fit = false;
  std::string fit_description;
  LinearFit fit;
  double limit_proxy = 0.0;

  bool positive = false;          ///< every measured value positive at 3 sigma
  bool above_bound = false;       ///< every measured value >= its bound within 3 sigma
  bool comparison_stable = false; ///< last two comparison values within 15%
};

struct ScanOptions {
  Engine engine = Engine::automatic;
  SamplerConfig sampler;
  std::size_t replicas = 20;
  std::uint64_t master_seed = 1;
  int threads = 1;
};

/// d = 2: E(sum_i eta_i mu(phi_i)) / (l^2 log l), l = 2(L+1), with the comparison curve
/// E(eta_0^2) sum_i G_ii / (2 l^2 log l) and the bound comparison - |Lambda| log((C_nG + eps)/c_G) / (l^2 log l).
/// Fit: comparison curve against 1 / log l; its intercept is the limit proxy.
ScalingScanResult scan_overlap_scaling_d2(std::span<const int> Ls, const Potential& pot, const DisorderModel& disorder,
                                          double epsilon, const BoundConstants& constants, const ScanOptions& options);

/// The exactly computable curve of scan_overlap_scaling_d2 only (no sampling).
ScalingScanResult overlap_lower_curve_d2(std::span<const int> Ls, double second_moment);

/// d >= 3: per-site E(overlap) / |Lambda|. `bound` is E(eta_0^2) G_inf(0,0) / 2 - log(B1 + B2 eps),
/// `comparison` the exact eps = 0 per-site value E(eta_0^2) (1/|Lambda|) sum_i G_ii.
ScalingScanResult scan_overlap_dgeq3(int d, std::span<const int> Ls, const Potential& pot,
                                     const DisorderModel& disorder, double epsilon, const BoundConstants& constants,
                                     const ScanOptions& options);

/// Constant field eta = h: sum_i mu(phi_i) / l^{d+2}. The comparison curve is the eps = 0
/// Gaussian value h sum_ij G_ij / l^{d+2}; the fit is log(h sum_ij G_ij) against log l.
ScalingScanResult scan_constant_field(int d, std::span<const int> Ls, const Potential& pot, double h, double epsilon,
                                      const ScanOptions& options);

}  // namespace pinfield
