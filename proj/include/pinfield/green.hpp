#pragma once

#include <span>
#include <vector>

#include "pinfield/statistics.hpp"

namespace pinfield {

// Spectral identities for the Dirichlet box [-L, L]^d: the precision matrix is
// diagonalized by products of sine modes with eigenvalues
//   lambda_k = (c / 2d) sum_a (1 - cos(k_a pi / (2L + 2))),  k_a = 1 .. 2L+1.

/// log det A on the box.
double box_log_det(int d, int L, double curvature = 1.0);
/// trace A^{-1} = sum_i G_ii on the box.
double box_green_trace(int d, int L, double curvature = 1.0);

/// G_{Z^d}(0,0) at unit curvature for d >= 3: the Brillouin-zone integral
/// (2pi)^-d \int dk / A(k), evaluated in its heat-kernel form
/// 2d \int_0^inf (e^{-s} I_0(s))^d ds.
double infinite_volume_green_origin(int d);

struct GreenScanRow {
  int L = 0;
  double g00 = 0.0;       ///< G(0,0)
  double avg_diag = 0.0;  ///< (1/|Lambda|) sum_i G_ii
  double sum_all = 0.0;   ///< sum_ij G_ij
};

struct GreenScan {
  int d = 0;
  std::vector<GreenScanRow> rows;
  /// G(0,0) against log L (the d = 2 logarithmic growth); set when at least two rows exist.
  LinearFit diagonal_fit;
  /// log sum_ij G_ij against log(L + 1), the distance from the center to the exterior.
  LinearFit sum_exponent_fit;
};

/// G(0,0) and sum_ij G_ij by conjugate gradients, the diagonal average spectrally.
/// L values must be strictly increasing.
GreenScan green_diagonal_scan(int d, std::span<const int> Ls, double curvature = 1.0, int threads = 1);

/// Fits G(0,0) = g_inf + a/(L+1) + b/(L+1)^2 over the scan rows (at least three) and returns g_inf.
double extrapolate_green_origin(const GreenScan& scan);

}  // namespace pinfield
