#include "pinfield/green.hpp"

#include <Eigen/Dense>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <numbers>

#include "pinfield/gaussian.hpp"
#include "pinfield/lattice.hpp"
#include "pinfield/parallel.hpp"

namespace pinfield {

namespace {

std::vector<double> one_minus_cos(int L) {
  const int side = 2 * L + 1;
  std::vector<double> out(static_cast<std::size_t>(side));
  for (int k = 1; k <= side; ++k) {
    out[static_cast<std::size_t>(k - 1)] = 1.0 - std::cos(k * std::numbers::pi / (side + 1));
  }
  return out;
}

// Sum of f(lambda_k) over all box eigenvalues.
template <typename F>
double sum_over_box_spectrum(int d, int L, double curvature, F f) {
  if (d <= 0 || L < 0) throw InvalidArgument("box spectrum: need d >= 1 and L >= 0");
  const auto modes = one_minus_cos(L);
  const std::size_t side = modes.size();
  const double scale = curvature / (2.0 * d);
  std::vector<std::size_t> k(static_cast<std::size_t>(d), 0);
  double total = 0.0;
  while (true) {
    double s = 0.0;
    for (std::size_t a : k) s += modes[a];
    total += f(scale * s);
    int a = d - 1;
    while (a >= 0 && ++k[static_cast<std::size_t>(a)] == side) {
      k[static_cast<std::size_t>(a)] = 0;
      --a;
    }
    if (a < 0) break;
  }
  return total;
}

}  // namespace

double box_log_det(int d, int L, double curvature) {
  return sum_over_box_spectrum(d, L, curvature, [](double lambda) { return std::log(lambda); });
}

double box_green_trace(int d, int L, double curvature) {
  return sum_over_box_spectrum(d, L, curvature, [](double lambda) { return 1.0 / lambda; });
}

double infinite_volume_green_origin(int d) {
  if (d < 3) throw InvalidArgument("infinite_volume_green_origin: the lattice Green function is finite only for d >= 3");
  constexpr double split = 100.0;
  auto integrand = [d](double s) {
    const double scaled = s < 1e-300 ? 1.0 : std::exp(-s) * std::cyl_bessel_i(0.0, s);
    return std::pow(scaled, d);
  };
  double error = 0.0;
  const double head =
      boost::math::quadrature::gauss_kronrod<double, 61>::integrate(integrand, 0.0, split, 20, 1e-14, &error);

  // e^{-s} I_0(s) ~ (2 pi s)^{-1/2} sum_k a_k s^{-k},  a_k = ((2k-1)!!)^2 / (k! 8^k).
  constexpr int terms = 6;
  double a[terms] = {1.0};
  for (int k = 1; k < terms; ++k) a[k] = a[k - 1] * (2.0 * k - 1.0) * (2.0 * k - 1.0) / (8.0 * k);
  std::vector<double> power(terms, 0.0);
  power[0] = 1.0;
  for (int m = 0; m < d; ++m) {
    std::vector<double> next(terms, 0.0);
    for (int i = 0; i < terms; ++i) {
      for (int j = 0; i + j < terms; ++j) next[static_cast<std::size_t>(i + j)] += power[static_cast<std::size_t>(i)] * a[j];
    }
    power = next;
  }
  const double half_d = 0.5 * d;
  double tail = 0.0;
  for (int k = 0; k < terms; ++k) {
    const double exponent = half_d + k - 1.0;
    tail += power[static_cast<std::size_t>(k)] * std::pow(split, -exponent) / exponent;
  }
  tail *= std::pow(2.0 * std::numbers::pi, -half_d);
  return 2.0 * d * (head + tail);
}

GreenScan green_diagonal_scan(int d, std::span<const int> Ls, double curvature, int threads) {
  if (Ls.empty()) throw InvalidArgument("green_diagonal_scan: empty L list");
  for (std::size_t k = 1; k < Ls.size(); ++k) {
    if (Ls[k] <= Ls[k - 1]) throw InvalidArgument("green_diagonal_scan: L values must be strictly increasing");
  }
  GreenScan scan;
  scan.d = d;
  scan.rows.resize(Ls.size());
  parallel_for(Ls.size(), threads, [&](std::size_t k) {
    const int L = Ls[k];
    const Volume vol = Volume::box(d, L);
    const PrecisionMatrix a = precision_matrix(vol, {}, curvature);
    const GreenMatrix g(a, GreenMatrix::Mode::iterative);
    GreenScanRow& row = scan.rows[k];
    row.L = L;
    row.g00 = g(vol.center_index(), vol.center_index());
    row.sum_all = g.sum_all();
    row.avg_diag = box_green_trace(d, L, curvature) / static_cast<double>(vol.size());
  });
  if (scan.rows.size() >= 2) {
    std::vector<double> log_l, g00, log_r, log_sum;
    for (const auto& row : scan.rows) {
      log_r.push_back(std::log(row.L + 1.0));
      log_sum.push_back(std::log(row.sum_all));
      if (row.L > 0) {
        log_l.push_back(std::log(static_cast<double>(row.L)));
        g00.push_back(row.g00);
      }
    }
    if (log_l.size() >= 2) scan.diagonal_fit = fit_line(log_l, g00);
    scan.sum_exponent_fit = fit_line(log_r, log_sum);
  }
  return scan;
}

double extrapolate_green_origin(const GreenScan& scan) {
  const auto n = static_cast<Eigen::Index>(scan.rows.size());
  if (n < 3) throw InvalidArgument("extrapolate_green_origin: need at least three L values");
  Eigen::MatrixXd design(n, 3);
  Eigen::VectorXd target(n);
  for (Eigen::Index k = 0; k < n; ++k) {
    const double x = 1.0 / (scan.rows[static_cast<std::size_t>(k)].L + 1.0);
    design(k, 0) = 1.0;
    design(k, 1) = x;
    design(k, 2) = x * x;
    target[k] = scan.rows[static_cast<std::size_t>(k)].g00;
  }
  const Eigen::VectorXd coef = design.colPivHouseholderQr().solve(target);
  return coef[0];
}

}  // namespace pinfield
