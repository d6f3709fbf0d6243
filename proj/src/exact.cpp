#include "pinfield/exact.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <optional>
#include <string>

#include "pinfield/gaussian.hpp"
#include "pinfield/parallel.hpp"

namespace pinfield {

namespace {

constexpr std::uint64_t kChunkSize = std::uint64_t{1} << 12;
constexpr double kNegInf = -std::numeric_limits<double>::infinity();

void check_inputs(const Volume& vol, std::span<const FieldConfig> etas, std::span<const double> epsilons,
                  double curvature) {
  if (vol.size() > kMaxExactSites) {
    throw VolumeTooLarge("exact solver: " + std::to_string(vol.size()) + " sites exceed the enumeration limit of " +
                         std::to_string(kMaxExactSites) + "; use the sampler");
  }
  if (!(curvature > 0.0)) throw InvalidArgument("exact solver: curvature must be positive");
  for (double e : epsilons) {
    if (!(e >= 0.0) || !std::isfinite(e)) throw InvalidArgument("exact solver: epsilon must be finite and >= 0");
  }
  for (const auto& eta : etas) {
    if (eta.size() != vol.size()) throw InvalidArgument("exact solver: field length does not match the volume");
  }
}

// Running sums scaled by exp(-ref) so that terms spanning hundreds of orders of
// magnitude can be added without overflow. Layout: [z, pin(n), mean(n), second(n)].
class ScaledSums {
 public:
  ScaledSums(std::size_t n, std::size_t slots) : n_(n), ref_(slots, kNegInf), data_(slots * (1 + 3 * n), 0.0) {}

  double* slot(std::size_t s) { return data_.data() + s * (1 + 3 * n_); }
  const double* slot(std::size_t s) const { return data_.data() + s * (1 + 3 * n_); }
  double ref(std::size_t s) const { return ref_[s]; }

  // Brings slot s to reference max(ref, log_weight); returns the factor for the new term.
  double rebase(std::size_t s, double log_weight) {
    if (log_weight > ref_[s]) {
      const double shrink = std::isinf(ref_[s]) ? 0.0 : std::exp(ref_[s] - log_weight);
      double* p = slot(s);
      for (std::size_t k = 0; k < 1 + 3 * n_; ++k) p[k] *= shrink;
      ref_[s] = log_weight;
      return 1.0;
    }
    return std::exp(log_weight - ref_[s]);
  }

  void merge(const ScaledSums& other) {
    for (std::size_t s = 0; s < ref_.size(); ++s) {
      if (std::isinf(other.ref_[s])) continue;
      const double factor = rebase(s, other.ref_[s]);
      double* p = slot(s);
      const double* q = other.slot(s);
      for (std::size_t k = 0; k < 1 + 3 * n_; ++k) p[k] += factor * q[k];
    }
  }

 private:
  std::size_t n_;
  std::vector<double> ref_;
  std::vector<double> data_;
};

// Per-subset Gaussian factor: Cholesky of the principal submatrix of A on the
// unpinned sites, its inverse factor, and log det.
class SubsetFactor {
 public:
  SubsetFactor(const Eigen::MatrixXd& full) : full_(full), n_(static_cast<std::size_t>(full.rows())) {
    chol_.resize(n_ * n_);
    inv_.resize(n_ * n_);
    free_.reserve(n_);
  }

  // Returns false only on a non-positive pivot.
  bool factor(std::uint64_t pinned_mask) {
    free_.clear();
    for (std::size_t i = 0; i < n_; ++i) {
      if (!((pinned_mask >> i) & 1u)) free_.push_back(i);
    }
    const std::size_t m = free_.size();
    double* l = chol_.data();
    for (std::size_t r = 0; r < m; ++r) {
      for (std::size_t c = 0; c <= r; ++c) {
        l[r * m + c] = full_(static_cast<Eigen::Index>(free_[r]), static_cast<Eigen::Index>(free_[c]));
      }
    }
    log_det_ = 0.0;
    for (std::size_t j = 0; j < m; ++j) {
      double diag = l[j * m + j];
      for (std::size_t k = 0; k < j; ++k) diag -= l[j * m + k] * l[j * m + k];
      if (!(diag > 0.0)) return false;
      const double pivot = std::sqrt(diag);
      l[j * m + j] = pivot;
      log_det_ += 2.0 * std::log(pivot);
      for (std::size_t r = j + 1; r < m; ++r) {
        double v = l[r * m + j];
        for (std::size_t k = 0; k < j; ++k) v -= l[r * m + k] * l[j * m + k];
        l[r * m + j] = v / pivot;
      }
    }
    // inv_ = L^{-1}, lower triangular, row-major.
    double* w = inv_.data();
    for (std::size_t c = 0; c < m; ++c) {
      for (std::size_t r = 0; r < c; ++r) w[r * m + c] = 0.0;
      w[c * m + c] = 1.0 / l[c * m + c];
      for (std::size_t r = c + 1; r < m; ++r) {
        double v = 0.0;
        for (std::size_t k = c; k < r; ++k) v -= l[r * m + k] * w[k * m + c];
        w[r * m + c] = v / l[r * m + r];
      }
    }
    return true;
  }

  std::size_t free_count() const { return free_.size(); }
  const std::vector<std::size_t>& free_sites() const { return free_; }
  double log_det() const { return log_det_; }

  // G_ii = sum_k (L^{-1})_{ki}^2 for the free sites, in free-site order.
  void green_diagonal(std::vector<double>& out) const {
    const std::size_t m = free_.size();
    out.assign(m, 0.0);
    for (std::size_t k = 0; k < m; ++k) {
      for (std::size_t i = 0; i <= k; ++i) out[i] += inv_[k * m + i] * inv_[k * m + i];
    }
  }

  // mean = G eta_D; returns eta_D^T G eta_D.
  double solve(const FieldConfig& eta, std::vector<double>& y, std::vector<double>& mean) const {
    const std::size_t m = free_.size();
    y.assign(m, 0.0);
    mean.assign(m, 0.0);
    double quad = 0.0;
    for (std::size_t r = 0; r < m; ++r) {
      double v = 0.0;
      for (std::size_t k = 0; k <= r; ++k) v += inv_[r * m + k] * eta[free_[k]];
      y[r] = v;
      quad += v * v;
    }
    for (std::size_t r = 0; r < m; ++r) {
      for (std::size_t i = 0; i <= r; ++i) mean[i] += inv_[r * m + i] * y[r];
    }
    return quad;
  }

 private:
  const Eigen::MatrixXd& full_;
  std::size_t n_;
  std::vector<double> chol_;
  std::vector<double> inv_;
  std::vector<std::size_t> free_;
  double log_det_ = 0.0;
};

double gaussian_log_z(std::size_t free_count, double log_det, double quad) {
  return 0.5 * static_cast<double>(free_count) * std::log(2.0 * std::numbers::pi) - 0.5 * log_det + 0.5 * quad;
}

}  // namespace

double ExactSolution::variance_sum() const {
  double s = 0.0;
  for (std::size_t i = 0; i < mean.size(); ++i) s += variance(i);
  return s;
}

std::vector<ExactSolution> exact_mixed_grid(const Volume& vol, std::span<const FieldConfig> etas,
                                            std::span<const double> epsilons, double curvature, int threads) {
  check_inputs(vol, etas, epsilons, curvature);
  const std::size_t n = vol.size();
  const std::size_t nf = etas.size();
  const std::size_t ne = epsilons.size();
  const std::size_t slots = nf * ne;
  if (slots == 0) return {};

  const Eigen::MatrixXd full = precision_matrix(vol, {}, curvature).dense();
  std::vector<double> log_eps(ne);
  bool any_positive = false;
  for (std::size_t e = 0; e < ne; ++e) {
    log_eps[e] = epsilons[e] > 0.0 ? std::log(epsilons[e]) : kNegInf;
    any_positive = any_positive || epsilons[e] > 0.0;
  }

  const std::uint64_t subsets = any_positive ? (std::uint64_t{1} << n) : 1;
  const std::uint64_t chunks = (subsets + kChunkSize - 1) / kChunkSize;

  auto run_chunk = [&](std::uint64_t chunk) {
    ScaledSums sums(n, slots);
    SubsetFactor factor(full);
    std::vector<double> y, mean, diag;
    const std::uint64_t begin = chunk * kChunkSize;
    const std::uint64_t end = std::min(subsets, begin + kChunkSize);
    for (std::uint64_t mask = begin; mask < end; ++mask) {
      const int pinned_count = std::popcount(mask);
      if (!factor.factor(mask)) {
        throw NumericalError("exact solver: non-positive pivot in subset factorization");
      }
      const auto& free = factor.free_sites();
      factor.green_diagonal(diag);
      for (std::size_t f = 0; f < nf; ++f) {
        const double quad = factor.solve(etas[f], y, mean);
        const double log_z = gaussian_log_z(free.size(), factor.log_det(), quad);
        for (std::size_t e = 0; e < ne; ++e) {
          if (pinned_count > 0 && epsilons[e] == 0.0) continue;
          const double lw = log_z + (pinned_count > 0 ? pinned_count * log_eps[e] : 0.0);
          const std::size_t s = f * ne + e;
          const double t = sums.rebase(s, lw);
          double* p = sums.slot(s);
          p[0] += t;
          for (std::size_t i = 0; i < n; ++i) {
            if ((mask >> i) & 1u) p[1 + i] += t;
          }
          for (std::size_t k = 0; k < free.size(); ++k) {
            const std::size_t i = free[k];
            p[1 + n + i] += t * mean[k];
            p[1 + 2 * n + i] += t * (diag[k] + mean[k] * mean[k]);
          }
        }
      }
    }
    return sums;
  };

  // Rounds of `threads` chunks; each round is folded into the total in chunk order.
  ScaledSums total(n, slots);
  const std::uint64_t round = static_cast<std::uint64_t>(std::max(1, threads));
  for (std::uint64_t first = 0; first < chunks; first += round) {
    const std::uint64_t count = std::min(round, chunks - first);
    std::vector<std::optional<ScaledSums>> partial(count);
    parallel_for(count, threads, [&](std::size_t k) { partial[k].emplace(run_chunk(first + k)); });
    for (auto& p : partial) total.merge(*p);
  }

  std::vector<ExactSolution> out(slots);
  for (std::size_t f = 0; f < nf; ++f) {
    for (std::size_t e = 0; e < ne; ++e) {
      const std::size_t s = f * ne + e;
      const double* p = total.slot(s);
      ExactSolution& sol = out[s];
      const double z = p[0];
      sol.log_z = total.ref(s) + std::log(z);
      sol.pin_probability.resize(n);
      sol.mean.resize(n);
      sol.second_moment.resize(n);
      double pinned = 0.0;
      double overlap = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        sol.pin_probability[i] = p[1 + i] / z;
        sol.mean[i] = p[1 + n + i] / z;
        sol.second_moment[i] = p[1 + 2 * n + i] / z;
        pinned += sol.pin_probability[i];
        overlap += etas[f][i] * sol.mean[i];
      }
      sol.overlap = overlap;
      sol.pinned_fraction = pinned / static_cast<double>(n);
    }
  }
  return out;
}

ExactSolution exact_mixed_solution(const Volume& vol, const FieldConfig& eta, double epsilon, double curvature,
                                   int threads) {
  const double eps[] = {epsilon};
  auto grid = exact_mixed_grid(vol, std::span<const FieldConfig>(&eta, 1), eps, curvature, threads);
  return std::move(grid.front());
}

std::vector<double> subset_log_weights(const Volume& vol, const FieldConfig& eta, double epsilon, double curvature) {
  const double eps[] = {epsilon};
  check_inputs(vol, std::span<const FieldConfig>(&eta, 1), eps, curvature);
  const Eigen::MatrixXd full = precision_matrix(vol, {}, curvature).dense();
  SubsetFactor factor(full);
  std::vector<double> y, mean;
  const std::uint64_t subsets = std::uint64_t{1} << vol.size();
  std::vector<double> out(subsets, kNegInf);
  const double log_eps = epsilon > 0.0 ? std::log(epsilon) : kNegInf;
  for (std::uint64_t mask = 0; mask < subsets; ++mask) {
    const int pinned_count = std::popcount(mask);
    if (pinned_count > 0 && epsilon == 0.0) continue;
    if (!factor.factor(mask)) throw NumericalError("exact solver: non-positive pivot in subset factorization");
    const double quad = factor.solve(eta, y, mean);
    out[mask] = gaussian_log_z(factor.free_count(), factor.log_det(), quad) + (pinned_count > 0 ? pinned_count * log_eps : 0.0);
  }
  return out;
}

ScalingIdentityReport scaling_identity_check(const Volume& vol, const FieldConfig& eta, double epsilon,
                                             double curvature) {
  if (!(curvature > 0.0)) throw InvalidArgument("scaling identity: curvature must be positive");
  ScalingIdentityReport r;
  r.direct_log_z = exact_mixed_solution(vol, eta, epsilon, curvature).log_z;
  const double root = std::sqrt(curvature);
  const auto unit = exact_mixed_solution(vol, eta.scaled(1.0 / root), epsilon * root, 1.0);
  r.rescaled_log_z = -0.5 * static_cast<double>(vol.size()) * std::log(curvature) + unit.log_z;
  r.discrepancy = std::abs(r.direct_log_z - r.rescaled_log_z) / std::max(1.0, std::abs(r.direct_log_z));
  return r;
}

}  // namespace pinfield
