#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <cstddef>
#include <memory>
#include <span>
#include <stdexcept>
#include <vector>

#include "pinfield/lattice.hpp"
#include "pinfield/model.hpp"

namespace pinfield {

/// Raised when a factorization or iterative solve fails.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Hessian A of the Gaussian energy (V(t) = c t^2/2) restricted to the unpinned sites
/// D = vol \ pinned, Dirichlet on pinned and exterior sites:
///   A_ii = c/2,   A_ij = -c/(4d) for nearest neighbours i, j in D.
/// This A plays the role of (-Delta_Lambda) throughout the library.
class PrecisionMatrix {
 public:
  PrecisionMatrix(Eigen::SparseMatrix<double> matrix, std::vector<std::size_t> sites, double curvature)
      : matrix_(std::move(matrix)), sites_(std::move(sites)), curvature_(curvature) {}

  std::size_t size() const { return sites_.size(); }
  /// Parent-volume index of each row.
  const std::vector<std::size_t>& sites() const { return sites_; }
  double curvature() const { return curvature_; }
  const Eigen::SparseMatrix<double>& sparse() const { return matrix_; }
  Eigen::MatrixXd dense() const { return Eigen::MatrixXd(matrix_); }
  Eigen::VectorXd row_sums() const;

 private:
  Eigen::SparseMatrix<double> matrix_;
  std::vector<std::size_t> sites_;
  double curvature_;
};

PrecisionMatrix precision_matrix(const Volume& vol, std::span<const std::size_t> pinned, double curvature = 1.0);

/// G = A^{-1}. Held as a dense inverse up to kDenseLimit rows; larger matrices answer
/// column and sum queries by conjugate gradients (relative residual <= 1e-10).
class GreenMatrix {
 public:
  static constexpr std::size_t kDenseLimit = 4096;
  static constexpr double kIterativeTolerance = 1e-10;

  enum class Mode { automatic, dense, iterative };

  explicit GreenMatrix(const PrecisionMatrix& precision, Mode mode = Mode::automatic);

  std::size_t size() const { return n_; }
  bool is_dense() const { return dense_ != nullptr; }

  double operator()(std::size_t i, std::size_t j) const;
  Eigen::VectorXd column(std::size_t j) const;
  /// G_ii for all i; one solve per site in iterative mode.
  Eigen::VectorXd diagonal() const;
  /// sum_ij G_ij = 1^T G 1.
  double sum_all() const;
  /// G * rhs.
  Eigen::VectorXd apply(const Eigen::VectorXd& rhs) const;
  /// Dense inverse; throws in iterative mode.
  const Eigen::MatrixXd& dense() const;

 private:
  struct Iterative;

  std::size_t n_;
  std::shared_ptr<const Eigen::MatrixXd> dense_;
  std::shared_ptr<Iterative> iterative_;
};

GreenMatrix green_matrix(const PrecisionMatrix& precision);


struct GaussianSummary {
  double log_z;
  double log_det;     ///< log det A
  double quad_form;   ///< eta^T G eta over the unpinned sites
  Eigen::VectorXd mean;  ///< G eta, indexed like the precision matrix rows
  std::vector<std::size_t> sites;
};

/// log Z = (|D|/2) log 2pi - (1/2) log det A + (1/2) eta^T G eta for the unpinned Gaussian
/// measure on D = vol \ pinned. The covariance is green_matrix() of the same precision.
GaussianSummary gaussian_log_partition(const Volume& vol, std::span<const std::size_t> pinned,
                                       const FieldConfig& eta, double curvature = 1.0);

}  // namespace pinfield
