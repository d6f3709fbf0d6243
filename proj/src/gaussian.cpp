#include "pinfield/gaussian.hpp"

#include <Eigen/IterativeLinearSolvers>
#include <Eigen/SparseCholesky>
#include <cmath>
#include <numbers>
#include <string>

namespace pinfield {

Eigen::VectorXd PrecisionMatrix::row_sums() const {
  Eigen::VectorXd sums = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(size()));
  for (int k = 0; k < matrix_.outerSize(); ++k) {
    for (Eigen::SparseMatrix<double>::InnerIterator it(matrix_, k); it; ++it) sums[it.row()] += it.value();
  }
  return sums;
}

PrecisionMatrix precision_matrix(const Volume& vol, std::span<const std::size_t> pinned, double curvature) {
  if (!(curvature > 0.0)) throw InvalidArgument("precision_matrix: curvature must be positive");
  std::vector<char> is_pinned(vol.size(), 0);
  for (std::size_t p : pinned) {
    if (p >= vol.size()) throw InvalidArgument("precision_matrix: pinned site is not in the volume");
    is_pinned[p] = 1;
  }
  std::vector<std::size_t> sites;
  std::vector<long> row_of(vol.size(), -1);
  for (std::size_t i = 0; i < vol.size(); ++i) {
    if (!is_pinned[i]) {
      row_of[i] = static_cast<long>(sites.size());
      sites.push_back(i);
    }
  }

  const double diag = 0.5 * curvature;
  const double off = -curvature / (4.0 * vol.dimension());
  std::vector<Eigen::Triplet<double>> triplets;
  triplets.reserve(sites.size() * (1 + 2 * static_cast<std::size_t>(vol.dimension())));
  for (std::size_t r = 0; r < sites.size(); ++r) {
    const auto row = static_cast<int>(r);
    triplets.emplace_back(row, row, diag);
    double radius = 0.0;
    for (std::size_t j : vol.neighbors(sites[r])) {
      if (row_of[j] >= 0) {
        triplets.emplace_back(row, static_cast<int>(row_of[j]), off);
        radius -= off;
      }
    }
    // Gershgorin: spectrum of A/c inside (0, 1].
    if (radius > diag * (1.0 + 1e-14)) throw NumericalError("precision_matrix: Gershgorin bound violated");
  }
  const auto n = static_cast<int>(sites.size());
  Eigen::SparseMatrix<double> a(n, n);
  a.setFromTriplets(triplets.begin(), triplets.end());
  a.makeCompressed();
  return PrecisionMatrix(std::move(a), std::move(sites), curvature);
}

struct GreenMatrix::Iterative {
  Eigen::SparseMatrix<double> matrix;
  Eigen::ConjugateGradient<Eigen::SparseMatrix<double>, Eigen::Lower | Eigen::Upper> solver;

  Eigen::VectorXd solve(const Eigen::VectorXd& rhs) {
    Eigen::VectorXd x = solver.solve(rhs);
    if (solver.info() != Eigen::Success) {
      throw NumericalError("green_matrix: conjugate gradients did not converge (error " +
                           std::to_string(solver.error()) + ")");
    }
    return x;
  }
};

GreenMatrix::GreenMatrix(const PrecisionMatrix& precision, Mode mode) : n_(precision.size()) {
  if (mode == Mode::dense && n_ > kDenseLimit) {
    throw InvalidArgument("green_matrix: dense inverse limited to " + std::to_string(kDenseLimit) + " sites");
  }
  if (mode == Mode::dense || (mode == Mode::automatic && n_ <= kDenseLimit)) {
    const Eigen::MatrixXd a = precision.dense();
    Eigen::LLT<Eigen::MatrixXd> llt(a);
    if (llt.info() != Eigen::Success) {
      throw NumericalError("green_matrix: Cholesky factorization failed; precision matrix is not positive definite");
    }
    dense_ = std::make_shared<const Eigen::MatrixXd>(
        llt.solve(Eigen::MatrixXd::Identity(static_cast<Eigen::Index>(n_), static_cast<Eigen::Index>(n_))));
    return;
  }
  iterative_ = std::make_shared<Iterative>();
  iterative_->matrix = precision.sparse();
  iterative_->solver.setTolerance(kIterativeTolerance);
  iterative_->solver.setMaxIterations(static_cast<Eigen::Index>(20 * n_));
  iterative_->solver.compute(iterative_->matrix);
  if (iterative_->solver.info() != Eigen::Success) throw NumericalError("green_matrix: solver setup failed");
}

double GreenMatrix::operator()(std::size_t i, std::size_t j) const {
  if (dense_) return (*dense_)(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
  return column(j)[static_cast<Eigen::Index>(i)];
}

Eigen::VectorXd GreenMatrix::column(std::size_t j) const {
  if (j >= n_) throw InvalidArgument("green_matrix: column index out of range");
  if (dense_) return dense_->col(static_cast<Eigen::Index>(j));
  Eigen::VectorXd e = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(n_));
  e[static_cast<Eigen::Index>(j)] = 1.0;
  return iterative_->solve(e);
}

Eigen::VectorXd GreenMatrix::diagonal() const {
  if (dense_) return dense_->diagonal();
  Eigen::VectorXd diag(static_cast<Eigen::Index>(n_));
  for (std::size_t j = 0; j < n_; ++j) diag[static_cast<Eigen::Index>(j)] = column(j)[static_cast<Eigen::Index>(j)];
  return diag;
}

double GreenMatrix::sum_all() const {
  const Eigen::VectorXd ones = Eigen::VectorXd::Ones(static_cast<Eigen::Index>(n_));
  return ones.dot(apply(ones));
}

Eigen::VectorXd GreenMatrix::apply(const Eigen::VectorXd& rhs) const {
  if (dense_) return (*dense_) * rhs;
  return iterative_->solve(rhs);
}

const Eigen::MatrixXd& GreenMatrix::dense() const {
  if (!dense_) throw InvalidArgument("green_matrix: dense inverse not available above " + std::to_string(kDenseLimit) + " sites");
  return *dense_;
}

GreenMatrix green_matrix(const PrecisionMatrix& precision) { return GreenMatrix(precision); }

GaussianSummary gaussian_log_partition(const Volume& vol, std::span<const std::size_t> pinned,
                                       const FieldConfig& eta, double curvature) {
  if (eta.size() != vol.size()) throw InvalidArgument("gaussian_log_partition: field length does not match the volume");
  const PrecisionMatrix a = precision_matrix(vol, pinned, curvature);
  GaussianSummary out;
  out.sites = a.sites();
  const auto n = static_cast<Eigen::Index>(a.size());
  if (n == 0) {
    out.log_z = 0.0;
    out.log_det = 0.0;
    out.quad_form = 0.0;
    return out;
  }
  Eigen::SimplicialLLT<Eigen::SparseMatrix<double>> llt(a.sparse());
  if (llt.info() != Eigen::Success) throw NumericalError("gaussian_log_partition: Cholesky factorization failed");
  Eigen::VectorXd rhs(n);
  for (Eigen::Index r = 0; r < n; ++r) rhs[r] = eta[a.sites()[static_cast<std::size_t>(r)]];
  out.mean = llt.solve(rhs);
  out.quad_form = rhs.dot(out.mean);
  const Eigen::SparseMatrix<double> factor = llt.matrixL();
  double log_det = 0.0;
  for (Eigen::Index k = 0; k < n; ++k) log_det += 2.0 * std::log(factor.coeff(k, k));
  out.log_det = log_det;
  out.log_z = 0.5 * static_cast<double>(n) * std::log(2.0 * std::numbers::pi) - 0.5 * log_det + 0.5 * out.quad_form;
  return out;
}

}  // namespace pinfield
