#pragma once

#include <Eigen/Dense>

#include <stdexcept>
#include <string>

namespace dhgl {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

struct DimensionMismatch : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct NotPositiveDefinite : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct DegenerateSample : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// Dense p x p symmetric matrix. The (i,j) and (j,i) entries are bitwise
/// equal by construction; mutation goes through set() which writes both.
class SymmetricMatrix {
 public:
  SymmetricMatrix() = default;  // empty; assign before use
  explicit SymmetricMatrix(Eigen::Index dim);

  static SymmetricMatrix identity(Eigen::Index dim);
  /// Exact symmetrization (m + m^T)/2.
  static SymmetricMatrix symmetrized(const Matrix& m);
  /// Accepts m only if max |m - m^T| <= tol * (1 + max|m|), then stores the
  /// exact symmetrization so downstream code can rely on bitwise symmetry.
  static SymmetricMatrix require_symmetric(const Matrix& m, double tol = 1e-12);

  Eigen::Index dim() const { return mat_.rows(); }
  const Matrix& mat() const { return mat_; }
  double operator()(Eigen::Index i, Eigen::Index j) const { return mat_(i, j); }
  void set(Eigen::Index i, Eigen::Index j, double value) {
    mat_(i, j) = value;
    mat_(j, i) = value;
  }

 private:
  explicit SymmetricMatrix(Matrix m) : mat_(std::move(m)) {}
  Matrix mat_;
};

/// U * diag(values) * U^T reconstructs the input; values sorted descending.
struct EigenDecomposition {
  Matrix vectors;
  Vector values;
};

/// sign(a) * max(|a| - b, 0); b >= 0.
double soft_threshold(double a, double b);
/// Elementwise soft threshold over every entry of m.
Matrix soft_threshold(const Matrix& m, double b);

EigenDecomposition sym_eigen(const SymmetricMatrix& a);

/// Lower-triangular L with L L^T = a. Throws NotPositiveDefinite when a
/// pivot is <= 0 so the caller can regularize and retry.
Matrix cholesky(const SymmetricMatrix& a);

/// Sum of |m_ij| over i != j (both triangles of a full matrix).
double l1_offdiag(const Matrix& m);
double frobenius_norm(const Matrix& m);
/// Norms of column j with the diagonal entry m(j,j) excluded.
double column_l2_offdiag(const Matrix& m, Eigen::Index j);
double column_l1_offdiag(const Matrix& m, Eigen::Index j);

/// Maximum-likelihood covariance: center columns, then (1/n) X^T X.
/// Requires n >= 2 rows; throws DegenerateSample otherwise.
SymmetricMatrix empirical_covariance(const Matrix& x);

}  // namespace dhgl
