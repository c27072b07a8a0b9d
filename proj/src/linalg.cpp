#include "dhgl/linalg.hpp"

#include <algorithm>
#include <cmath>

namespace dhgl {

SymmetricMatrix::SymmetricMatrix(Eigen::Index dim)
    : mat_(Matrix::Zero(dim, dim)) {
  if (dim < 1) throw std::invalid_argument("SymmetricMatrix: dim must be >= 1");
}

SymmetricMatrix SymmetricMatrix::identity(Eigen::Index dim) {
  if (dim < 1) throw std::invalid_argument("SymmetricMatrix: dim must be >= 1");
  return SymmetricMatrix(Matrix(Matrix::Identity(dim, dim)));
}

SymmetricMatrix SymmetricMatrix::symmetrized(const Matrix& m) {
  if (m.rows() != m.cols() || m.rows() < 1)
    throw DimensionMismatch("symmetrized: matrix must be square, dim >= 1");
  // (a + b)/2 == (b + a)/2 entrywise, so the result is bitwise symmetric.
  return SymmetricMatrix(Matrix(0.5 * (m + m.transpose())));
}

SymmetricMatrix SymmetricMatrix::require_symmetric(const Matrix& m, double tol) {
  if (m.rows() != m.cols() || m.rows() < 1)
    throw DimensionMismatch("require_symmetric: matrix must be square, dim >= 1");
  const double gap = (m - m.transpose()).cwiseAbs().maxCoeff();
  const double scale = 1.0 + m.cwiseAbs().maxCoeff();
  if (gap > tol * scale)
    throw std::invalid_argument("require_symmetric: asymmetry " + std::to_string(gap) +
                                " exceeds tolerance");
  return symmetrized(m);
}

double soft_threshold(double a, double b) {
  const double shrunk = std::abs(a) - b;
  if (shrunk <= 0.0) return 0.0;
  return a > 0.0 ? shrunk : -shrunk;
}

Matrix soft_threshold(const Matrix& m, double b) {
  return m.unaryExpr([b](double a) { return soft_threshold(a, b); });
}

EigenDecomposition sym_eigen(const SymmetricMatrix& a) {
  if (!a.mat().allFinite())
    throw std::invalid_argument("sym_eigen: non-finite entries");
  Eigen::SelfAdjointEigenSolver<Matrix> solver(a.mat());
  if (solver.info() != Eigen::Success)
    throw std::runtime_error("sym_eigen: eigen-decomposition failed");
  // Eigen returns ascending order; flip to descending.
  EigenDecomposition out;
  out.values = solver.eigenvalues().reverse();
  out.vectors = solver.eigenvectors().rowwise().reverse();
  return out;
}

Matrix cholesky(const SymmetricMatrix& a) {
  Eigen::LLT<Matrix> llt(a.mat());
  if (llt.info() != Eigen::Success)
    throw NotPositiveDefinite("cholesky: matrix is not positive definite");
  return llt.matrixL();
}

// The off-diagonal norms skip the diagonal instead of subtracting it so that
// exactly-sparse inputs give exactly-zero norms.
double l1_offdiag(const Matrix& m) {
  double total = 0.0;
  for (Eigen::Index j = 0; j < m.cols(); ++j)
    for (Eigen::Index i = 0; i < m.rows(); ++i)
      if (i != j) total += std::abs(m(i, j));
  return total;
}

double frobenius_norm(const Matrix& m) { return m.norm(); }

double column_l2_offdiag(const Matrix& m, Eigen::Index j) {
  double sq = 0.0;
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    if (i != j) sq += m(i, j) * m(i, j);
  return std::sqrt(sq);
}

double column_l1_offdiag(const Matrix& m, Eigen::Index j) {
  double total = 0.0;
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    if (i != j) total += std::abs(m(i, j));
  return total;
}

SymmetricMatrix empirical_covariance(const Matrix& x) {
  const Eigen::Index n = x.rows();
  if (n < 2) throw DegenerateSample("empirical_covariance: need at least 2 rows");
  const Matrix centered = x.rowwise() - x.colwise().mean();
  const Matrix s = (centered.transpose() * centered) / static_cast<double>(n);
  return SymmetricMatrix::symmetrized(s);
}

}  // namespace dhgl
