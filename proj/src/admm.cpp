#include "dhgl/admm.hpp"

#include <cassert>
#include <cmath>

namespace dhgl {

void AdmmConfig::validate() const {
  if (!(rho > 0)) throw std::invalid_argument("AdmmConfig: rho must be positive");
  if (!(tau > 0)) throw std::invalid_argument("AdmmConfig: tau must be positive");
  if (max_iterations < 1) throw std::invalid_argument("AdmmConfig: max_iterations must be >= 1");
}

AdmmState AdmmState::initial(Eigen::Index p) {
  AdmmState st;
  st.theta = st.v = st.z = Matrix::Identity(p, p);
  st.theta_tilde = st.v_tilde = st.z_tilde = Matrix::Identity(p, p);
  st.w1 = st.w2 = st.w3 = Matrix::Zero(p, p);
  st.iteration = 0;
  return st;
}

Matrix theta_update(const Matrix& theta_tilde, const Matrix& w1,
                    const SymmetricMatrix& s, double rho) {
  const Matrix a = theta_tilde - w1 - s.mat() / rho;
  const EigenDecomposition eig = sym_eigen(SymmetricMatrix::symmetrized(a));
  const Vector lifted =
      0.5 * (eig.values.array() + (eig.values.array().square() + 4.0 / rho).sqrt());
  assert(lifted.minCoeff() > 0.0);
  const Matrix theta = eig.vectors * lifted.asDiagonal() * eig.vectors.transpose();
  return 0.5 * (theta + theta.transpose());
}

Matrix z_update(const Matrix& z_tilde, const Matrix& w3, double lambda1, double rho) {
  const Matrix shifted = z_tilde - w3;
  Matrix z = soft_threshold(shifted, lambda1 / rho);
  z.diagonal() = shifted.diagonal();
  return z;
}

Vector v_column_update(const Vector& c, double lambda_l1, double lambda_l2, double rho) {
  Vector shrunk = c.unaryExpr([t = lambda_l1 / rho](double a) { return soft_threshold(a, t); });
  const double norm = shrunk.norm();
  if (norm * rho <= lambda_l2) return Vector::Zero(c.size());
  return (1.0 - lambda_l2 / (rho * norm)) * shrunk;
}

void consensus_update(AdmmState& state, double rho) {
  const Matrix a = state.theta + state.w1;
  const Matrix b = state.v + state.w2;
  const Matrix c = state.z + state.w3;
  const Matrix gamma = (rho / 6.0) * (a - b - b.transpose() - c);
  state.theta_tilde = a - gamma / rho;
  state.v_tilde = (gamma + gamma.transpose()) / rho + b;
  state.z_tilde = gamma / rho + c;
}

void dual_update(AdmmState& state) {
  state.w1 += state.theta - state.theta_tilde;
  state.w2 += state.v - state.v_tilde;
  state.w3 += state.z - state.z_tilde;
}

namespace {

double log_det_pd(const Matrix& theta) {
  Eigen::LLT<Matrix> llt(theta);
  if (llt.info() != Eigen::Success)
    throw NotPositiveDefinite("log_det_pd: matrix is not positive definite");
  return 2.0 * Matrix(llt.matrixL()).diagonal().array().log().sum();
}

void check_finite(const Matrix& m, const char* what, int iteration) {
  if (!m.allFinite())
    throw NonFiniteIterate(std::string("solve: non-finite ") + what + " at iteration " +
                           std::to_string(iteration));
}

// Stopping quantity; falls back to the absolute squared change when the
// previous iterate had zero norm (cannot happen after identity init).
double relative_change(const Matrix& current, const Matrix& previous) {
  const double denom = previous.squaredNorm();
  const double num = (current - previous).squaredNorm();
  return denom > 0.0 ? num / denom : num;
}

}  // namespace

SolveResult solve(const SymmetricMatrix& s, const PenaltyConfig& penalty, const AdmmConfig& cfg) {
  cfg.validate();
  const Eigen::Index p = s.dim();
  penalty.validate_dimension(p);

  AdmmState st = AdmmState::initial(p);
  SolveResult result;
  result.residual_history.reserve(16);

  // Per-column shrinkage pair: (lambda2, lambda3) outside the discrimination
  // set, (lambda4, lambda5) inside it.
  std::vector<std::pair<double, double>> column_lambdas(static_cast<std::size_t>(p));
  for (Eigen::Index j = 0; j < p; ++j) {
    const bool in_d = penalty.is_discriminated(static_cast<int>(j));
    column_lambdas[static_cast<std::size_t>(j)] = {in_d ? penalty.lambda4() : penalty.lambda2(),
                                                   in_d ? penalty.lambda5() : penalty.lambda3()};
  }

  bool converged = false;
  while (st.iteration < cfg.max_iterations) {
    ++st.iteration;
    const Matrix theta_prev = st.theta;
    const Matrix theta_tilde_prev = st.theta_tilde;
    const Matrix v_tilde_prev = st.v_tilde;
    const Matrix z_tilde_prev = st.z_tilde;

    st.theta = theta_update(st.theta_tilde, st.w1, s, cfg.rho);
    st.z = z_update(st.z_tilde, st.w3, penalty.lambda1(), cfg.rho);

    Matrix c = st.v_tilde - st.w2;
    const Vector c_diag = c.diagonal();
    c.diagonal().setZero();
    for (Eigen::Index j = 0; j < p; ++j) {
      const auto [l1, l2] = column_lambdas[static_cast<std::size_t>(j)];
      st.v.col(j) = v_column_update(c.col(j), l1, l2, cfg.rho);
    }
    st.v.diagonal() = c_diag;

    consensus_update(st, cfg.rho);
    dual_update(st);

    check_finite(st.theta, "Theta", st.iteration);
    check_finite(st.v, "V", st.iteration);
    check_finite(st.z, "Z", st.iteration);

    IterationStats stats;
    stats.theta_rel_change = relative_change(st.theta, theta_prev);
    stats.primal_residual = std::sqrt((st.theta - st.theta_tilde).squaredNorm() +
                                      (st.v - st.v_tilde).squaredNorm() +
                                      (st.z - st.z_tilde).squaredNorm());
    stats.dual_residual = cfg.rho * std::sqrt((st.theta_tilde - theta_tilde_prev).squaredNorm() +
                                              (st.v_tilde - v_tilde_prev).squaredNorm() +
                                              (st.z_tilde - z_tilde_prev).squaredNorm());
    result.residual_history.push_back(stats);

    if (stats.theta_rel_change <= cfg.tau) {
      converged = true;
      break;
    }
  }

  result.theta_hat = SymmetricMatrix::symmetrized(st.theta);
  result.v_hat = st.v;
  result.z_hat = SymmetricMatrix::symmetrized(st.z);
  result.iterations = st.iteration;
  result.converged = converged;

  const double trace_term = (s.mat().cwiseProduct(result.theta_hat.mat())).sum();
  result.objective = -log_det_pd(result.theta_hat.mat()) + trace_term +
                     penalty_value(result.v_hat, result.z_hat, penalty);
  return result;
}

SolveResult solve_gl(const SymmetricMatrix& s, double lambda, const AdmmConfig& cfg) {
  cfg.validate();
  if (lambda < 0) throw std::invalid_argument("solve_gl: lambda must be nonnegative");
  const Eigen::Index p = s.dim();

  Matrix theta = Matrix::Identity(p, p);
  Matrix z = Matrix::Identity(p, p);
  Matrix theta_tilde = Matrix::Identity(p, p);
  Matrix z_tilde = Matrix::Identity(p, p);
  Matrix w1 = Matrix::Zero(p, p);
  Matrix w3 = Matrix::Zero(p, p);

  SolveResult result;
  bool converged = false;
  int iteration = 0;
  while (iteration < cfg.max_iterations) {
    ++iteration;
    const Matrix theta_prev = theta;
    const Matrix tilde_prev = theta_tilde;

    theta = theta_update(theta_tilde, w1, s, cfg.rho);
    z = z_update(z_tilde, w3, lambda, cfg.rho);

    // With V pinned at zero the consensus set is {Theta = Z}; projecting the
    // shifted blocks onto it is their average.
    theta_tilde = 0.5 * ((theta + w1) + (z + w3));
    z_tilde = theta_tilde;

    w1 += theta - theta_tilde;
    w3 += z - z_tilde;

    check_finite(theta, "Theta", iteration);
    check_finite(z, "Z", iteration);

    IterationStats stats;
    stats.theta_rel_change = relative_change(theta, theta_prev);
    stats.primal_residual =
        std::sqrt((theta - theta_tilde).squaredNorm() + (z - z_tilde).squaredNorm());
    stats.dual_residual = cfg.rho * std::sqrt(2.0) * (theta_tilde - tilde_prev).norm();
    result.residual_history.push_back(stats);

    // The consensus block and duals first move at t = 2, which replays the
    // t = 1 Theta prox center exactly (tilde - w1 == Z_1 == I); the change
    // test is only meaningful from t = 3 on.
    if (iteration >= 3 && stats.theta_rel_change <= cfg.tau) {
      converged = true;
      break;
    }
  }

  result.theta_hat = SymmetricMatrix::symmetrized(theta);
  result.v_hat = Matrix::Zero(p, p);
  result.z_hat = SymmetricMatrix::symmetrized(z);
  result.iterations = iteration;
  result.converged = converged;
  const double trace_term = (s.mat().cwiseProduct(result.theta_hat.mat())).sum();
  result.objective = -log_det_pd(result.theta_hat.mat()) + trace_term +
                     lambda * l1_offdiag(result.z_hat.mat());
  return result;
}

nlohmann::json solve_result_to_json(const SolveResult& result) {
  const Eigen::Index p = result.theta_hat.dim();
  auto row_major = [p](const Matrix& m) {
    std::vector<double> flat;
    flat.reserve(static_cast<std::size_t>(p * p));
    for (Eigen::Index i = 0; i < p; ++i)
      for (Eigen::Index j = 0; j < p; ++j) flat.push_back(m(i, j));
    return flat;
  };
  return nlohmann::json{{"p", p},
                        {"theta", row_major(result.theta_hat.mat())},
                        {"v", row_major(result.v_hat)},
                        {"z", row_major(result.z_hat.mat())},
                        {"iterations", result.iterations},
                        {"converged", result.converged},
                        {"objective", result.objective}};
}

}  // namespace dhgl
