#pragma once

#include "dhgl/penalty.hpp"

#include <json.hpp>

#include <vector>

namespace dhgl {

struct NonFiniteIterate : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct AdmmConfig {
  double rho = 2.5;          // augmented-Lagrangian weight, > 0
  double tau = 1e-7;         // relative stopping tolerance, > 0
  int max_iterations = 1000;

  void validate() const;
};

struct IterationStats {
  double theta_rel_change;  // ||Theta_t - Theta_{t-1}||_F^2 / ||Theta_{t-1}||_F^2
  double primal_residual;   // ||B - Btilde||_F over the three blocks
  double dual_residual;     // rho * ||Btilde_t - Btilde_{t-1}||_F
};

struct SolveResult {
  SymmetricMatrix theta_hat;
  Matrix v_hat;
  SymmetricMatrix z_hat;
  int iterations = 0;
  bool converged = false;
  double objective = 0.0;
  std::vector<IterationStats> residual_history;
};

nlohmann::json solve_result_to_json(const SolveResult& result);

/// Primal blocks B = (theta, v, z), consensus blocks Btilde, scaled duals W.
struct AdmmState {
  Matrix theta, v, z;
  Matrix theta_tilde, v_tilde, z_tilde;
  Matrix w1, w2, w3;
  int iteration = 0;

  static AdmmState initial(Eigen::Index p);
};

/// argmin_Theta { -log det Theta + trace(S Theta) + rho/2 ||Theta - theta_tilde + w1||_F^2 }.
/// Eigen-decompose theta_tilde - w1 - S/rho = U D U^T and map each eigenvalue
/// d to (d + sqrt(d^2 + 4/rho))/2, which is positive for every real d.
Matrix theta_update(const Matrix& theta_tilde, const Matrix& w1,
                    const SymmetricMatrix& s, double rho);

/// Soft-threshold the off-diagonal of z_tilde - w3 at lambda1/rho; the
/// diagonal is copied through unpenalized.
Matrix z_update(const Matrix& z_tilde, const Matrix& w3, double lambda1, double rho);

/// Column prox: group soft-threshold of the elementwise soft-threshold,
///   max(1 - (lambda_l2/rho) / ||S(c, lambda_l1/rho)||_2, 0) * S(c, lambda_l1/rho).
/// c is a full-length column with its diagonal position already zeroed.
Vector v_column_update(const Vector& c, double lambda_l1, double lambda_l2, double rho);

/// Projection of (B + W) onto the consensus set {Theta = V + V^T + Z};
/// overwrites the tilde blocks. With symmetric theta/z/w1/w3 the projected
/// blocks satisfy the constraint exactly.
void consensus_update(AdmmState& state, double rho);

/// W += B - Btilde for each of the three blocks.
void dual_update(AdmmState& state);

/// ADMM for the hub-penalized Gaussian log-likelihood problem. Starts every
/// block at the identity (duals at zero) and iterates primal, consensus and
/// dual updates until ||Theta_t - Theta_{t-1}||_F^2 / ||Theta_{t-1}||_F^2 <= tau
/// or max_iterations; `converged` records which. The returned theta_hat is
/// positive definite by construction of the theta update.
SolveResult solve(const SymmetricMatrix& s, const PenaltyConfig& penalty,
                  const AdmmConfig& cfg = {});

/// Graphical-lasso mode of the same machinery: V is pinned to zero, so the
/// consensus set degenerates to {Theta = Z} and the projection is the
/// average of the two shifted blocks. Solves
///   minimize -log det Theta + trace(S Theta) + lambda ||Theta - diag Theta||_1.
SolveResult solve_gl(const SymmetricMatrix& s, double lambda, const AdmmConfig& cfg = {});

}  // namespace dhgl
