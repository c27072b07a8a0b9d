#pragma once

#include "dhgl/linalg.hpp"

#include <json.hpp>

#include <set>

namespace dhgl {

/// Tuning parameters of the hub penalty. Columns of V listed in
/// `discriminated` are shrunk with (lambda4, lambda5), all other columns with
/// (lambda2, lambda3), and lambda1 controls the sparsity of Z. The group norm
/// exponent is fixed at q = 2 (so its conjugate s = 2).
///
/// Construction enforces lambda4 <= lambda2 and lambda5 <= lambda3 and
/// nonnegativity of every parameter; violations throw instead of clamping.
class PenaltyConfig {
 public:
  PenaltyConfig() = default;  // all-zero penalty, empty discrimination set

  PenaltyConfig(double lambda1, double lambda2, double lambda3,
                double lambda4, double lambda5,
                std::set<int> discriminated = {});

  /// Hub penalty with no discriminated columns; lambda4/lambda5 mirror
  /// lambda2/lambda3 so they are valid but never selected.
  static PenaltyConfig hub(double lambda1, double lambda2, double lambda3);

  double lambda1() const { return lambda1_; }
  double lambda2() const { return lambda2_; }
  double lambda3() const { return lambda3_; }
  double lambda4() const { return lambda4_; }
  double lambda5() const { return lambda5_; }
  const std::set<int>& discriminated() const { return discriminated_; }
  bool is_discriminated(int j) const { return discriminated_.count(j) > 0; }

  PenaltyConfig with_discriminated(std::set<int> d) const;
  PenaltyConfig with_lambda45(double lambda4, double lambda5) const;

  /// Checks that every discriminated index lies in [0, p).
  void validate_dimension(Eigen::Index p) const;

  static constexpr int q = 2;

 private:
  double lambda1_ = 0, lambda2_ = 0, lambda3_ = 0, lambda4_ = 0, lambda5_ = 0;
  std::set<int> discriminated_;
};

void to_json(nlohmann::json& j, const PenaltyConfig& cfg);
void from_json(const nlohmann::json& j, PenaltyConfig& cfg);

enum class LambdaRegion {
  ZeroVOutsideD,  // lambda1 below the lower bound: V is zero outside D at the optimum
  DiagonalZ,      // lambda1 above the upper bound: Z is diagonal at the optimum
  Interior,       // both V and Z can be non-diagonal (boundaries count as Interior)
};

struct RegionVerdict {
  LambdaRegion classification;
  double lower_bound;  // lambda2/2 + lambda3 / (2 sqrt(p-1))
  double upper_bound;  // (lambda2 + lambda3) / 2
};

RegionVerdict classify_lambda_region(const PenaltyConfig& cfg, int p);

/// lambda1 ||Z - diag Z||_1
///   + sum_{j not in D} lambda2 ||(V - diag V)_j||_1 + lambda3 ||(V - diag V)_j||_2
///   + sum_{j in D}     lambda4 ||(V - diag V)_j||_1 + lambda5 ||(V - diag V)_j||_2
double penalty_value(const Matrix& v, const SymmetricMatrix& z, const PenaltyConfig& cfg);

/// -log det Theta + trace(S Theta) + penalty_value(v, z, cfg).
/// Theta must be positive definite. The decomposition Theta = V + V^T + Z is
/// only checked loosely (warn beyond 1e-6 Frobenius) because ADMM iterates
/// satisfy it only in the limit.
double objective(const SymmetricMatrix& s, const SymmetricMatrix& theta,
                 const Matrix& v, const SymmetricMatrix& z, const PenaltyConfig& cfg);

}  // namespace dhgl
