#include "dhgl/penalty.hpp"

#include <cmath>
#include <iostream>

namespace dhgl {

PenaltyConfig::PenaltyConfig(double lambda1, double lambda2, double lambda3,
                             double lambda4, double lambda5,
                             std::set<int> discriminated)
    : lambda1_(lambda1),
      lambda2_(lambda2),
      lambda3_(lambda3),
      lambda4_(lambda4),
      lambda5_(lambda5),
      discriminated_(std::move(discriminated)) {
  if (lambda1 < 0 || lambda2 < 0 || lambda3 < 0 || lambda4 < 0 || lambda5 < 0)
    throw std::invalid_argument("PenaltyConfig: lambdas must be nonnegative");
  if (lambda4 > lambda2)
    throw std::invalid_argument("PenaltyConfig: lambda4 must not exceed lambda2");
  if (lambda5 > lambda3)
    throw std::invalid_argument("PenaltyConfig: lambda5 must not exceed lambda3");
  for (int j : discriminated_)
    if (j < 0) throw std::invalid_argument("PenaltyConfig: negative index in discriminated set");
}

PenaltyConfig PenaltyConfig::hub(double lambda1, double lambda2, double lambda3) {
  return PenaltyConfig(lambda1, lambda2, lambda3, lambda2, lambda3, {});
}

PenaltyConfig PenaltyConfig::with_discriminated(std::set<int> d) const {
  return PenaltyConfig(lambda1_, lambda2_, lambda3_, lambda4_, lambda5_, std::move(d));
}

PenaltyConfig PenaltyConfig::with_lambda45(double lambda4, double lambda5) const {
  return PenaltyConfig(lambda1_, lambda2_, lambda3_, lambda4, lambda5, discriminated_);
}

void PenaltyConfig::validate_dimension(Eigen::Index p) const {
  for (int j : discriminated_)
    if (j < 0 || j >= p)
      throw std::invalid_argument("PenaltyConfig: discriminated index " + std::to_string(j) +
                                  " out of range for p=" + std::to_string(p));
}

void to_json(nlohmann::json& j, const PenaltyConfig& cfg) {
  j = nlohmann::json{{"lambda1", cfg.lambda1()}, {"lambda2", cfg.lambda2()},
                     {"lambda3", cfg.lambda3()}, {"lambda4", cfg.lambda4()},
                     {"lambda5", cfg.lambda5()},
                     {"discriminated", cfg.discriminated()},
                     {"q", PenaltyConfig::q}};
}

void from_json(const nlohmann::json& j, PenaltyConfig& cfg) {
  if (j.contains("q") && j.at("q").get<int>() != 2)
    throw std::invalid_argument("PenaltyConfig: only q = 2 is supported");
  std::set<int> d;
  if (j.contains("discriminated")) d = j.at("discriminated").get<std::set<int>>();
  const double l2 = j.at("lambda2").get<double>();
  const double l3 = j.at("lambda3").get<double>();
  cfg = PenaltyConfig(j.at("lambda1").get<double>(), l2, l3,
                      j.value("lambda4", l2), j.value("lambda5", l3), std::move(d));
}

RegionVerdict classify_lambda_region(const PenaltyConfig& cfg, int p) {
  if (p < 2) throw std::invalid_argument("classify_lambda_region: p must be >= 2");
  // s = 2 is the conjugate of the fixed q = 2.
  const double lower = cfg.lambda2() / 2.0 + cfg.lambda3() / (2.0 * std::sqrt(static_cast<double>(p - 1)));
  const double upper = (cfg.lambda2() + cfg.lambda3()) / 2.0;
  LambdaRegion region = LambdaRegion::Interior;
  if (cfg.lambda1() < lower)
    region = LambdaRegion::ZeroVOutsideD;
  else if (cfg.lambda1() > upper)
    region = LambdaRegion::DiagonalZ;
  return RegionVerdict{region, lower, upper};
}

double penalty_value(const Matrix& v, const SymmetricMatrix& z, const PenaltyConfig& cfg) {
  const Eigen::Index p = z.dim();
  if (v.rows() != p || v.cols() != p)
    throw DimensionMismatch("penalty_value: V and Z dimensions differ");
  cfg.validate_dimension(p);

  double total = cfg.lambda1() * l1_offdiag(z.mat());
  for (Eigen::Index j = 0; j < p; ++j) {
    const bool in_d = cfg.is_discriminated(static_cast<int>(j));
    const double l1 = in_d ? cfg.lambda4() : cfg.lambda2();
    const double l2 = in_d ? cfg.lambda5() : cfg.lambda3();
    total += l1 * column_l1_offdiag(v, j) + l2 * column_l2_offdiag(v, j);
  }
  return total;
}

double objective(const SymmetricMatrix& s, const SymmetricMatrix& theta,
                 const Matrix& v, const SymmetricMatrix& z, const PenaltyConfig& cfg) {
  const Eigen::Index p = theta.dim();
  if (s.dim() != p || z.dim() != p || v.rows() != p || v.cols() != p)
    throw DimensionMismatch("objective: dimension mismatch");

  const EigenDecomposition eig = sym_eigen(theta);
  if (eig.values.minCoeff() <= 0.0)
    throw NotPositiveDefinite("objective: Theta is not positive definite");
  const double log_det = eig.values.array().log().sum();

  const double gap = (theta.mat() - v - v.transpose() - z.mat()).norm();
  if (gap > 1e-6)
    std::cerr << "warning: objective: Theta deviates from V + V^T + Z by " << gap
              << " (Frobenius)\n";

  const double trace_term = (s.mat().cwiseProduct(theta.mat())).sum();
  return -log_det + trace_term + penalty_value(v, z, cfg);
}

}  // namespace dhgl
