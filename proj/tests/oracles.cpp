#include "oracles.hpp"

#include <cmath>
#include <limits>
#include <vector>

namespace oracles {

namespace {

double soft(double a, double b) {
  const double m = std::abs(a) - b;
  if (m <= 0) return 0.0;
  return a > 0 ? m : -m;
}

}  // namespace

double prox_objective(const Eigen::VectorXd& v, const Eigen::VectorXd& c, double l1, double l2) {
  double quad = 0, abs_sum = 0, sq_sum = 0;
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    const double d = v(i) - c(i);
    quad += d * d;
    abs_sum += std::abs(v(i));
    sq_sum += v(i) * v(i);
  }
  return 0.5 * quad + l1 * abs_sum + l2 * std::sqrt(sq_sum);
}

Eigen::VectorXd prox_oracle(const Eigen::VectorXd& c, double l1, double l2) {
  Eigen::VectorXd direction(c.size());
  for (Eigen::Index i = 0; i < c.size(); ++i) direction(i) = soft(c(i), l1);

  auto value_at = [&](double gamma) { return prox_objective(gamma * direction, c, l1, l2); };

  double lo = 0.0, hi = 1.2;
  double best_gamma = 0.0;
  for (int level = 0; level < 3; ++level) {
    const int points = level == 0 ? 200000 : 20000;
    const double step = (hi - lo) / points;
    double best_value = std::numeric_limits<double>::infinity();
    for (int k = 0; k <= points; ++k) {
      const double gamma = lo + step * k;
      const double value = value_at(gamma);
      if (value < best_value) {
        best_value = value;
        best_gamma = gamma;
      }
    }
    lo = std::max(0.0, best_gamma - 2 * step);
    hi = best_gamma + 2 * step;
  }
  return best_gamma * direction;
}

double theta_scalar_oracle(double d, double rho) {
  auto value_at = [&](double x) { return -std::log(x) + 0.5 * rho * (x - d) * (x - d); };

  double lo = 1e-12;
  double hi = 2.0 * (std::abs(d) + 2.0 / std::sqrt(rho) + 1.0);
  double best_x = lo;
  for (int level = 0; level < 6; ++level) {
    const int points = 4000;
    const double step = (hi - lo) / points;
    double best_value = std::numeric_limits<double>::infinity();
    for (int k = 0; k <= points; ++k) {
      const double x = lo + step * k;
      if (x <= 0) continue;
      const double value = value_at(x);
      if (value < best_value) {
        best_value = value;
        best_x = x;
      }
    }
    lo = std::max(1e-14, best_x - 2 * step);
    hi = best_x + 2 * step;
  }
  return best_x;
}

namespace {

struct SmoothedProblem {
  const Eigen::MatrixXd& s;
  const dhgl::PenaltyConfig& cfg;
  double mu;

  // True (unsmoothed) objective; +inf when V + V^T + Z is not PD.
  double true_value(const Eigen::MatrixXd& v, const Eigen::MatrixXd& z) const {
    const Eigen::Index p = s.rows();
    const Eigen::MatrixXd w = v + v.transpose() + z;
    Eigen::LLT<Eigen::MatrixXd> llt(0.5 * (w + w.transpose()));
    if (llt.info() != Eigen::Success) return std::numeric_limits<double>::infinity();
    const double log_det =
        2.0 * Eigen::MatrixXd(llt.matrixL()).diagonal().array().log().sum();
    double value = -log_det + (s.cwiseProduct(w)).sum();
    for (Eigen::Index i = 0; i < p; ++i)
      for (Eigen::Index j = 0; j < p; ++j)
        if (i != j) value += cfg.lambda1() * std::abs(z(i, j));
    for (Eigen::Index j = 0; j < p; ++j) {
      const bool in_d = cfg.is_discriminated(static_cast<int>(j));
      const double l1 = in_d ? cfg.lambda4() : cfg.lambda2();
      const double l2 = in_d ? cfg.lambda5() : cfg.lambda3();
      double abs_sum = 0, sq_sum = 0;
      for (Eigen::Index i = 0; i < p; ++i) {
        if (i == j) continue;
        abs_sum += std::abs(v(i, j));
        sq_sum += v(i, j) * v(i, j);
      }
      value += l1 * abs_sum + l2 * std::sqrt(sq_sum);
    }
    return value;
  }

  double smooth_value(const Eigen::MatrixXd& v, const Eigen::MatrixXd& z) const {
    const Eigen::Index p = s.rows();
    const Eigen::MatrixXd w = v + v.transpose() + z;
    Eigen::LLT<Eigen::MatrixXd> llt(0.5 * (w + w.transpose()));
    if (llt.info() != Eigen::Success) return std::numeric_limits<double>::infinity();
    const double log_det =
        2.0 * Eigen::MatrixXd(llt.matrixL()).diagonal().array().log().sum();
    double value = -log_det + (s.cwiseProduct(w)).sum();
    const double mu2 = mu * mu;
    for (Eigen::Index i = 0; i < p; ++i)
      for (Eigen::Index j = 0; j < p; ++j)
        if (i != j) value += cfg.lambda1() * std::sqrt(z(i, j) * z(i, j) + mu2);
    for (Eigen::Index j = 0; j < p; ++j) {
      const bool in_d = cfg.is_discriminated(static_cast<int>(j));
      const double l1 = in_d ? cfg.lambda4() : cfg.lambda2();
      const double l2 = in_d ? cfg.lambda5() : cfg.lambda3();
      double sq_sum = 0;
      for (Eigen::Index i = 0; i < p; ++i) {
        if (i == j) continue;
        value += l1 * std::sqrt(v(i, j) * v(i, j) + mu2);
        sq_sum += v(i, j) * v(i, j);
      }
      value += l2 * std::sqrt(sq_sum + mu2);
    }
    return value;
  }

  void gradients(const Eigen::MatrixXd& v, const Eigen::MatrixXd& z,
                 Eigen::MatrixXd& grad_v, Eigen::MatrixXd& grad_z) const {
    const Eigen::Index p = s.rows();
    const Eigen::MatrixXd w = v + v.transpose() + z;
    const Eigen::MatrixXd w_inv = w.inverse();
    const Eigen::MatrixXd g = s - 0.5 * (w_inv + w_inv.transpose());
    grad_v = 2.0 * g;
    grad_z = g;
    const double mu2 = mu * mu;
    for (Eigen::Index i = 0; i < p; ++i)
      for (Eigen::Index j = 0; j < p; ++j)
        if (i != j) grad_z(i, j) += cfg.lambda1() * z(i, j) / std::sqrt(z(i, j) * z(i, j) + mu2);
    for (Eigen::Index j = 0; j < p; ++j) {
      const bool in_d = cfg.is_discriminated(static_cast<int>(j));
      const double l1 = in_d ? cfg.lambda4() : cfg.lambda2();
      const double l2 = in_d ? cfg.lambda5() : cfg.lambda3();
      double sq_sum = 0;
      for (Eigen::Index i = 0; i < p; ++i)
        if (i != j) sq_sum += v(i, j) * v(i, j);
      const double group = std::sqrt(sq_sum + mu2);
      for (Eigen::Index i = 0; i < p; ++i) {
        if (i == j) continue;
        grad_v(i, j) += l1 * v(i, j) / std::sqrt(v(i, j) * v(i, j) + mu2);
        grad_v(i, j) += l2 * v(i, j) / group;
      }
    }
  }
};

}  // namespace

double descent_oracle_objective(const Eigen::MatrixXd& s, const dhgl::PenaltyConfig& cfg,
                                int stage_iterations) {
  const Eigen::Index p = s.rows();
  Eigen::MatrixXd v = Eigen::MatrixXd::Zero(p, p);
  Eigen::MatrixXd z = Eigen::MatrixXd::Identity(p, p);

  double best_true = std::numeric_limits<double>::infinity();
  for (const double mu : {1e-2, 1e-3, 1e-4, 1e-6, 1e-8}) {
    SmoothedProblem problem{s, cfg, mu};
    double step = 0.1;
    double current = problem.smooth_value(v, z);
    Eigen::MatrixXd grad_v(p, p), grad_z(p, p);
    for (int iter = 0; iter < stage_iterations; ++iter) {
      problem.gradients(v, z, grad_v, grad_z);
      const double grad_norm2 = grad_v.squaredNorm() + grad_z.squaredNorm();
      if (grad_norm2 < mu * mu * 1e-6) break;

      // Armijo backtracking with a gently growing initial step.
      double t = step;
      bool moved = false;
      for (int back = 0; back < 60; ++back) {
        const Eigen::MatrixXd v_next = v - t * grad_v;
        Eigen::MatrixXd z_next = z - t * grad_z;
        z_next = 0.5 * (z_next + z_next.transpose());
        const double candidate = problem.smooth_value(v_next, z_next);
        if (candidate <= current - 0.25 * t * grad_norm2) {
          v = v_next;
          z = z_next;
          current = candidate;
          step = t * 1.5;
          moved = true;
          break;
        }
        t *= 0.5;
      }
      if (!moved) break;
    }
    best_true = std::min(best_true, problem.true_value(v, z));
  }

  // Snap near-zero entries and keep the value if it helps; the smoothed
  // minimizer hovers at O(mu) instead of exact zero.
  for (const double threshold : {1e-8, 1e-7, 1e-6}) {
    Eigen::MatrixXd v_snap = v;
    Eigen::MatrixXd z_snap = z;
    for (Eigen::Index i = 0; i < p; ++i)
      for (Eigen::Index j = 0; j < p; ++j) {
        if (i == j) continue;
        if (std::abs(v_snap(i, j)) < threshold) v_snap(i, j) = 0.0;
        if (std::abs(z_snap(i, j)) < threshold) z_snap(i, j) = 0.0;
      }
    SmoothedProblem exact{s, cfg, 0.0};
    best_true = std::min(best_true, exact.true_value(v_snap, z_snap));
  }
  return best_true;
}

}  // namespace oracles
