#pragma once

#include <cmath>
#include <functional>
#include <limits>
#include <optional>

#include <Eigen/Cholesky>
#include <Eigen/Core>

namespace slinv {

struct LmOptions {
  int max_iterations = 50;
  double initial_damping = 1e-3;
  /// Central-difference step, relative to max(1, |x_j|).
  double fd_step = 1e-6;
  /// Stop once the cost of the leading data_rows residuals drops to this value.
  double cost_tolerance = 0.0;
  /// Residual rows that count toward cost_tolerance; -1 means all of them.
  /// Trailing rows (a penalty, say) still shape the steps.
  Eigen::Index data_rows = -1;
  /// Stop once the accepted step is this small relative to |x|.
  double step_tolerance = 1e-12;
};

struct LmResult {
  Eigen::VectorXd x;
  double cost = std::numeric_limits<double>::infinity();
  int iterations = 0;
  int evaluations = 0;
};

/// Residual callback: returns nullopt when the model cannot be evaluated at x
/// (the step is then rejected like an increase in cost).
using ResidualFn = std::function<std::optional<Eigen::VectorXd>(const Eigen::VectorXd&)>;

/// Damped Gauss-Newton with Marquardt diagonal scaling and a central
/// finite-difference Jacobian. Only steps that lower the cost are accepted.
inline LmResult levenberg_marquardt(const ResidualFn& residuals, Eigen::VectorXd x0,
                                    const LmOptions& opts) {
  LmResult out;
  out.x = std::move(x0);
  auto r0 = residuals(out.x);
  ++out.evaluations;
  if (!r0) return out;
  Eigen::VectorXd r = *r0;
  out.cost = r.squaredNorm();

  const Eigen::Index n = out.x.size();
  double damping = opts.initial_damping;
  auto data_cost = [&](const Eigen::VectorXd& v) {
    return opts.data_rows < 0 ? v.squaredNorm() : v.head(opts.data_rows).squaredNorm();
  };

  while (out.iterations < opts.max_iterations && data_cost(r) > opts.cost_tolerance) {
    ++out.iterations;

    Eigen::MatrixXd jac(r.size(), n);
    for (Eigen::Index j = 0; j < n; ++j) {
      const double h = opts.fd_step * std::max(1.0, std::abs(out.x[j]));
      Eigen::VectorXd xp = out.x, xm = out.x;
      xp[j] += h;
      xm[j] -= h;
      const auto rp = residuals(xp);
      const auto rm = residuals(xm);
      out.evaluations += 2;
      if (rp && rm)
        jac.col(j) = (*rp - *rm) / (2.0 * h);
      else if (rp)
        jac.col(j) = (*rp - r) / h;
      else if (rm)
        jac.col(j) = (r - *rm) / h;
      else
        jac.col(j).setZero();
    }

    const Eigen::MatrixXd jtj = jac.transpose() * jac;
    const Eigen::VectorXd gradient = jac.transpose() * r;
    Eigen::VectorXd scale = jtj.diagonal().cwiseMax(1e-12 * std::max(1.0, jtj.diagonal().maxCoeff()));

    bool accepted = false;
    double step_norm = 0.0;
    while (!accepted && damping < 1e16) {
      Eigen::MatrixXd a = jtj;
      a.diagonal() += damping * scale;
      const Eigen::VectorXd delta = a.ldlt().solve(-gradient);
      const Eigen::VectorXd trial = out.x + delta;
      const auto rt = residuals(trial);
      ++out.evaluations;
      if (rt && rt->allFinite() && rt->squaredNorm() < out.cost) {
        out.x = trial;
        r = *rt;
        out.cost = r.squaredNorm();
        step_norm = delta.norm();
        damping = std::max(damping / 3.0, 1e-12);
        accepted = true;
      } else {
        damping *= 4.0;
      }
    }
    if (!accepted) break;
    if (step_norm <= opts.step_tolerance * (1.0 + out.x.norm())) break;
  }
  return out;
}

}  // namespace slinv
