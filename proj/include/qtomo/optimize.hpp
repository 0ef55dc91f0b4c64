#pragma once

// Quasi-Newton minimizer used by the likelihood fit. Dimension is small
// (16), so a dense inverse-Hessian BFGS with Armijo backtracking is enough.

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace qtomo {

struct MinimizerOptions {
  int max_iterations = 5000;
  /// Stop once the cost fell by less than this fraction over `window` steps.
  double relative_tolerance = 1e-10;
  int window = 50;
  /// Stop when ‖∇f‖∞ ≤ gradient_tolerance · max(1, |f|).
  double gradient_tolerance = 1e-12;
};

struct MinimizerResult {
  Eigen::VectorXd x;
  double cost = 0.0;
  int iterations = 0;
  bool converged = false;
  std::string stop_reason;
  /// Cost after every accepted step, starting with the initial point.
  std::vector<double> cost_trace;
};

/// `f(x, grad)` returns the cost and, when `grad` is non-null, writes the
/// gradient. Accepted steps never increase the cost.
template <class Objective>
MinimizerResult minimize_bfgs(Objective&& f, Eigen::VectorXd x, const MinimizerOptions& opt = {}) {
  const Eigen::Index n = x.size();
  Eigen::VectorXd g(n);
  double fx = f(x, &g);

  MinimizerResult res;
  res.cost_trace.push_back(fx);
  Eigen::MatrixXd h = Eigen::MatrixXd::Identity(n, n);
  bool fresh_h = true;

  auto small_gradient = [&](const Eigen::VectorXd& grad, double cost) {
    return grad.lpNorm<Eigen::Infinity>() <= opt.gradient_tolerance * std::max(1.0, std::abs(cost));
  };

  for (int it = 0; it < opt.max_iterations; ++it) {
    if (small_gradient(g, fx)) {
      res.converged = true;
      res.stop_reason = "gradient";
      break;
    }
    Eigen::VectorXd dir = -h * g;
    double slope = g.dot(dir);
    if (!(slope < 0.0)) {
      h.setIdentity();
      fresh_h = true;
      dir = -g;
      slope = -g.squaredNorm();
    }

    double step = 1.0;
    Eigen::VectorXd x_new(n), g_new(n);
    double f_new = fx;
    bool accepted = false;
    for (int k = 0; k < 60; ++k) {
      x_new = x + step * dir;
      f_new = f(x_new, &g_new);
      if (std::isfinite(f_new) && f_new <= fx + 1e-4 * step * slope && f_new <= fx) {
        accepted = true;
        break;
      }
      step *= 0.5;
    }
    if (!accepted) {
      if (!fresh_h) {
        // Stale curvature model; retry from steepest descent.
        h.setIdentity();
        fresh_h = true;
        continue;
      }
      res.converged = true;
      res.stop_reason = "no further decrease at machine precision";
      break;
    }

    const Eigen::VectorXd s = x_new - x;
    const Eigen::VectorXd y = g_new - g;
    const double sy = s.dot(y);
    if (sy > 1e-14 * s.norm() * y.norm()) {
      if (fresh_h) h *= sy / y.squaredNorm();
      const double rho = 1.0 / sy;
      const Eigen::MatrixXd eye = Eigen::MatrixXd::Identity(n, n);
      h = (eye - rho * s * y.transpose()) * h * (eye - rho * y * s.transpose()) +
          rho * s * s.transpose();
      fresh_h = false;
    }
    x = x_new;
    g = g_new;
    fx = f_new;
    res.iterations = it + 1;
    res.cost_trace.push_back(fx);

    const auto k = res.cost_trace.size();
    if (k > static_cast<std::size_t>(opt.window)) {
      const double before = res.cost_trace[k - 1 - opt.window];
      if (before - fx <= opt.relative_tolerance * std::abs(fx)) {
        res.converged = true;
        res.stop_reason = "relative decrease";
        break;
      }
    }
  }
  if (res.stop_reason.empty()) res.stop_reason = "iteration limit";
  res.x = x;
  res.cost = fx;
  return res;
}

}  // namespace qtomo
