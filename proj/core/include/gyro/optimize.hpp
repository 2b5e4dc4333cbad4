#pragma once

#include <Eigen/Core>
#include <functional>
#include <optional>
#include <string>

namespace gyro::opt {

using Objective = std::function<double(const Eigen::VectorXd&)>;

// Central differences with per-coordinate step h * max(|x_i|, 1). Probes
// run on up to `threads` threads, so `f` must be safe to call concurrently.
// Throws NumericalError("gradient probe failed ...") on a non-finite probe.
Eigen::VectorXd finite_diff_gradient(const Objective& f, const Eigen::VectorXd& x,
                                     double h = 1e-6, unsigned threads = 1);

struct Box {
  Eigen::VectorXd lower;
  Eigen::VectorXd upper;
};

struct IterationLog {
  int iteration = 0;
  double cost = 0.0;
  double gradient_norm = 0.0;
  Eigen::VectorXd x;
};

struct QuasiNewtonOptions {
  int max_iter = 200;
  double gtol = 1e-8;   // projected gradient norm
  double ftol = 1e-12;  // relative cost change between iterations
  double fd_step = 1e-6;
  unsigned threads = 1;
  std::function<void(const IterationLog&)> on_iteration;
};

struct OptimizeResult {
  Eigen::VectorXd x;
  double cost = 0.0;
  int iterations = 0;
  bool converged = false;
  std::string reason;
};

// BFGS on the inverse Hessian with Armijo backtracking (c1 = 1e-4, factor
// 0.5); iterates are projected onto `bounds` after every step and the
// gradient is taken one-sided at active bounds. The returned cost is never
// above f(x0). Throws ValidationError("infeasible start") when f(x0) is not
// finite or x0 lies outside the bounds.
OptimizeResult quasi_newton_minimize(const Objective& f, const Eigen::VectorXd& x0,
                                     const std::optional<Box>& bounds = std::nullopt,
                                     const QuasiNewtonOptions& options = {});

}  // namespace gyro::opt
