#include "gyro/optimize.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <vector>

#include "gyro/errors.hpp"
#include "gyro/parallel.hpp"

namespace gyro::opt {

namespace {

constexpr double kArmijoC1 = 1e-4;
constexpr double kBacktrack = 0.5;
constexpr int kMaxHalvings = 60;

double probe(const Objective& f, const Eigen::VectorXd& x, Eigen::Index coord) {
  const double v = f(x);
  if (!std::isfinite(v)) {
    throw NumericalError("gradient probe failed: non-finite cost perturbing coordinate " +
                         std::to_string(coord));
  }
  return v;
}

// Central differences where the box allows, one-sided next to a bound.
Eigen::VectorXd bounded_gradient(const Objective& f, const Eigen::VectorXd& x, double fx,
                                 const std::optional<Box>& box, double h, unsigned threads) {
  const Eigen::Index n = x.size();
  Eigen::VectorXd grad(n);
  parallel_for(static_cast<std::size_t>(n), threads, [&](std::size_t idx) {
    const auto i = static_cast<Eigen::Index>(idx);
    const double step = h * std::max(std::abs(x(i)), 1.0);
    const bool room_up = !box || x(i) + step <= box->upper(i);
    const bool room_down = !box || x(i) - step >= box->lower(i);
    Eigen::VectorXd xp = x;
    if (room_up && room_down) {
      Eigen::VectorXd xm = x;
      xp(i) += step;
      xm(i) -= step;
      grad(i) = (probe(f, xp, i) - probe(f, xm, i)) / (2.0 * step);
    } else if (room_up) {
      xp(i) += step;
      grad(i) = (probe(f, xp, i) - fx) / step;
    } else {
      xp(i) -= step;
      grad(i) = (fx - probe(f, xp, i)) / step;
    }
  });
  return grad;
}

Eigen::VectorXd project(const Eigen::VectorXd& x, const std::optional<Box>& box) {
  if (!box) return x;
  return x.cwiseMax(box->lower).cwiseMin(box->upper);
}

// Gradient with components that push into an active bound removed.
Eigen::VectorXd projected_gradient(const Eigen::VectorXd& x, const Eigen::VectorXd& g,
                                   const std::optional<Box>& box) {
  if (!box) return g;
  Eigen::VectorXd pg = g;
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    if ((x(i) <= box->lower(i) && g(i) > 0.0) || (x(i) >= box->upper(i) && g(i) < 0.0)) {
      pg(i) = 0.0;
    }
  }
  return pg;
}

}  // namespace

Eigen::VectorXd finite_diff_gradient(const Objective& f, const Eigen::VectorXd& x, double h,
                                     unsigned threads) {
  return bounded_gradient(f, x, 0.0, std::nullopt, h, threads);
}

OptimizeResult quasi_newton_minimize(const Objective& f, const Eigen::VectorXd& x0,
                                     const std::optional<Box>& bounds,
                                     const QuasiNewtonOptions& options) {
  const Eigen::Index n = x0.size();
  if (bounds) {
    if (bounds->lower.size() != n || bounds->upper.size() != n) {
      throw ValidationError("bounds dimension does not match x0");
    }
    if ((x0.array() < bounds->lower.array()).any() || (x0.array() > bounds->upper.array()).any()) {
      throw ValidationError("infeasible start: x0 outside bounds");
    }
  }

  OptimizeResult result;
  result.x = x0;
  result.cost = f(x0);
  if (!std::isfinite(result.cost)) throw ValidationError("infeasible start: cost is not finite at x0");

  Eigen::VectorXd x = x0;
  double fx = result.cost;
  Eigen::VectorXd grad = bounded_gradient(f, x, fx, bounds, options.fd_step, options.threads);
  Eigen::MatrixXd inv_hessian = Eigen::MatrixXd::Identity(n, n);
  bool fresh_hessian = true;

  const auto log = [&](int it, const Eigen::VectorXd& pg) {
    if (options.on_iteration) options.on_iteration({it, fx, pg.norm(), x});
  };

  int it = 0;
  for (; it < options.max_iter; ++it) {
    const Eigen::VectorXd pg = projected_gradient(x, grad, bounds);
    log(it, pg);
    if (pg.norm() < options.gtol) {
      result.converged = true;
      result.reason = "gradient norm below gtol";
      break;
    }

    Eigen::VectorXd dir = -(inv_hessian * pg);
    if (bounds) {
      for (Eigen::Index i = 0; i < n; ++i) {
        if ((x(i) <= bounds->lower(i) && dir(i) < 0.0) ||
            (x(i) >= bounds->upper(i) && dir(i) > 0.0)) {
          dir(i) = 0.0;
        }
      }
    }
    if (!(dir.dot(pg) < 0.0)) {
      inv_hessian.setIdentity();
      fresh_hessian = true;
      dir = -pg;
    }

    double step = 1.0;
    Eigen::VectorXd x_new;
    double f_new = fx;
    bool accepted = false;
    for (int k = 0; k < kMaxHalvings; ++k, step *= kBacktrack) {
      x_new = project(x + step * dir, bounds);
      f_new = f(x_new);
      if (std::isfinite(f_new) && f_new <= fx + kArmijoC1 * grad.dot(x_new - x)) {
        accepted = true;
        break;
      }
    }
    if (!accepted) {
      if (!fresh_hessian) {
        inv_hessian.setIdentity();
        fresh_hessian = true;
        continue;
      }
      result.reason = "line search failed";
      break;
    }

    const Eigen::VectorXd s = x_new - x;
    const double f_old = fx;
    const Eigen::VectorXd grad_new =
        bounded_gradient(f, x_new, f_new, bounds, options.fd_step, options.threads);
    const Eigen::VectorXd y = grad_new - grad;
    x = x_new;
    fx = f_new;
    grad = grad_new;

    const double sy = s.dot(y);
    if (sy > 1e-12 * s.norm() * y.norm()) {
      const double rho = 1.0 / sy;
      const Eigen::MatrixXd eye = Eigen::MatrixXd::Identity(n, n);
      inv_hessian = (eye - rho * s * y.transpose()) * inv_hessian * (eye - rho * y * s.transpose()) +
                    rho * s * s.transpose();
      fresh_hessian = false;
    }

    if (std::abs(f_old - fx) <= options.ftol * std::max(std::abs(f_old), std::abs(fx))) {
      ++it;
      log(it, projected_gradient(x, grad, bounds));
      result.converged = true;
      result.reason = "relative cost change below ftol";
      break;
    }
  }
  if (it >= options.max_iter && result.reason.empty()) result.reason = "max_iter reached";

  result.x = x;
  result.cost = fx;
  result.iterations = it;
  return result;
}

}  // namespace gyro::opt
