#pragma once

#include <stdexcept>
#include <vector>

#include "memwave/volterra.hpp"

namespace memwave {

enum class TimeScheme { Newmark, Trapezoidal };

struct Trajectory {
  std::vector<double> t;
  std::vector<Eigen::VectorXd> alpha;
  std::vector<Eigen::VectorXd> alphadot;
};

/// Product-integration weights mu_j = int_{t_j}^{t_{j+1}} K(t_n - s) ds =
/// P(t_n - t_j) - P(t_n - t_{j+1}) for j = 0..n-1 on a uniform grid.
/// They sum to P(t_n) exactly, and never evaluate K at 0.
inline std::vector<double> convolution_weights(const MemoryKernel& kernel,
                                               double dt, int n) {
  std::vector<double> mu(n);
  for (int j = 0; j < n; ++j)
    mu[j] = kernel.primitive((n - j) * dt) - kernel.primitive((n - j - 1) * dt);
  return mu;
}

/// Implicit time stepping for M a'' + S a - S int K a = F with the history
/// term by product integration against piecewise-constant midpoint values of
/// alpha. Both schemes treat the newest subinterval implicitly; the step
/// matrix stays SPD because the implicit convolution coefficient
/// c* = P(dt)/2 < kappa/2 < 1.
inline Trajectory time_step_solve(const SemidiscreteSystem& sys, int steps,
                                  TimeScheme scheme) {
  if (steps < 8) throw std::invalid_argument("time_step_solve needs N >= 8");
  const int m = sys.dim();
  const double dt = sys.T / steps;
  const double cstar = 0.5 * sys.kernel.primitive(dt);

  Trajectory tr;
  tr.t.resize(steps + 1);
  for (int i = 0; i <= steps; ++i) tr.t[i] = i * dt;
  tr.alpha.assign(steps + 1, Eigen::VectorXd::Zero(m));
  tr.alphadot.assign(steps + 1, Eigen::VectorXd::Zero(m));
  tr.alpha[0] = sys.alpha0;
  tr.alphadot[0] = sys.alphadot0;

  const SparseMat& M = sys.pair.M;
  const SparseMat& S = sys.pair.S;

  // history part of int_0^{t_{n+1}} K(t_{n+1}-s) alpha ds, with the unknown
  // alpha_{n+1} contribution (c* alpha_{n+1}) split off
  auto history = [&](int next) {
    Eigen::VectorXd H = Eigen::VectorXd::Zero(m);
    const auto mu = convolution_weights(sys.kernel, dt, next);
    for (int j = 0; j + 1 < next; ++j)
      H += mu[j] * 0.5 * (tr.alpha[j] + tr.alpha[j + 1]);
    if (next >= 1) H += mu[next - 1] * 0.5 * tr.alpha[next - 1];
    return H;
  };

  if (scheme == TimeScheme::Newmark) {
    // average acceleration: alpha_{n+1} = z + dt^2/4 a_{n+1}
    const SpdSolver msolve(M);
    Eigen::VectorXd acc =
        msolve.solve(sys.force(0.0) - S * sys.alpha0);
    SparseMat A = M + (dt * dt / 4.0) * (1.0 - cstar) * S;
    const SpdSolver step(A);
    for (int n = 0; n < steps; ++n) {
      const Eigen::VectorXd z =
          tr.alpha[n] + dt * tr.alphadot[n] + (dt * dt / 4.0) * acc;
      const Eigen::VectorXd H = history(n + 1);
      const Eigen::VectorXd rhs =
          sys.force(tr.t[n + 1]) - (1.0 - cstar) * (S * z) + S * H;
      const Eigen::VectorXd acc_next = step.solve(rhs);
      tr.alpha[n + 1] = z + (dt * dt / 4.0) * acc_next;
      tr.alphadot[n + 1] = tr.alphadot[n] + 0.5 * dt * (acc + acc_next);
      acc = acc_next;
    }
    return tr;
  }

  // trapezoidal rule on the first-order form, reduced to one SPD solve in
  // alpha_{n+1} per step
  SparseMat A = (2.0 / dt) * M + (dt / 2.0) * (1.0 - cstar) * S;
  const SpdSolver step(A);
  Eigen::VectorXd C = Eigen::VectorXd::Zero(m);  // int K alpha at t_n
  for (int n = 0; n < steps; ++n) {
    const Eigen::VectorXd H = history(n + 1);
    const Eigen::VectorXd rhs =
        (2.0 / dt) * (M * tr.alpha[n]) + 2.0 * (M * tr.alphadot[n]) +
        (dt / 2.0) * (sys.force(tr.t[n]) + sys.force(tr.t[n + 1]) -
                      S * tr.alpha[n] + S * C + S * H);
    tr.alpha[n + 1] = step.solve(rhs);
    tr.alphadot[n + 1] = (2.0 / dt) * (tr.alpha[n + 1] - tr.alpha[n]) - tr.alphadot[n];
    C = H + cstar * tr.alpha[n + 1];
  }
  return tr;
}

}  // namespace memwave
