#pragma once

#include <cmath>
#include <functional>
#include <vector>

#include "memwave/volterra.hpp"

namespace memwave {

struct PicardIterationRecord {
  int n = 0;
  double measured = 0.0;  // sup-grid |D^{n+1} - D^n|_inf
  double bound = 0.0;     // Z^{n+1} T^{n+1} / (n+1)! * Z0
};

/// Certified convergence record: the factorial bounds must dominate the
/// measured increments at every iteration (up to quadrature slack).
struct PicardCertificate {
  double Z = 0.0;
  double Z0 = 0.0;
  std::vector<PicardIterationRecord> iterations;

  bool dominated(double slack = 1e-9) const {
    for (const auto& it : iterations)
      if (it.measured > it.bound + slack) return false;
    return true;
  }
};

struct PicardResult {
  std::vector<double> grid;
  std::vector<Eigen::VectorXd> trajectory;  // D(t_i), size 2m
  bool converged = false;
  int iterations = 0;
  double last_increment = 0.0;
  PicardCertificate certificate;
};

struct PicardOptions {
  int max_iters = 60;
  double tol = 1e-10;
  /// Optional transient perturbation added to iterate 0 only (uniqueness
  /// probes feed a decaying disturbance here).
  std::function<Eigen::VectorXd(double)> perturb_iterate0;
};

/// Successive substitution D^{n+1}(t) = int_0^t Kc(t,s) D^n(s) ds + Fc(t)
/// on a uniform grid with composite trapezoidal sweeps.
inline PicardResult picard_solve(const VolterraIE& ie, int steps,
                                 const PicardOptions& opt = {}) {
  if (steps < 8) throw std::invalid_argument("picard_solve needs N >= 8");
  if (opt.tol <= 0.0) throw std::invalid_argument("picard_solve needs tol > 0");
  const int m = ie.dim();
  const double T = ie.final_time();
  const double dt = T / steps;

  PicardResult res;
  res.grid.resize(steps + 1);
  for (int i = 0; i <= steps; ++i) res.grid[i] = i * dt;

  const std::vector<Eigen::VectorXd> Fc = ie.forcing_on_grid(res.grid);
  std::vector<Eigen::VectorXd> D = Fc;  // D^0 = Fc
  if (opt.perturb_iterate0)
    for (int i = 0; i <= steps; ++i) D[i] += opt.perturb_iterate0(res.grid[i]);

  res.certificate.Z = bound_Z(ie.system());
  res.certificate.Z0 = bound_Z0(ie.system());

  std::vector<Eigen::VectorXd> next(steps + 1);
  const Eigen::MatrixXd& G = ie.minv_s();
  const MemoryKernel& kernel = ie.system().kernel;

  for (int n = 0; n < opt.max_iters; ++n) {
    // trapezoid weights: w_0 = w_i = dt/2, interior dt
    Eigen::VectorXd sum_a = Eigen::VectorXd::Zero(m);  // running sum w_j a_j
    Eigen::VectorXd sum_b = Eigen::VectorXd::Zero(m);  // running sum w_j b_j
    next[0] = Fc[0];
    for (int i = 1; i <= steps; ++i) {
      // I1 = int_0^{t_i} D via prefix trapezoid
      sum_a += 0.5 * dt * (D[i - 1].head(m) + D[i].head(m));
      sum_b += 0.5 * dt * (D[i - 1].tail(m) + D[i].tail(m));
      // I2_a = int_0^{t_i} P(t_i - s) a(s) ds (P(0) = 0 at s = t_i)
      Eigen::VectorXd weighted_a = Eigen::VectorXd::Zero(m);
      for (int j = 0; j < i; ++j) {
        const double w = (j == 0) ? 0.5 * dt : dt;
        weighted_a += w * kernel.primitive(res.grid[i] - res.grid[j]) * D[j].head(m);
      }
      next[i].resize(2 * m);
      next[i].head(m) = sum_b + Fc[i].head(m);
      next[i].tail(m) = G * (weighted_a - sum_a) + Fc[i].tail(m);
    }

    double inc = 0.0;
    for (int i = 0; i <= steps; ++i)
      inc = std::max(inc, (next[i] - D[i]).cwiseAbs().maxCoeff());
    const double bound = res.certificate.Z0 *
                         std::pow(res.certificate.Z * T, n + 1) /
                         std::tgamma(n + 2.0);
    res.certificate.iterations.push_back({n, inc, bound});
    D.swap(next);
    res.iterations = n + 1;
    res.last_increment = inc;
    if (inc <= opt.tol) {
      res.converged = true;
      break;
    }
  }
  res.trajectory = std::move(D);
  return res;
}

}  // namespace memwave
