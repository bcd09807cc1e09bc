#pragma once

#include <cmath>
#include <limits>
#include <ostream>
#include <string>
#include <vector>

#include "memwave/manufactured.hpp"
#include "memwave/timestep.hpp"

namespace memwave {

struct ErrorNorms {
  double l2_displacement = 0.0;
  double energy_displacement = 0.0;
  double l2_velocity = 0.0;
};

namespace detail {
/// Apply fn(x, w) over a quadrature covering (0,1): element-wise for FEM,
/// composite panels for the spectral basis.
template <typename Fn>
void quadrature_sweep(const GalerkinSpace& sp, Fn&& fn) {
  const GaussRule rule = gauss_legendre(7);
  if (sp.kind() == SpaceKind::Fem1D) {
    for (int e = 0; e < sp.num_elements(); ++e) {
      const double xa = sp.mesh1d().vertices[e], xb = sp.mesh1d().vertices[e + 1];
      for (std::size_t q = 0; q < rule.nodes.size(); ++q) {
        const double x = 0.5 * (xa + xb) + 0.5 * (xb - xa) * rule.nodes[q];
        fn(x, 0.5 * (xb - xa) * rule.weights[q]);
      }
    }
    return;
  }
  const int panels = std::max(64, 4 * sp.dimension());
  for (int p = 0; p < panels; ++p) {
    const double xa = double(p) / panels, xb = double(p + 1) / panels;
    for (std::size_t q = 0; q < rule.nodes.size(); ++q) {
      const double x = 0.5 * (xa + xb) + 0.5 * (xb - xa) * rule.nodes[q];
      fn(x, 0.5 * (xb - xa) * rule.weights[q]);
    }
  }
}
}  // namespace detail

/// L2/energy displacement error and L2 velocity error at time T against the
/// analytic solution (1D spaces).
inline ErrorNorms error_norms(const GalerkinSpace& sp,
                              const Eigen::VectorXd& alpha,
                              const Eigen::VectorXd& alphadot,
                              const ManufacturedProblem& prob, double T) {
  ErrorNorms n;
  detail::quadrature_sweep(sp, [&](double x, double w) {
    const double eu = sp.evaluate(alpha, x) - prob.u(x, T);
    const double ex = sp.evaluate_deriv(alpha, x) - prob.u_x(x, T);
    const double ev = sp.evaluate(alphadot, x) - prob.u_t(x, T);
    n.l2_displacement += w * eu * eu;
    n.energy_displacement += w * ex * ex;
    n.l2_velocity += w * ev * ev;
  });
  n.l2_displacement = std::sqrt(n.l2_displacement);
  n.energy_displacement = std::sqrt(n.energy_displacement);
  n.l2_velocity = std::sqrt(n.l2_velocity);
  return n;
}

struct ErrorSplit {
  double theta_l2 = 0.0;   // ||u_h - R_h u||
  double theta_energy = 0.0;
  double omega_l2 = 0.0;   // ||R_h u - u||
  double omega_energy = 0.0;
  double e_l2 = 0.0;       // ||u_h - u||
};

/// Error split e = theta + omega about the Ritz projection of the exact
/// solution at time T.
inline ErrorSplit error_split(const GalerkinSpace& sp, const AssembledPair& pair,
                              const Eigen::VectorXd& alpha,
                              const ManufacturedProblem& prob, double T) {
  const Eigen::VectorXd rh = ritz_project(sp, pair, [&](double x, double) {
    return std::array<double, 2>{prob.u_x(x, T), 0.0};
  });
  const Eigen::VectorXd th = alpha - rh;
  ErrorSplit s;
  s.theta_l2 = std::sqrt(th.dot(pair.M * th));
  s.theta_energy = std::sqrt(th.dot(pair.S * th));
  double w2 = 0.0, wv2 = 0.0, e2 = 0.0;
  detail::quadrature_sweep(sp, [&](double x, double w) {
    const double om = sp.evaluate(rh, x) - prob.u(x, T);
    const double omx = sp.evaluate_deriv(rh, x) - prob.u_x(x, T);
    const double e = sp.evaluate(alpha, x) - prob.u(x, T);
    w2 += w * om * om;
    wv2 += w * omx * omx;
    e2 += w * e * e;
  });
  s.omega_l2 = std::sqrt(w2);
  s.omega_energy = std::sqrt(wv2);
  s.e_l2 = std::sqrt(e2);
  return s;
}

enum class DtPolicy { MatchH, HPow32, Fixed };

struct ConvergenceOptions {
  int degree = 1;          // element degree (l = degree + 1)
  int levels = 4;
  int base_elements = 8;
  double T = 1.0;
  DtPolicy dt_policy = DtPolicy::MatchH;
  int fixed_steps = 2048;
  int min_steps = 8;
  TimeScheme scheme = TimeScheme::Newmark;
  InitialProjection init_u0 = InitialProjection::Ritz;
  InitialProjection init_u1 = InitialProjection::L2;
};

struct ConvergenceLevel {
  int level = 0;
  double h = 0.0;
  int steps = 0;
  bool ok = false;
  std::string error;
  double e_l2 = 0.0, e_h1 = 0.0, e_vel = 0.0;
  double rate_l2 = std::numeric_limits<double>::quiet_NaN();
  double rate_h1 = std::numeric_limits<double>::quiet_NaN();
  double rate_vel = std::numeric_limits<double>::quiet_NaN();
  double sup_l2 = 0.0;  // max L2 displacement error over the time grid
};

/// Refinement study: per-level errors at t = T and observed rates against
/// the optimal targets (l, l-1, l).
struct ConvergenceReport {
  int target_l = 2;
  std::vector<ConvergenceLevel> levels;

  void write_csv(std::ostream& os) const {
    os << "level,h,e_L2,rate_L2,e_H1,rate_H1,e_vel,rate_vel\n";
    os.precision(12);
    for (const auto& lv : levels)
      os << lv.level << "," << lv.h << "," << lv.e_l2 << "," << lv.rate_l2
         << "," << lv.e_h1 << "," << lv.rate_h1 << "," << lv.e_vel << ","
         << lv.rate_vel << "\n";
  }
};

inline ConvergenceReport run_convergence(const ManufacturedProblem& prob,
                                         const ConvergenceOptions& opt) {
  if (opt.levels < 3)
    throw std::invalid_argument("run_convergence needs >= 3 levels");
  ConvergenceReport rep;
  rep.target_l = opt.degree + 1;
  for (int lvl = 0; lvl < opt.levels; ++lvl) {
    ConvergenceLevel out;
    out.level = lvl;
    const int n = opt.base_elements << lvl;
    try {
      const Mesh1D mesh = Mesh1D::uniform(0.0, 1.0, n);
      const GalerkinSpace sp = GalerkinSpace::fem_1d(mesh, opt.degree);
      out.h = sp.h();
      const AssembledPair pair = assemble(sp, EllipticForm::scalar_laplace());

      SemidiscreteSystem sys;
      sys.pair = pair;
      sys.kernel = prob.kernel();
      sys.T = opt.T;
      auto [a0, v0] = initial_coefficients(
          sp, pair,
          {prob.initial_displacement(), prob.initial_displacement_gradient()},
          {prob.initial_velocity(), nullptr}, opt.init_u0, opt.init_u1);
      sys.alpha0 = a0;
      sys.alphadot0 = v0;
      sys.load = [&sp, &prob](double t) {
        return assemble_load(sp, [&prob, t](double x, double) { return prob.f(x, t); });
      };

      int steps = opt.fixed_steps;
      if (opt.dt_policy == DtPolicy::MatchH)
        steps = static_cast<int>(std::lround(opt.T / out.h));
      else if (opt.dt_policy == DtPolicy::HPow32)
        steps = static_cast<int>(std::ceil(opt.T / std::pow(out.h, 1.5)));
      steps = std::max(steps, opt.min_steps);
      out.steps = steps;

      const Trajectory tr = time_step_solve(sys, steps, opt.scheme);
      const ErrorNorms en =
          error_norms(sp, tr.alpha.back(), tr.alphadot.back(), prob, opt.T);
      out.e_l2 = en.l2_displacement;
      out.e_h1 = en.energy_displacement;
      out.e_vel = en.l2_velocity;
      for (std::size_t i = 0; i < tr.t.size(); ++i) {
        double err2 = 0.0;
        detail::quadrature_sweep(sp, [&](double x, double w) {
          const double e = sp.evaluate(tr.alpha[i], x) - prob.u(x, tr.t[i]);
          err2 += w * e * e;
        });
        out.sup_l2 = std::max(out.sup_l2, std::sqrt(err2));
      }
      out.ok = true;
    } catch (const std::exception& ex) {
      out.ok = false;
      out.error = ex.what();
    }
    rep.levels.push_back(out);
  }
  auto rate = [](double ec, double ef, double hc, double hf) {
    return std::log(ec / ef) / std::log(hc / hf);
  };
  for (std::size_t i = 1; i < rep.levels.size(); ++i) {
    auto &c = rep.levels[i - 1], &f = rep.levels[i];
    if (!c.ok || !f.ok) continue;
    f.rate_l2 = rate(c.e_l2, f.e_l2, c.h, f.h);
    f.rate_h1 = rate(c.e_h1, f.e_h1, c.h, f.h);
    f.rate_vel = rate(c.e_vel, f.e_vel, c.h, f.h);
  }
  return rep;
}

}  // namespace memwave
