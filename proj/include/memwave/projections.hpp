#pragma once

#include <array>
#include <functional>

#include "memwave/assembly.hpp"

namespace memwave {

using GradientFn = std::function<std::array<double, 2>(double, double)>;

namespace detail {

/// b_k = a(v, phi_k) from the analytic gradient of v (scalar forms).
inline Eigen::VectorXd energy_load(const GalerkinSpace& sp, const GradientFn& dv) {
  const int m = sp.dimension();
  Eigen::VectorXd b = Eigen::VectorXd::Zero(m);
  if (sp.kind() == SpaceKind::Spectral) {
    const int panels = std::max(64, 4 * m);
    for (int j = 0; j < m; ++j)
      b[j] = composite_gauss(
          [&](double x) { return dv(x, 0.0)[0] * sp.spectral_basis_deriv(j, x); },
          0.0, 1.0, panels, 10);
    return b;
  }
  if (sp.components() != 1)
    throw std::invalid_argument("energy_load: scalar spaces only");
  if (sp.kind() == SpaceKind::Fem1D) {
    const GaussRule rule = gauss_legendre(7);
    std::vector<double> val, dval;
    for (int e = 0; e < sp.num_elements(); ++e) {
      const auto& en = sp.element_nodes(e);
      const double xa = sp.node(en.front())[0], xb = sp.node(en.back())[0];
      const double len = xb - xa;
      for (std::size_t q = 0; q < rule.nodes.size(); ++q) {
        const double xi = 0.5 * (1.0 + rule.nodes[q]);
        const double x = xa + xi * len;
        const double w = 0.5 * rule.weights[q] * len;
        shape_1d(sp.degree(), xi, val, dval);
        for (std::size_t i = 0; i < en.size(); ++i) {
          const int d = sp.dof(en[i]);
          if (d >= 0) b[d] += w * dv(x, 0.0)[0] * dval[i] / len;
        }
      }
    }
    return b;
  }
  const TriangleRule rule = triangle_rule_degree5();
  std::vector<double> val;
  std::vector<std::array<double, 2>> gref;
  for (int e = 0; e < sp.num_elements(); ++e) {
    const auto& en = sp.element_nodes(e);
    const auto &p0 = sp.node(en[0]), &p1 = sp.node(en[1]), &p2 = sp.node(en[2]);
    const double j11 = p1[0] - p0[0], j12 = p2[0] - p0[0];
    const double j21 = p1[1] - p0[1], j22 = p2[1] - p0[1];
    const double det = j11 * j22 - j12 * j21;
    const double it11 = j22 / det, it12 = -j21 / det;
    const double it21 = -j12 / det, it22 = j11 / det;
    for (const auto& qp : rule.points) {
      shape_tri(sp.degree(), qp[0], qp[1], val, gref);
      const double x = p0[0] + j11 * qp[0] + j12 * qp[1];
      const double y = p0[1] + j21 * qp[0] + j22 * qp[1];
      const double w = qp[2] * det;
      const auto dvx = dv(x, y);
      for (std::size_t i = 0; i < en.size(); ++i) {
        const int d = sp.dof(en[i]);
        if (d < 0) continue;
        const double gx = it11 * gref[i][0] + it12 * gref[i][1];
        const double gy = it21 * gref[i][0] + it22 * gref[i][1];
        b[d] += w * (dvx[0] * gx + dvx[1] * gy);
      }
    }
  }
  return b;
}

}  // namespace detail

/// L2 projection P_h v: solve M c = ((v, phi_k)).
inline Eigen::VectorXd l2_project(const GalerkinSpace& sp,
                                  const AssembledPair& pair, const SpatialFn& v) {
  const Eigen::VectorXd b = assemble_load(sp, v, nullptr, /*quad_boost=*/2);
  return SpdSolver(pair.M).solve(b);
}

/// Ritz projection R_h v: solve S c = (a(v, phi_k)) from the analytic
/// gradient of v.
inline Eigen::VectorXd ritz_project(const GalerkinSpace& sp,
                                    const AssembledPair& pair,
                                    const GradientFn& dv) {
  const Eigen::VectorXd b = detail::energy_load(sp, dv);
  return SpdSolver(pair.S).solve(b);
}

/// Truncated Fourier projection P_F v = sum (v, phi_j) phi_j; spectral
/// spaces only (where it coincides with the L2 projection).
inline Eigen::VectorXd fourier_project(const GalerkinSpace& sp, const SpatialFn& v) {
  if (sp.kind() != SpaceKind::Spectral)
    throw std::invalid_argument("fourier_project requires a spectral space");
  return assemble_load(sp, v);
}

}  // namespace memwave
