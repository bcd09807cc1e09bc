#pragma once

#include <functional>
#include <ostream>
#include <stdexcept>

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <Eigen/SparseCholesky>
#include <Eigen/IterativeLinearSolvers>

#include "memwave/quadrature.hpp"
#include "memwave/space.hpp"

namespace memwave {

using SparseMat = Eigen::SparseMatrix<double>;

/// The elliptic operator behind a(.,.): scalar Laplacian or the 2D
/// linear-elasticity form with Lame constants.
struct EllipticForm {
  enum class Variant { ScalarLaplace, Elasticity2D } variant =
      Variant::ScalarLaplace;
  double lame_lambda = 0.0;
  double lame_mu = 0.0;

  static EllipticForm scalar_laplace() { return {}; }
  static EllipticForm elasticity(double lambda, double mu) {
    if (lambda < 0.0 || mu < 0.0 || lambda + mu <= 0.0)
      throw std::invalid_argument("elasticity form needs lambda, mu >= 0, lambda + mu > 0");
    return {Variant::Elasticity2D, lambda, mu};
  }
};

/// Assembled mass/stiffness pair; both symmetric positive definite on the
/// free-dof space (sparse for FEM, diagonal for the spectral basis).
struct AssembledPair {
  SparseMat M;
  SparseMat S;
};

/// Direct Cholesky for moderate sizes, diagonally preconditioned CG above.
class SpdSolver {
 public:
  static constexpr int kDirectLimit = 2000;

  explicit SpdSolver(const SparseMat& A) : A_(A) {
    if (A.rows() <= kDirectLimit) {
      llt_.compute(A_);
      if (llt_.info() != Eigen::Success)
        throw std::runtime_error("SpdSolver: Cholesky factorization failed");
      direct_ = true;
    } else {
      cg_.setTolerance(1e-13);
      cg_.compute(A_);
    }
  }

  Eigen::VectorXd solve(const Eigen::VectorXd& b) const {
    return direct_ ? Eigen::VectorXd(llt_.solve(b)) : Eigen::VectorXd(cg_.solve(b));
  }

 private:
  SparseMat A_;
  bool direct_ = false;
  Eigen::SimplicialLLT<SparseMat> llt_;
  Eigen::ConjugateGradient<SparseMat, Eigen::Lower | Eigen::Upper,
                           Eigen::DiagonalPreconditioner<double>> cg_;
};

namespace detail {

inline void assemble_fem_1d(const GalerkinSpace& sp,
                            std::vector<Eigen::Triplet<double>>& mt,
                            std::vector<Eigen::Triplet<double>>& st) {
  const GaussRule rule = gauss_legendre(4);  // exact through degree 7
  std::vector<double> val, dval;
  for (int e = 0; e < sp.num_elements(); ++e) {
    const auto& en = sp.element_nodes(e);
    const double xa = sp.node(en.front())[0], xb = sp.node(en.back())[0];
    const double len = xb - xa;
    const int nn = static_cast<int>(en.size());
    Eigen::MatrixXd me = Eigen::MatrixXd::Zero(nn, nn);
    Eigen::MatrixXd se = Eigen::MatrixXd::Zero(nn, nn);
    for (std::size_t q = 0; q < rule.nodes.size(); ++q) {
      const double xi = 0.5 * (1.0 + rule.nodes[q]);
      const double w = 0.5 * rule.weights[q] * len;
      shape_1d(sp.degree(), xi, val, dval);
      for (int i = 0; i < nn; ++i)
        for (int j = 0; j < nn; ++j) {
          me(i, j) += w * val[i] * val[j];
          se(i, j) += w * (dval[i] / len) * (dval[j] / len);
        }
    }
    for (int i = 0; i < nn; ++i) {
      const int di = sp.dof(en[i]);
      if (di < 0) continue;
      for (int j = 0; j < nn; ++j) {
        const int dj = sp.dof(en[j]);
        if (dj < 0) continue;
        mt.emplace_back(di, dj, me(i, j));
        st.emplace_back(di, dj, se(i, j));
      }
    }
  }
}

inline void assemble_fem_2d(const GalerkinSpace& sp, const EllipticForm& form,
                            std::vector<Eigen::Triplet<double>>& mt,
                            std::vector<Eigen::Triplet<double>>& st) {
  const TriangleRule rule = triangle_rule_degree5();
  const bool vector_form = form.variant == EllipticForm::Variant::Elasticity2D;
  std::vector<double> val;
  std::vector<std::array<double, 2>> gref;
  for (int e = 0; e < sp.num_elements(); ++e) {
    const auto& en = sp.element_nodes(e);
    const int nn = static_cast<int>(en.size());
    const auto &p0 = sp.node(en[0]), &p1 = sp.node(en[1]), &p2 = sp.node(en[2]);
    const double j11 = p1[0] - p0[0], j12 = p2[0] - p0[0];
    const double j21 = p1[1] - p0[1], j22 = p2[1] - p0[1];
    const double det = j11 * j22 - j12 * j21;
    // rows of J^{-T}
    const double it11 = j22 / det, it12 = -j21 / det;
    const double it21 = -j12 / det, it22 = j11 / det;

    const int comps = sp.components();
    const int ldofs = nn * comps;
    Eigen::MatrixXd me = Eigen::MatrixXd::Zero(ldofs, ldofs);
    Eigen::MatrixXd se = Eigen::MatrixXd::Zero(ldofs, ldofs);

    for (const auto& qp : rule.points) {
      shape_tri(sp.degree(), qp[0], qp[1], val, gref);
      const double w = qp[2] * det;
      std::vector<std::array<double, 2>> g(nn);
      for (int i = 0; i < nn; ++i)
        g[i] = {it11 * gref[i][0] + it12 * gref[i][1],
                it21 * gref[i][0] + it22 * gref[i][1]};
      if (!vector_form) {
        for (int i = 0; i < nn; ++i)
          for (int j = 0; j < nn; ++j) {
            me(i, j) += w * val[i] * val[j];
            se(i, j) += w * (g[i][0] * g[j][0] + g[i][1] * g[j][1]);
          }
      } else {
        const double mu = form.lame_mu, lam = form.lame_lambda;
        for (int i = 0; i < nn; ++i)
          for (int c = 0; c < 2; ++c)
            for (int j = 0; j < nn; ++j)
              for (int d = 0; d < 2; ++d) {
                double k = mu * g[i][d] * g[j][c] + lam * g[i][c] * g[j][d];
                if (c == d) {
                  k += mu * (g[i][0] * g[j][0] + g[i][1] * g[j][1]);
                  me(i * 2 + c, j * 2 + d) += w * val[i] * val[j];
                }
                se(i * 2 + c, j * 2 + d) += w * k;
              }
      }
    }
    for (int i = 0; i < nn; ++i)
      for (int c = 0; c < comps; ++c) {
        const int di = sp.dof(en[i], c);
        if (di < 0) continue;
        for (int j = 0; j < nn; ++j)
          for (int d = 0; d < comps; ++d) {
            const int dj = sp.dof(en[j], d);
            if (dj < 0) continue;
            mt.emplace_back(di, dj, me(i * comps + c, j * comps + d));
            st.emplace_back(di, dj, se(i * comps + c, j * comps + d));
          }
      }
  }
}

}  // namespace detail

/// Mass and stiffness matrices of the space under the given elliptic form.
/// Spectral spaces return M = I and S = diag(lambda_j) exactly.
inline AssembledPair assemble(const GalerkinSpace& sp, const EllipticForm& form) {
  const int m = sp.dimension();
  AssembledPair out;
  out.M.resize(m, m);
  out.S.resize(m, m);

  if (sp.kind() == SpaceKind::Spectral) {
    if (form.variant != EllipticForm::Variant::ScalarLaplace)
      throw std::invalid_argument("spectral basis supports the scalar Laplacian only");
    std::vector<Eigen::Triplet<double>> mt, st;
    for (int j = 0; j < m; ++j) {
      mt.emplace_back(j, j, 1.0);
      st.emplace_back(j, j, sp.spectral_eigenvalue(j));
    }
    out.M.setFromTriplets(mt.begin(), mt.end());
    out.S.setFromTriplets(st.begin(), st.end());
    return out;
  }

  if (form.variant == EllipticForm::Variant::Elasticity2D &&
      (sp.kind() != SpaceKind::Fem2D || sp.components() != 2))
    throw std::invalid_argument("elasticity form needs a 2-component 2D space");
  if (form.variant == EllipticForm::Variant::ScalarLaplace && sp.components() != 1)
    throw std::invalid_argument("scalar form on a vector space");

  std::vector<Eigen::Triplet<double>> mt, st;
  if (sp.kind() == SpaceKind::Fem1D)
    detail::assemble_fem_1d(sp, mt, st);
  else
    detail::assemble_fem_2d(sp, form, mt, st);
  out.M.setFromTriplets(mt.begin(), mt.end());
  out.S.setFromTriplets(st.begin(), st.end());
  return out;
}

using SpatialFn = std::function<double(double, double)>;

/// Load vector F_k = (f, phi_k) + (g, phi_k)_{Neumann boundary}. The 1D
/// overloads pass y = 0. `quad_boost` raises the quadrature order beyond the
/// assembly default (projections use this for near-exact inner products).
inline Eigen::VectorXd assemble_load(const GalerkinSpace& sp, const SpatialFn& f,
                                     const SpatialFn& g = nullptr,
                                     int quad_boost = 0) {
  const int m = sp.dimension();
  Eigen::VectorXd F = Eigen::VectorXd::Zero(m);

  if (sp.kind() == SpaceKind::Spectral) {
    if (g) throw std::invalid_argument("spectral space has no Neumann boundary");
    const int panels = std::max(64, 4 * m) * (1 + quad_boost);
    for (int j = 0; j < m; ++j)
      F[j] = composite_gauss(
          [&](double x) { return f(x, 0.0) * sp.spectral_basis(j, x); }, 0.0,
          1.0, panels, 10);
    return F;
  }
  if (sp.components() != 1)
    throw std::invalid_argument("assemble_load: scalar spaces only");

  if (sp.kind() == SpaceKind::Fem1D) {
    if (g) throw std::invalid_argument("1D meshes carry no Neumann edges");
    const GaussRule rule = gauss_legendre(5 + 2 * quad_boost);
    std::vector<double> val, dval;
    for (int e = 0; e < sp.num_elements(); ++e) {
      const auto& en = sp.element_nodes(e);
      const double xa = sp.node(en.front())[0], xb = sp.node(en.back())[0];
      for (std::size_t q = 0; q < rule.nodes.size(); ++q) {
        const double xi = 0.5 * (1.0 + rule.nodes[q]);
        const double x = xa + xi * (xb - xa);
        const double w = 0.5 * rule.weights[q] * (xb - xa);
        shape_1d(sp.degree(), xi, val, dval);
        for (std::size_t i = 0; i < en.size(); ++i) {
          const int d = sp.dof(en[i]);
          if (d >= 0) F[d] += w * f(x, 0.0) * val[i];
        }
      }
    }
    return F;
  }

  // 2D volume term
  const TriangleRule rule = triangle_rule_degree5();
  std::vector<double> val;
  std::vector<std::array<double, 2>> gref;
  for (int e = 0; e < sp.num_elements(); ++e) {
    const auto& en = sp.element_nodes(e);
    const auto &p0 = sp.node(en[0]), &p1 = sp.node(en[1]), &p2 = sp.node(en[2]);
    const double det = (p1[0] - p0[0]) * (p2[1] - p0[1]) -
                       (p2[0] - p0[0]) * (p1[1] - p0[1]);
    for (const auto& qp : rule.points) {
      shape_tri(sp.degree(), qp[0], qp[1], val, gref);
      const double x = p0[0] + (p1[0] - p0[0]) * qp[0] + (p2[0] - p0[0]) * qp[1];
      const double y = p0[1] + (p1[1] - p0[1]) * qp[0] + (p2[1] - p0[1]) * qp[1];
      const double w = qp[2] * det;
      for (std::size_t i = 0; i < en.size(); ++i) {
        const int d = sp.dof(en[i]);
        if (d >= 0) F[d] += w * f(x, y) * val[i];
      }
    }
  }

  if (g) {
    if (!sp.mesh2d().has_neumann())
      throw std::invalid_argument("Neumann datum given but mesh has no Neumann edges");
    const GaussRule rule1 = gauss_legendre(4 + quad_boost);
    std::vector<double> val1, dval1;
    for (const auto& be : sp.boundary_edges()) {
      if (be.marker != BoundaryMarker::Neumann) continue;
      const auto &a = sp.node(be.nodes.front()), &b = sp.node(be.nodes.back());
      const double len = std::hypot(b[0] - a[0], b[1] - a[1]);
      const int edge_degree = static_cast<int>(be.nodes.size()) - 1;
      for (std::size_t q = 0; q < rule1.nodes.size(); ++q) {
        const double xi = 0.5 * (1.0 + rule1.nodes[q]);
        const double w = 0.5 * rule1.weights[q] * len;
        const double x = a[0] + xi * (b[0] - a[0]);
        const double y = a[1] + xi * (b[1] - a[1]);
        shape_1d(edge_degree, xi, val1, dval1);
        for (std::size_t i = 0; i < be.nodes.size(); ++i) {
          const int d = sp.dof(be.nodes[i]);
          if (d >= 0) F[d] += w * g(x, y) * val1[i];
        }
      }
    }
  }
  return F;
}

/// Numerical trace constant max_k ||phi_k||_{Neumann boundary} / ||phi_k||_V
/// over the basis; 0 when the mesh has no Neumann edges.
inline double trace_constant(const GalerkinSpace& sp, const AssembledPair& pair) {
  if (sp.kind() != SpaceKind::Fem2D || !sp.mesh2d().has_neumann()) return 0.0;
  Eigen::VectorXd bnorm2 = Eigen::VectorXd::Zero(sp.dimension());
  const GaussRule rule = gauss_legendre(5);
  std::vector<double> val, dval;
  for (const auto& be : sp.boundary_edges()) {
    if (be.marker != BoundaryMarker::Neumann) continue;
    const auto &a = sp.node(be.nodes.front()), &b = sp.node(be.nodes.back());
    const double len = std::hypot(b[0] - a[0], b[1] - a[1]);
    const int edge_degree = static_cast<int>(be.nodes.size()) - 1;
    for (std::size_t q = 0; q < rule.nodes.size(); ++q) {
      const double xi = 0.5 * (1.0 + rule.nodes[q]);
      const double w = 0.5 * rule.weights[q] * len;
      shape_1d(edge_degree, xi, val, dval);
      for (std::size_t i = 0; i < be.nodes.size(); ++i) {
        const int d = sp.dof(be.nodes[i]);
        if (d >= 0) bnorm2[d] += w * val[i] * val[i];
      }
    }
  }
  double c = 0.0;
  for (int k = 0; k < sp.dimension(); ++k)
    if (bnorm2[k] > 0.0)
      c = std::max(c, std::sqrt(bnorm2[k] / pair.S.coeff(k, k)));
  return c;
}

/// Coordinate-format text export: one "row col value" line per entry.
inline void write_coordinate(std::ostream& os, const SparseMat& A) {
  os.precision(17);
  for (int k = 0; k < A.outerSize(); ++k)
    for (SparseMat::InnerIterator it(A, k); it; ++it)
      os << it.row() << " " << it.col() << " " << it.value() << "\n";
}

}  // namespace memwave
