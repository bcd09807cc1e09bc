#pragma once

#include <functional>
#include <memory>
#include <stdexcept>
#include <utility>

#include "memwave/assembly.hpp"
#include "memwave/kernels.hpp"
#include "memwave/projections.hpp"

namespace memwave {

/// Matrix Volterra system M a'' + S a - S int_0^t K(t-s) a(s) ds = F(t)
/// obtained by Galerkin semidiscretization.
struct SemidiscreteSystem {
  AssembledPair pair;
  MemoryKernel kernel = MemoryKernel::zero();
  std::function<Eigen::VectorXd(double)> load;  // F(t); empty means F == 0
  Eigen::VectorXd alpha0;
  Eigen::VectorXd alphadot0;
  double T = 1.0;

  int dim() const { return static_cast<int>(alpha0.size()); }

  Eigen::VectorXd force(double t) const {
    return load ? load(t) : Eigen::VectorXd::Zero(dim());
  }
};

enum class InitialProjection { L2, Ritz, Fourier };

struct InitialDatum {
  SpatialFn value;
  GradientFn gradient;  // required for the Ritz choice
};

/// Initial coefficient vectors (alpha(0), alpha'(0)) by the chosen
/// projection per component.
inline std::pair<Eigen::VectorXd, Eigen::VectorXd> initial_coefficients(
    const GalerkinSpace& sp, const AssembledPair& pair, const InitialDatum& u0,
    const InitialDatum& u1, InitialProjection p0, InitialProjection p1) {
  auto project = [&](const InitialDatum& u, InitialProjection p) {
    switch (p) {
      case InitialProjection::L2:
        return l2_project(sp, pair, u.value);
      case InitialProjection::Ritz:
        if (!u.gradient)
          throw std::invalid_argument("Ritz initial projection needs a gradient");
        return ritz_project(sp, pair, u.gradient);
      case InitialProjection::Fourier:
        return fourier_project(sp, u.value);
    }
    throw std::logic_error("unreachable");
  };
  return {project(u0, p0), project(u1, p1)};
}

/// First-order form D' + Mt^{-1} St D - Mt^{-1} Stt int K D = Mt^{-1} Ft
/// with D = [alpha; alpha'], Mt = blockdiag(M, M), St = [[0,-M],[S,0]],
/// Stt = [[0,0],[S,0]]. Block actions are exposed instead of materialized
/// 2m x 2m matrices.
class FirstOrderSystem {
 public:
  explicit FirstOrderSystem(const SemidiscreteSystem& sys)
      : sys_(sys), msolve_(sys.pair.M) {}

  int dim() const { return sys_.dim(); }
  int dim2() const { return 2 * sys_.dim(); }
  const SemidiscreteSystem& system() const { return sys_; }

  Eigen::VectorXd initial_state() const {
    Eigen::VectorXd D(dim2());
    D << sys_.alpha0, sys_.alphadot0;
    return D;
  }

  /// Mt^{-1} St [a; b] = [-b; M^{-1} S a].
  Eigen::VectorXd apply_MinvSt(const Eigen::VectorXd& D) const {
    const int m = dim();
    Eigen::VectorXd out(dim2());
    out.head(m) = -D.tail(m);
    out.tail(m) = msolve_.solve(sys_.pair.S * D.head(m));
    return out;
  }

  /// Mt^{-1} Stt [a; b] = [0; M^{-1} S a].
  Eigen::VectorXd apply_MinvStt(const Eigen::VectorXd& D) const {
    const int m = dim();
    Eigen::VectorXd out = Eigen::VectorXd::Zero(dim2());
    out.tail(m) = msolve_.solve(sys_.pair.S * D.head(m));
    return out;
  }

  /// Mt^{-1} Ft(t) = [0; M^{-1} F(t)].
  Eigen::VectorXd rhs(double t) const {
    const int m = dim();
    Eigen::VectorXd out = Eigen::VectorXd::Zero(dim2());
    out.tail(m) = msolve_.solve(sys_.force(t));
    return out;
  }

  /// Residual D'(t) + Mt^{-1}St D - Mt^{-1}Stt conv - Mt^{-1}Ft for a given
  /// state, state derivative, and precomputed convolution int K(t-s) D ds.
  Eigen::VectorXd residual(double t, const Eigen::VectorXd& D,
                           const Eigen::VectorXd& Ddot,
                           const Eigen::VectorXd& conv) const {
    return Ddot + apply_MinvSt(D) - apply_MinvStt(conv) - rhs(t);
  }

  const SpdSolver& mass_solver() const { return msolve_; }

 private:
  SemidiscreteSystem sys_;
  SpdSolver msolve_;
};

/// Second-kind Volterra integral equation D(t) = int_0^t Kc(t,s) D(s) ds
/// + Fc(t). The kernel matrix acts blockwise:
///   Kc(t,s) [a; b] = [b; (P(t-s) - 1) M^{-1} S a],
/// where P is the memory kernel's antiderivative from 0, so Kc is
/// continuous up to the diagonal even for weakly singular K.
class VolterraIE {
 public:
  explicit VolterraIE(const SemidiscreteSystem& sys)
      : sys_(sys), msolve_(sys.pair.M) {
    const int m = sys.dim();
    // dense M^{-1} S; systems handed to the Picard path are desk-scale
    G_.resize(m, m);
    Eigen::MatrixXd Sd = Eigen::MatrixXd(sys.pair.S);
    for (int j = 0; j < m; ++j) G_.col(j) = msolve_.solve(Sd.col(j));
  }

  int dim() const { return sys_.dim(); }
  int dim2() const { return 2 * sys_.dim(); }
  double final_time() const { return sys_.T; }
  const SemidiscreteSystem& system() const { return sys_; }
  const Eigen::MatrixXd& minv_s() const { return G_; }

  Eigen::VectorXd initial_state() const {
    Eigen::VectorXd D(dim2());
    D << sys_.alpha0, sys_.alphadot0;
    return D;
  }

  /// Kc(t,s) applied to a state vector.
  Eigen::VectorXd apply_kernel(double t, double s, const Eigen::VectorXd& D) const {
    const int m = dim();
    Eigen::VectorXd out(dim2());
    out.head(m) = D.tail(m);
    out.tail(m) = (sys_.kernel.primitive(t - s) - 1.0) * (G_ * D.head(m));
    return out;
  }

  /// Kc(t,s) as a dense 2m x 2m matrix (property tests sample it).
  Eigen::MatrixXd kernel_matrix(double t, double s) const {
    const int m = dim();
    Eigen::MatrixXd K = Eigen::MatrixXd::Zero(dim2(), dim2());
    K.topRightCorner(m, m) = Eigen::MatrixXd::Identity(m, m);
    K.bottomLeftCorner(m, m) = (sys_.kernel.primitive(t - s) - 1.0) * G_;
    return K;
  }

  /// Fc on a grid: D(0) + cumulative trapezoid of [0; M^{-1} F(s)].
  std::vector<Eigen::VectorXd> forcing_on_grid(const std::vector<double>& grid) const {
    const int m = dim();
    std::vector<Eigen::VectorXd> Fc(grid.size());
    Eigen::VectorXd acc = Eigen::VectorXd::Zero(m);
    Eigen::VectorXd prev = msolve_.solve(sys_.force(grid.front()));
    Fc[0] = initial_state();
    for (std::size_t i = 1; i < grid.size(); ++i) {
      Eigen::VectorXd cur = msolve_.solve(sys_.force(grid[i]));
      acc += 0.5 * (grid[i] - grid[i - 1]) * (prev + cur);
      prev = std::move(cur);
      Fc[i] = initial_state();
      Fc[i].tail(m) += acc;
    }
    return Fc;
  }

 private:
  SemidiscreteSystem sys_;
  SpdSolver msolve_;
  Eigen::MatrixXd G_;
};

/// Z = |M^{-1}S|_inf (1 + kappa); dominates sup |Kc(t,s)|_inf whenever
/// it is at least 1.
inline double bound_Z(const SemidiscreteSystem& sys) {
  const int m = sys.dim();
  SpdSolver msolve(sys.pair.M);
  Eigen::MatrixXd Sd = Eigen::MatrixXd(sys.pair.S);
  double row_max = 0.0;
  Eigen::MatrixXd G(m, m);
  for (int j = 0; j < m; ++j) G.col(j) = msolve.solve(Sd.col(j));
  for (int i = 0; i < m; ++i) row_max = std::max(row_max, G.row(i).cwiseAbs().sum());
  return row_max * (1.0 + sys.kernel.l1_norm(sys.T));
}

/// Z0 bound on sup |D^0|_inf: initial sups plus load/surface L1 norms
/// times max_k (||phi_k|| + C_trace ||phi_k||_V). The basis norms are the
/// square roots of the M and S diagonals.
inline double bound_Z0(const SemidiscreteSystem& sys, double f_l1 = 0.0,
                       double g_l1 = 0.0, double trace_const = 0.0) {
  double z0 = sys.alpha0.cwiseAbs().maxCoeff() +
              sys.alphadot0.cwiseAbs().maxCoeff();
  if (f_l1 != 0.0 || g_l1 != 0.0) {
    double basis_max = 0.0;
    for (int k = 0; k < sys.dim(); ++k)
      basis_max = std::max(basis_max, std::sqrt(sys.pair.M.coeff(k, k)) +
                                          trace_const * std::sqrt(sys.pair.S.coeff(k, k)));
    z0 += (f_l1 + g_l1) * basis_max;
  }
  return z0;
}

}  // namespace memwave
