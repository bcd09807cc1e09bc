#pragma once

#include <cmath>
#include <functional>
#include <map>
#include <memory>
#include <numbers>
#include <stdexcept>
#include <string>

#include "memwave/kernels.hpp"
#include "memwave/projections.hpp"

namespace memwave {

/// Time factor G(t) of a separable exact solution, with derivatives.
struct TimeFactor {
  std::function<double(double)> g, dg, ddg;

  static TimeFactor cosine(double omega) {
    return {[omega](double t) { return std::cos(omega * t); },
            [omega](double t) { return -omega * std::sin(omega * t); },
            [omega](double t) { return -omega * omega * std::cos(omega * t); }};
  }
};

/// Manufactured problem on (0,1) with homogeneous Dirichlet ends:
/// exact solution u(x,t) = sin(k pi x) G(t) under the scalar Laplacian,
/// load f chosen so that u'' + Au - int_0^t K(t-s) Au(s) ds = f exactly.
/// Since A u = lambda u with lambda = (k pi)^2, everything reduces to the
/// scalar convolution (K * G)(t), which is evaluated analytically for
/// cosine time factors with exponential kernels and by
/// singularity-removing quadrature otherwise.
class ManufacturedProblem {
 public:
  ManufacturedProblem(int wave_number, TimeFactor time_factor,
                      MemoryKernel kernel, double omega_hint = -1.0)
      : k_(wave_number),
        lambda_(std::pow(wave_number * std::numbers::pi, 2)),
        G_(std::move(time_factor)),
        kernel_(std::move(kernel)),
        omega_(omega_hint) {
    if (wave_number < 1) throw std::invalid_argument("wave number must be >= 1");
  }

  static ManufacturedProblem family(const std::string& id,
                                    const MemoryKernel& kernel,
                                    int wave_number = 1) {
    if (id == "sine-cos")
      return ManufacturedProblem(wave_number, TimeFactor::cosine(1.0), kernel, 1.0);
    if (id == "standing-wave") {
      const double w = wave_number * std::numbers::pi;
      return ManufacturedProblem(wave_number, TimeFactor::cosine(w), kernel, w);
    }
    throw std::invalid_argument("unknown manufactured family: " + id);
  }

  int wave_number() const { return k_; }
  double lambda() const { return lambda_; }
  const MemoryKernel& kernel() const { return kernel_; }

  double u(double x, double t) const { return shape(x) * G_.g(t); }
  double u_t(double x, double t) const { return shape(x) * G_.dg(t); }
  double u_tt(double x, double t) const { return shape(x) * G_.ddg(t); }
  double u_x(double x, double t) const {
    const double w = k_ * std::numbers::pi;
    return w * std::cos(w * x) * G_.g(t);
  }

  SpatialFn initial_displacement() const {
    return [this](double x, double) { return u(x, 0.0); };
  }
  SpatialFn initial_velocity() const {
    return [this](double x, double) { return u_t(x, 0.0); };
  }
  GradientFn initial_displacement_gradient() const {
    return [this](double x, double) {
      return std::array<double, 2>{u_x(x, 0.0), 0.0};
    };
  }

  /// Load f(x,t) = sin(k pi x) [G'' + lambda (G - (K*G))](t).
  double f(double x, double t) const {
    return shape(x) * time_load(t);
  }
  double time_load(double t) const {
    return G_.ddg(t) + lambda_ * (G_.g(t) - conv(t));
  }

  /// (K * G)(t), cached per t (time grids revisit the same instants).
  double conv(double t) const {
    if (kernel_.variant() == KernelVariant::Zero) return 0.0;
    auto it = cache_.find(t);
    if (it != cache_.end()) return it->second;
    const double v = conv_eval(t);
    cache_.emplace(t, v);
    return v;
  }

  /// Residual u'' + Au - int K Au - f at one point, with the convolution
  /// re-evaluated by an independent graded-panel quadrature.
  double residual(double x, double t) const {
    const double conv_indep = conv_graded(t);
    return u_tt(x, t) + lambda_ * (u(x, t) - shape(x) * conv_indep) - f(x, t);
  }

  /// Independent oracle: int_0^t K(t-s) G(s) ds by geometrically graded
  /// Gauss panels clustered at the singular end s = t.
  double conv_graded(double t) const {
    if (t <= 0.0 || kernel_.variant() == KernelVariant::Zero) return 0.0;
    const GaussRule rule = gauss_legendre(10);
    // integrate in u = t - s over (0, t], panels shrinking toward 0
    double sum = 0.0;
    double hi = t;
    const int levels = 48;
    for (int lev = 0; lev < levels; ++lev) {
      const double lo = (lev + 1 == levels) ? 0.0 : hi * 0.5;
      if (kernel_.variant() == KernelVariant::PowerLaw && lo == 0.0) {
        // closed panel at the singularity: integrate K exactly against the
        // linearized G
        const double g0 = G_.g(t - 0.5 * hi);
        sum += g0 * (kernel_.primitive(hi) - kernel_.primitive(0.0));
      } else {
        sum += gauss_integrate(
            [&](double uu) { return kernel_(uu) * G_.g(t - uu); }, lo, hi, rule);
      }
      hi = lo;
      if (hi == 0.0) break;
    }
    return sum;
  }

 private:
  double shape(double x) const { return std::sin(k_ * std::numbers::pi * x); }

  double conv_eval(double t) const {
    if (t <= 0.0) return 0.0;
    if (kernel_.variant() == KernelVariant::Exponential && omega_ > 0.0) {
      // int_0^t c e^{-g(t-s)} cos(w s) ds
      const double c = kernel_.amplitude(), g = kernel_.rate(), w = omega_;
      return c *
             (g * std::cos(w * t) + w * std::sin(w * t) - g * std::exp(-g * t)) /
             (g * g + w * w);
    }
    if (kernel_.variant() == KernelVariant::Exponential) {
      return composite_gauss(
          [&](double s) { return kernel_(t - s) * G_.g(s); }, 0.0, t, 64, 10);
    }
    // power law: remove the (t-s)^(alpha-1) singularity by substitution
    const double c = kernel_.amplitude(), alpha = kernel_.alpha();
    return c / gamma_fn(alpha) *
           singular_integrate([&](double uu) { return G_.g(t - uu); }, t, alpha,
                              128);
  }

  int k_;
  double lambda_;
  TimeFactor G_;
  MemoryKernel kernel_;
  double omega_ = -1.0;  // cosine frequency when known (analytic convolution)
  mutable std::map<double, double> cache_;
};

}  // namespace memwave
