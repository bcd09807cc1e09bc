#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "memwave/quadrature.hpp"

namespace memwave {

/// Gamma function by the Lanczos approximation (g = 7, 9 coefficients).
/// Relative accuracy better than 1e-14 on (0, 2), which covers every use
/// in this library (power-law exponents and their shifted values).
inline double gamma_fn(double x) {
  static const double coef[9] = {
      0.99999999999980993,     676.5203681218851,   -1259.1392167224028,
      771.32342877765313,      -176.61502916214059, 12.507343278686905,
      -0.13857109526572012,    9.9843695780195716e-6,
      1.5056327351493116e-7};
  if (x < 0.5) {
    // reflection formula
    return std::numbers::pi / (std::sin(std::numbers::pi * x) * gamma_fn(1.0 - x));
  }
  x -= 1.0;
  double a = coef[0];
  const double t = x + 7.5;
  for (int i = 1; i < 9; ++i) a += coef[i] / (x + i);
  return std::sqrt(2.0 * std::numbers::pi) * std::pow(t, x + 0.5) *
         std::exp(-t) * a;
}

enum class KernelVariant { Exponential, PowerLaw, Zero };

/// Convolution memory kernel K multiplying the elliptic history term.
/// Admissible kernels are nonnegative, nonincreasing, and have L1 norm
/// kappa < 1 on the working horizon [0, T].
///
/// Variants:
///   Exponential  K(t) = c exp(-gamma t)
///   PowerLaw     K(t) = c t^(alpha-1) / Gamma(alpha),  0 < alpha < 1
///   Zero         K == 0
class MemoryKernel {
 public:
  static MemoryKernel exponential(double amplitude, double rate,
                                  double horizon) {
    if (amplitude <= 0.0 || rate <= 0.0 || horizon <= 0.0)
      throw std::invalid_argument("exponential kernel needs c > 0, gamma > 0, T > 0");
    MemoryKernel k;
    k.variant_ = KernelVariant::Exponential;
    k.c_ = amplitude;
    k.gamma_ = rate;
    k.horizon_ = horizon;
    return k;
  }

  static MemoryKernel power_law(double alpha, double scale, double horizon) {
    if (!(alpha > 0.0 && alpha < 1.0))
      throw std::invalid_argument("power-law kernel needs alpha in (0,1)");
    if (scale <= 0.0 || horizon <= 0.0)
      throw std::invalid_argument("power-law kernel needs c > 0, T > 0");
    MemoryKernel k;
    k.variant_ = KernelVariant::PowerLaw;
    k.alpha_ = alpha;
    k.c_ = scale;
    k.horizon_ = horizon;
    return k;
  }

  static MemoryKernel zero(double horizon = 1.0) {
    MemoryKernel k;
    k.variant_ = KernelVariant::Zero;
    k.horizon_ = horizon;
    return k;
  }

  /// Power-law scale c giving a prescribed L1 norm kappa on [0, T]:
  /// c = kappa Gamma(alpha+1) / T^alpha.
  static double power_law_scale_for_kappa(double alpha, double horizon,
                                          double kappa) {
    return kappa * gamma_fn(alpha + 1.0) / std::pow(horizon, alpha);
  }

  KernelVariant variant() const { return variant_; }
  double horizon() const { return horizon_; }
  double alpha() const { return alpha_; }
  double amplitude() const { return c_; }
  double rate() const { return gamma_; }

  /// K(t). Power-law kernels are singular at t = 0.
  double operator()(double t) const {
    if (t < 0.0) throw std::domain_error("kernel evaluated at t < 0");
    switch (variant_) {
      case KernelVariant::Exponential:
        return c_ * std::exp(-gamma_ * t);
      case KernelVariant::PowerLaw:
        if (t <= 0.0)
          throw std::domain_error("power-law kernel is singular at t = 0");
        return c_ * std::pow(t, alpha_ - 1.0) / gamma_fn(alpha_);
      case KernelVariant::Zero:
        return 0.0;
    }
    return 0.0;
  }

  /// Antiderivative from 0: P(u) = int_0^u K(s) ds, in closed form.
  double primitive(double u) const {
    if (u < 0.0) throw std::domain_error("kernel primitive at u < 0");
    switch (variant_) {
      case KernelVariant::Exponential:
        return c_ * (1.0 - std::exp(-gamma_ * u)) / gamma_;
      case KernelVariant::PowerLaw:
        return c_ * std::pow(u, alpha_) / gamma_fn(alpha_ + 1.0);
      case KernelVariant::Zero:
        return 0.0;
    }
    return 0.0;
  }

  /// kappa = ||K||_{L1(0,T)}.
  double l1_norm(double T) const {
    if (T <= 0.0) throw std::invalid_argument("l1_norm needs T > 0");
    return primitive(T);
  }
  double l1_norm() const { return l1_norm(horizon_); }

 private:
  MemoryKernel() = default;
  KernelVariant variant_ = KernelVariant::Zero;
  double c_ = 0.0;
  double gamma_ = 0.0;
  double alpha_ = 0.5;
  double horizon_ = 1.0;
};

/// One admissibility property with its verdict.
struct KernelCheck {
  std::string property;
  bool passed = false;
  std::string detail;
};

struct KernelValidationReport {
  std::vector<KernelCheck> checks;
  double kappa = 0.0;
  bool admissible = true;

  std::string summary() const {
    std::ostringstream os;
    for (const auto& c : checks)
      os << (c.passed ? "pass " : "FAIL ") << c.property
         << (c.detail.empty() ? "" : ": " + c.detail) << "\n";
    return os.str();
  }
};

namespace detail {
/// Sample grid on (0, T]: geometric points T 2^-j clustered at the origin
/// plus uniform points.
inline std::vector<double> admissibility_grid(double T) {
  std::vector<double> ts;
  for (int j = 40; j >= 0; --j) ts.push_back(T * std::ldexp(1.0, -j));
  const int n_uniform = 64;
  for (int i = 1; i <= n_uniform; ++i) ts.push_back(T * i / n_uniform);
  std::sort(ts.begin(), ts.end());
  ts.erase(std::unique(ts.begin(), ts.end()), ts.end());
  return ts;
}
}  // namespace detail

/// Check the three admissibility properties (K >= 0, K nonincreasing,
/// kappa < 1) on a sample grid. Failure yields a report, not an exception.
inline KernelValidationReport validate(const MemoryKernel& k, double T) {
  if (T <= 0.0) throw std::invalid_argument("validate needs T > 0");
  KernelValidationReport report;
  const auto ts = detail::admissibility_grid(T);

  bool nonneg = true, noninc = true;
  double prev = std::numeric_limits<double>::infinity();
  for (double t : ts) {
    const double v = k(t);
    if (v < 0.0) nonneg = false;
    if (v > prev * (1.0 + 1e-13) + 1e-300) noninc = false;
    prev = v;
  }
  report.checks.push_back({"K >= 0 on (0,T]", nonneg, ""});
  report.checks.push_back({"K nonincreasing on (0,T]", noninc, ""});

  report.kappa = k.l1_norm(T);
  std::ostringstream os;
  os << "kappa = " << report.kappa << (report.kappa < 1.0 ? " < 1" : " >= 1");
  report.checks.push_back({"||K||_L1(0,T) < 1", report.kappa < 1.0, os.str()});

  for (const auto& c : report.checks) report.admissible &= c.passed;
  return report;
}

/// xi(t) = kappa - int_0^t K = int_t^T K; nonincreasing with xi(0) = kappa,
/// xi(T) = 0. Used as a positive-type kernel in the error analysis.
class XiFunction {
 public:
  explicit XiFunction(const MemoryKernel& kernel)
      : kernel_(kernel), kappa_(kernel.l1_norm()) {}

  double kappa() const { return kappa_; }
  double horizon() const { return kernel_.horizon(); }
  const MemoryKernel& kernel() const { return kernel_; }

  double operator()(double t) const {
    const double T = kernel_.horizon();
    if (t < -1e-14 || t > T * (1.0 + 1e-14))
      throw std::domain_error("xi evaluated outside [0,T]");
    t = std::clamp(t, 0.0, T);
    return kappa_ - kernel_.primitive(t);
  }

 private:
  MemoryKernel kernel_;
  double kappa_;
};

/// Piecewise-linear function given by samples on a uniform grid over [0,T].
struct SampledFunction {
  double T = 1.0;
  std::vector<double> values;  // size >= 2, nodes i*T/(n-1)

  double operator()(double t) const {
    const int n = static_cast<int>(values.size());
    const double h = T / (n - 1);
    if (t <= 0.0) return values.front();
    if (t >= T) return values.back();
    const int i = std::min(static_cast<int>(t / h), n - 2);
    const double s = (t - i * h) / h;
    return (1.0 - s) * values[i] + s * values[i + 1];
  }
};

/// Double integral int_0^T int_0^t xi(t-s) phi(t) phi(s) ds dt by composite
/// trapezoidal quadrature on `resolution` intervals. For admissible kernels
/// the result is nonnegative up to quadrature error.
inline double positive_type_check(const XiFunction& xi,
                                  const SampledFunction& phi, int resolution) {
  if (resolution < 16)
    throw std::invalid_argument("positive_type_check needs resolution >= 16");
  const double T = xi.horizon();
  const int n = resolution;
  const double h = T / n;
  std::vector<double> pv(n + 1), xv(n + 1);
  for (int i = 0; i <= n; ++i) {
    pv[i] = phi(i * h);
    xv[i] = xi(i * h);
  }
  double outer = 0.0;
  for (int i = 0; i <= n; ++i) {
    double inner = 0.0;
    for (int j = 0; j <= i; ++j) {
      const double w = (j == 0 || j == i) ? 0.5 : 1.0;
      inner += w * xv[i - j] * pv[j];
    }
    inner *= h * pv[i];
    outer += ((i == 0 || i == n) ? 0.5 : 1.0) * inner;
  }
  return outer * h;
}

}  // namespace memwave
