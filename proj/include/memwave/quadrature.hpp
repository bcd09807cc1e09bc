#pragma once

#include <array>
#include <cassert>
#include <cmath>
#include <cstddef>
#include <functional>
#include <numbers>
#include <vector>

namespace memwave {

/// One-dimensional Gauss-Legendre rule on the reference interval [-1, 1].
struct GaussRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// Gauss-Legendre nodes/weights computed by Newton iteration on P_n.
/// Exact for polynomials of degree 2n-1.
inline GaussRule gauss_legendre(int n) {
  assert(n >= 1);
  GaussRule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  for (int i = 0; i < n; ++i) {
    // Chebyshev initial guess
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      // Legendre recurrence for P_n(x) and P'_n(x)
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    rule.nodes[i] = x;
    rule.weights[i] = 2.0 / ((1.0 - x * x) * dp * dp);
  }
  return rule;
}

/// ∫_a^b f(x) dx with an n-point Gauss rule on a single panel.
inline double gauss_integrate(const std::function<double(double)>& f, double a,
                              double b, const GaussRule& rule) {
  const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
  double sum = 0.0;
  for (std::size_t i = 0; i < rule.nodes.size(); ++i)
    sum += rule.weights[i] * f(mid + half * rule.nodes[i]);
  return half * sum;
}

/// Composite Gauss on `panels` uniform subintervals of [a, b].
inline double composite_gauss(const std::function<double(double)>& f, double a,
                              double b, int panels, int points_per_panel = 8) {
  const GaussRule rule = gauss_legendre(points_per_panel);
  const double h = (b - a) / panels;
  double sum = 0.0;
  for (int p = 0; p < panels; ++p)
    sum += gauss_integrate(f, a + p * h, a + (p + 1) * h, rule);
  return sum;
}

/// ∫_0^t s^(alpha-1) g(s) ds for alpha in (0,1], with the endpoint
/// singularity removed by the substitution s = v^(1/alpha).
inline double singular_integrate(const std::function<double(double)>& g,
                                 double t, double alpha, int panels = 64) {
  if (t <= 0.0) return 0.0;
  const double w = std::pow(t, alpha);
  auto h = [&](double v) { return g(std::pow(v, 1.0 / alpha)); };
  return composite_gauss(h, 0.0, w, panels, 10) / alpha;
}

/// Symmetric quadrature rule on the reference triangle
/// {(x,y): x,y >= 0, x+y <= 1}; exact for polynomials of degree 5.
struct TriangleRule {
  // barycentric-style points given as (x, y, weight); weights sum to 1/2
  std::vector<std::array<double, 3>> points;
};

inline TriangleRule triangle_rule_degree5() {
  TriangleRule r;
  const double a1 = 0.0597158717897698, b1 = 0.4701420641051151;
  const double a2 = 0.7974269853530873, b2 = 0.1012865073234563;
  const double w0 = 0.225, w1 = 0.1323941527885062, w2 = 0.1259391805448271;
  auto add = [&](double x, double y, double w) {
    r.points.push_back({x, y, 0.5 * w});
  };
  add(1.0 / 3.0, 1.0 / 3.0, w0);
  add(a1, b1, w1);
  add(b1, a1, w1);
  add(b1, b1, w1);
  add(a2, b2, w2);
  add(b2, a2, w2);
  add(b2, b2, w2);
  return r;
}

}  // namespace memwave
