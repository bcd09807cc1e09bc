#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <numbers>

#include "memwave/projections.hpp"

using namespace memwave;

namespace {

constexpr double kPi = std::numbers::pi;

// quadrature oracle for (v, sqrt(2) sin(j pi x)), independent of the
// assembly-based projection path
double fourier_oracle(const SpatialFn& v, int j) {
  return composite_gauss(
      [&](double x) {
        return v(x, 0.0) * std::numbers::sqrt2 * std::sin(j * kPi * x);
      },
      0.0, 1.0, 64, 12);
}

double l2_error(const GalerkinSpace& sp, const Eigen::VectorXd& c,
                const SpatialFn& v) {
  const double e2 = composite_gauss(
      [&](double x) {
        const double d = sp.evaluate(c, x) - v(x, 0.0);
        return d * d;
      },
      0.0, 1.0, 256, 8);
  return std::sqrt(e2);
}

}  // namespace

TEST_CASE("L2 projection is idempotent on FEM spaces") {
  const GalerkinSpace sp = GalerkinSpace::fem_1d(Mesh1D::uniform(0, 1, 8), 2);
  const AssembledPair pair = assemble(sp, EllipticForm::scalar_laplace());
  const SpatialFn v = [](double x, double) { return std::sin(kPi * x); };
  const Eigen::VectorXd c = l2_project(sp, pair, v);
  const Eigen::VectorXd c2 =
      l2_project(sp, pair, [&](double x, double) { return sp.evaluate(c, x); });
  CHECK((c - c2).cwiseAbs().maxCoeff() <= 1e-11);
}

TEST_CASE("spectral L2 projection of the first eigenmode") {
  const GalerkinSpace sp = GalerkinSpace::spectral(5);
  const AssembledPair pair = assemble(sp, EllipticForm::scalar_laplace());
  const Eigen::VectorXd c =
      l2_project(sp, pair, [](double x, double) { return std::sin(kPi * x); });
  CHECK(c[0] == Catch::Approx(1.0 / std::numbers::sqrt2).epsilon(1e-12));
  for (int j = 1; j < 5; ++j) CHECK(std::abs(c[j]) <= 1e-12);
}

TEST_CASE("Fourier coefficients of x(1-x)") {
  const GalerkinSpace sp = GalerkinSpace::spectral(8);
  const SpatialFn v = [](double x, double) { return x * (1.0 - x); };
  const Eigen::VectorXd c = fourier_project(sp, v);
  for (int j = 1; j <= 8; ++j) {
    // closed form: 2 sqrt(2) (1 - (-1)^j) / (j pi)^3
    const double exact =
        2.0 * std::numbers::sqrt2 * (1.0 - std::pow(-1.0, j)) / std::pow(j * kPi, 3);
    CHECK(c[j - 1] == Catch::Approx(exact).margin(1e-13));
    CHECK(c[j - 1] == Catch::Approx(fourier_oracle(v, j)).margin(1e-13));
  }
  CHECK_THROWS_AS(fourier_project(GalerkinSpace::fem_1d(Mesh1D::uniform(0, 1, 4), 1), v),
                  std::invalid_argument);
}

TEST_CASE("Fourier and L2 projections coincide on spectral spaces") {
  const GalerkinSpace sp = GalerkinSpace::spectral(6);
  const AssembledPair pair = assemble(sp, EllipticForm::scalar_laplace());
  const SpatialFn v = [](double x, double) { return x * x * (1.0 - x); };
  const Eigen::VectorXd cf = fourier_project(sp, v);
  const Eigen::VectorXd cl = l2_project(sp, pair, v);
  CHECK((cf - cl).cwiseAbs().maxCoeff() <= 1e-12);
}

TEST_CASE("Ritz projection satisfies Galerkin orthogonality") {
  const GalerkinSpace sp = GalerkinSpace::fem_1d(Mesh1D::uniform(0, 1, 16), 1);
  const AssembledPair pair = assemble(sp, EllipticForm::scalar_laplace());
  const GradientFn dv = [](double x, double) {
    return std::array<double, 2>{kPi * std::cos(kPi * x), 0.0};
  };
  const Eigen::VectorXd c = ritz_project(sp, pair, dv);
  const Eigen::VectorXd res = detail::energy_load(sp, dv) - pair.S * c;
  CHECK(res.cwiseAbs().maxCoeff() <= 1e-11);
}

TEST_CASE("Ritz projection converges at second order in L2") {
  const SpatialFn v = [](double x, double) { return std::sin(kPi * x); };
  const GradientFn dv = [](double x, double) {
    return std::array<double, 2>{kPi * std::cos(kPi * x), 0.0};
  };
  double prev = 0.0;
  std::vector<double> errs;
  for (int n : {8, 16, 32}) {
    const GalerkinSpace sp = GalerkinSpace::fem_1d(Mesh1D::uniform(0, 1, n), 1);
    const AssembledPair pair = assemble(sp, EllipticForm::scalar_laplace());
    errs.push_back(l2_error(sp, ritz_project(sp, pair, dv), v));
  }
  for (std::size_t i = 1; i < errs.size(); ++i) {
    const double rate = std::log2(errs[i - 1] / errs[i]);
    CHECK(rate > 1.9);
    CHECK(rate < 2.1);
  }
  (void)prev;
}

TEST_CASE("P2 L2 projection converges at third order") {
  const SpatialFn v = [](double x, double) { return std::sin(kPi * x); };
  std::vector<double> errs;
  for (int n : {4, 8, 16}) {
    const GalerkinSpace sp = GalerkinSpace::fem_1d(Mesh1D::uniform(0, 1, n), 2);
    const AssembledPair pair = assemble(sp, EllipticForm::scalar_laplace());
    errs.push_back(l2_error(sp, l2_project(sp, pair, v), v));
  }
  for (std::size_t i = 1; i < errs.size(); ++i) {
    const double rate = std::log2(errs[i - 1] / errs[i]);
    CHECK(rate > 2.85);
    CHECK(rate < 3.15);
  }
}
