#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <numbers>
#include <random>

#include "memwave/volterra.hpp"

using namespace memwave;

namespace {

constexpr double kPi = std::numbers::pi;

SemidiscreteSystem spectral_system(int modes, MemoryKernel kernel, double T) {
  const GalerkinSpace sp = GalerkinSpace::spectral(modes);
  SemidiscreteSystem sys;
  sys.pair = assemble(sp, EllipticForm::scalar_laplace());
  sys.kernel = std::move(kernel);
  sys.alpha0 = Eigen::VectorXd::Zero(modes);
  sys.alphadot0 = Eigen::VectorXd::Zero(modes);
  sys.T = T;
  return sys;
}

}  // namespace

TEST_CASE("initial coefficients") {
  SECTION("Fourier projection of the first eigenmode") {
    const GalerkinSpace sp = GalerkinSpace::spectral(4);
    const AssembledPair pair = assemble(sp, EllipticForm::scalar_laplace());
    InitialDatum u0{[](double x, double) { return std::sin(kPi * x); }, nullptr};
    InitialDatum u1{[](double, double) { return 0.0; }, nullptr};
    const auto [a0, a1] = initial_coefficients(sp, pair, u0, u1,
                                               InitialProjection::Fourier,
                                               InitialProjection::Fourier);
    CHECK(a0[0] == Catch::Approx(std::numbers::sqrt2 / 2.0).epsilon(1e-12));
    CHECK(a0.tail(3).cwiseAbs().maxCoeff() <= 1e-12);
    CHECK(a1.cwiseAbs().maxCoeff() <= 1e-13);
  }
  SECTION("Ritz choice requires a gradient") {
    const GalerkinSpace sp = GalerkinSpace::fem_1d(Mesh1D::uniform(0, 1, 8), 1);
    const AssembledPair pair = assemble(sp, EllipticForm::scalar_laplace());
    InitialDatum u{[](double x, double) { return x * (1 - x); }, nullptr};
    CHECK_THROWS_AS(initial_coefficients(sp, pair, u, u, InitialProjection::Ritz,
                                         InitialProjection::L2),
                    std::invalid_argument);
  }
}

TEST_CASE("first-order block actions for a single mode") {
  SemidiscreteSystem sys = spectral_system(1, MemoryKernel::zero(), 1.0);
  sys.alpha0 << 1.0;
  const FirstOrderSystem fo(sys);
  const double lam = kPi * kPi;
  Eigen::VectorXd D(2);
  D << 0.3, -0.7;
  const Eigen::VectorXd a = fo.apply_MinvSt(D);
  CHECK(a[0] == Catch::Approx(0.7).epsilon(1e-14));
  CHECK(a[1] == Catch::Approx(lam * 0.3).epsilon(1e-13));
  const Eigen::VectorXd b = fo.apply_MinvStt(D);
  CHECK(b[0] == 0.0);
  CHECK(b[1] == Catch::Approx(lam * 0.3).epsilon(1e-13));
}

TEST_CASE("analytic cosine solves the zero-kernel first-order system") {
  SemidiscreteSystem sys = spectral_system(1, MemoryKernel::zero(), 1.0);
  sys.alpha0 << 1.0;
  const FirstOrderSystem fo(sys);
  const double w = kPi;
  for (double t : {0.1, 0.4, 0.9}) {
    Eigen::VectorXd D(2), Ddot(2);
    D << std::cos(w * t), -w * std::sin(w * t);
    Ddot << -w * std::sin(w * t), -w * w * std::cos(w * t);
    const Eigen::VectorXd conv = Eigen::VectorXd::Zero(2);
    CHECK(fo.residual(t, D, Ddot, conv).cwiseAbs().maxCoeff() <= 1e-12);
  }
}

TEST_CASE("integral-equation kernel reproduces the cosine solution") {
  // D(t) = int_0^t Kc(t,s) D(s) ds + D(0) must hold for the exact solution
  // of the zero-kernel problem; this pins down the sign of Kc
  SemidiscreteSystem sys = spectral_system(1, MemoryKernel::zero(), 1.0);
  sys.alpha0 << 1.0;
  const VolterraIE ie(sys);
  const double w = kPi;
  auto exact = [&](double s) {
    Eigen::VectorXd D(2);
    D << std::cos(w * s), -w * std::sin(w * s);
    return D;
  };
  const double t = 0.8;
  const int n = 4000;
  Eigen::VectorXd integral = Eigen::VectorXd::Zero(2);
  for (int i = 0; i <= n; ++i) {
    const double s = t * i / n;
    const double wq = (i == 0 || i == n) ? 0.5 : 1.0;
    integral += wq * (t / n) * ie.apply_kernel(t, s, exact(s));
  }
  const Eigen::VectorXd rhs = integral + ie.initial_state();
  CHECK((rhs - exact(t)).cwiseAbs().maxCoeff() <= 1e-6);
}

TEST_CASE("kernel matrix matches the block action and stays continuous") {
  const auto pl = MemoryKernel::power_law(
      0.5, MemoryKernel::power_law_scale_for_kappa(0.5, 1.0, 0.5), 1.0);
  SemidiscreteSystem sys = spectral_system(3, pl, 1.0);
  const VolterraIE ie(sys);
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  for (int trial = 0; trial < 10; ++trial) {
    double s = 0.5 * (dist(rng) + 1.0), t = 0.5 * (dist(rng) + 1.0);
    if (s > t) std::swap(s, t);
    Eigen::VectorXd D(6);
    for (int i = 0; i < 6; ++i) D[i] = dist(rng);
    const Eigen::VectorXd via_mat = ie.kernel_matrix(t, s) * D;
    CHECK((via_mat - ie.apply_kernel(t, s, D)).cwiseAbs().maxCoeff() <= 1e-13);
  }
  // P(0) = 0 even for the weakly singular kernel: on the diagonal the
  // lower-left block is exactly -M^{-1}S
  const Eigen::MatrixXd Kd = ie.kernel_matrix(0.7, 0.7);
  CHECK((Kd.bottomLeftCorner(3, 3) + ie.minv_s()).cwiseAbs().maxCoeff() <= 1e-13);
}

TEST_CASE("forcing term on a grid") {
  SECTION("no load collapses to the initial state") {
    SemidiscreteSystem sys = spectral_system(2, MemoryKernel::zero(), 1.0);
    sys.alpha0 << 1.0, -2.0;
    sys.alphadot0 << 0.25, 0.0;
    const VolterraIE ie(sys);
    const std::vector<double> grid{0.0, 0.25, 0.5, 0.75, 1.0};
    for (const auto& Fc : ie.forcing_on_grid(grid))
      CHECK((Fc - ie.initial_state()).cwiseAbs().maxCoeff() == 0.0);
  }
  SECTION("linear load integrates exactly under the trapezoid rule") {
    SemidiscreteSystem sys = spectral_system(1, MemoryKernel::zero(), 1.0);
    sys.load = [](double t) {
      Eigen::VectorXd F(1);
      F << 3.0 * t;
      return F;
    };
    const VolterraIE ie(sys);
    std::vector<double> grid;
    for (int i = 0; i <= 8; ++i) grid.push_back(i / 8.0);
    const auto Fc = ie.forcing_on_grid(grid);
    for (std::size_t i = 0; i < grid.size(); ++i) {
      CHECK(Fc[i][0] == 0.0);
      CHECK(Fc[i][1] == Catch::Approx(1.5 * grid[i] * grid[i]).margin(1e-14));
    }
  }
}

TEST_CASE("Z bound") {
  const double c = 0.4 / (1.0 - std::exp(-1.0));
  SemidiscreteSystem sys = spectral_system(3, MemoryKernel::exponential(c, 1.0, 1.0), 1.0);
  const double Z = bound_Z(sys);
  CHECK(Z == Catch::Approx(1.4 * 9.0 * kPi * kPi).epsilon(1e-10));

  // Z dominates the sampled sup of |Kc(t,s)|_inf on the triangle s <= t
  const VolterraIE ie(sys);
  double sup = 0.0;
  for (int i = 0; i < 50; ++i)
    for (int j = 0; j <= i; ++j) {
      const double t = i / 49.0, s = t * (i == 0 ? 0.0 : double(j) / i);
      const Eigen::MatrixXd K = ie.kernel_matrix(t, s);
      sup = std::max(sup, K.cwiseAbs().rowwise().sum().maxCoeff());
    }
  CHECK(Z >= sup);
}

TEST_CASE("Z0 bound") {
  SemidiscreteSystem sys = spectral_system(2, MemoryKernel::zero(), 1.0);
  sys.alpha0 << 2.0, -1.0;
  sys.alphadot0 << 0.5, 0.0;
  CHECK(bound_Z0(sys) == Catch::Approx(2.5).epsilon(1e-14));
  // with load: unit mass diagonal, zero trace constant -> + f_l1
  CHECK(bound_Z0(sys, 0.75) == Catch::Approx(3.25).epsilon(1e-14));

  // Z0 dominates sup |Fc|_inf when the load respects the declared L1 norm
  sys.load = [](double t) {
    Eigen::VectorXd F(2);
    F << std::sin(5.0 * t), std::cos(5.0 * t);
    return F;
  };
  const VolterraIE ie(sys);
  std::vector<double> grid;
  for (int i = 0; i <= 200; ++i) grid.push_back(i / 200.0);
  double sup = 0.0;
  for (const auto& Fc : ie.forcing_on_grid(grid))
    sup = std::max(sup, Fc.cwiseAbs().maxCoeff());
  CHECK(bound_Z0(sys, /*f_l1=*/1.0) >= sup);
}
