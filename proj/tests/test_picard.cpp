#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <numbers>

#include "memwave/picard.hpp"

using namespace memwave;

namespace {

// hand-built 1x1 system M = 1, S = lam: alpha'' + lam alpha = 0 for the
// zero kernel, exact solution alpha0 cos(sqrt(lam) t)
SemidiscreteSystem scalar_system(double lam, MemoryKernel kernel, double T) {
  SemidiscreteSystem sys;
  sys.pair.M.resize(1, 1);
  sys.pair.S.resize(1, 1);
  sys.pair.M.insert(0, 0) = 1.0;
  sys.pair.S.insert(0, 0) = lam;
  sys.pair.M.makeCompressed();
  sys.pair.S.makeCompressed();
  sys.kernel = std::move(kernel);
  sys.alpha0 = Eigen::VectorXd::Zero(1);
  sys.alphadot0 = Eigen::VectorXd::Zero(1);
  sys.T = T;
  return sys;
}

}  // namespace

TEST_CASE("trivial data converges immediately") {
  const SemidiscreteSystem sys = scalar_system(4.0, MemoryKernel::zero(), 1.0);
  const PicardResult res = picard_solve(VolterraIE(sys), 16);
  CHECK(res.converged);
  CHECK(res.iterations == 1);
  CHECK(res.last_increment == 0.0);
  for (const auto& D : res.trajectory) CHECK(D.cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("harmonic oscillator at second order in the grid") {
  SemidiscreteSystem sys = scalar_system(4.0, MemoryKernel::zero(), 0.75);
  sys.alpha0 << 1.0;
  const VolterraIE ie(sys);
  PicardOptions opt;
  opt.tol = 1e-12;
  opt.max_iters = 200;
  std::vector<double> errs;
  for (int steps : {100, 200, 400}) {
    const PicardResult res = picard_solve(ie, steps, opt);
    REQUIRE(res.converged);
    double err = 0.0;
    for (std::size_t i = 0; i < res.grid.size(); ++i)
      err = std::max(err,
                     std::abs(res.trajectory[i][0] - std::cos(2.0 * res.grid[i])));
    errs.push_back(err);
  }
  for (std::size_t i = 1; i < errs.size(); ++i) {
    const double rate = std::log2(errs[i - 1] / errs[i]);
    CHECK(rate > 1.8);
    CHECK(rate < 2.2);
  }
}

TEST_CASE("factorial bounds dominate measured increments") {
  // spectral modes with an exponential kernel; T sized so Z*T is modest and
  // a tight tolerance forces a tail of iterations
  const GalerkinSpace sp = GalerkinSpace::spectral(4);
  SemidiscreteSystem sys;
  sys.pair = assemble(sp, EllipticForm::scalar_laplace());
  sys.kernel = MemoryKernel::exponential(1.0, 2.0, 1.0);
  sys.alpha0 = Eigen::VectorXd::Constant(4, 0.5);
  sys.alphadot0 = Eigen::VectorXd::Zero(4);
  sys.T = 0.017;
  PicardOptions opt;
  opt.tol = 1e-14;
  const PicardResult res = picard_solve(VolterraIE(sys), 64, opt);
  REQUIRE(res.converged);
  CHECK(res.iterations >= 5);
  CHECK(res.certificate.Z ==
        Catch::Approx((1.0 + sys.kernel.l1_norm(sys.T)) * 16.0 * std::pow(std::numbers::pi, 2))
            .epsilon(1e-10));
  CHECK(res.certificate.Z0 == Catch::Approx(0.5).epsilon(1e-14));
  CHECK(res.certificate.iterations.size() == std::size_t(res.iterations));
  CHECK(res.certificate.dominated());
  for (const auto& it : res.certificate.iterations) CHECK(it.bound > 0.0);
}

TEST_CASE("perturbed starting iterate lands on the same fixed point") {
  SemidiscreteSystem sys = scalar_system(4.0, MemoryKernel::exponential(0.5, 1.0, 1.0), 0.5);
  sys.alpha0 << 1.0;
  sys.alphadot0 << -0.25;
  const VolterraIE ie(sys);
  PicardOptions opt;
  opt.tol = 1e-12;
  opt.max_iters = 200;
  const PicardResult base = picard_solve(ie, 128, opt);
  REQUIRE(base.converged);

  PicardOptions perturbed = opt;
  perturbed.perturb_iterate0 = [](double t) {
    Eigen::VectorXd p(2);
    p << 0.3 * std::sin(9.0 * t), -0.2 * std::cos(5.0 * t);
    return p;
  };
  const PicardResult probe = picard_solve(ie, 128, perturbed);
  REQUIRE(probe.converged);
  double gap = 0.0;
  for (std::size_t i = 0; i < base.trajectory.size(); ++i)
    gap = std::max(gap,
                   (base.trajectory[i] - probe.trajectory[i]).cwiseAbs().maxCoeff());
  CHECK(gap <= 10.0 * opt.tol);
}

TEST_CASE("argument validation") {
  const SemidiscreteSystem sys = scalar_system(1.0, MemoryKernel::zero(), 1.0);
  const VolterraIE ie(sys);
  CHECK_THROWS_AS(picard_solve(ie, 4), std::invalid_argument);
  PicardOptions opt;
  opt.tol = 0.0;
  CHECK_THROWS_AS(picard_solve(ie, 16, opt), std::invalid_argument);
}
