#include <catch2/catch_amalgamated.hpp>

#include <sstream>

#include <Eigen/Eigenvalues>

#include "memwave/assembly.hpp"

using namespace memwave;

namespace {

// analytic element matrices of the constant-strain triangle in Voigt form,
// independent of the quadrature assembly path
Eigen::MatrixXd cst_stiffness(const std::array<std::array<double, 2>, 3>& p,
                              double lambda, double mu) {
  const double b1 = p[1][1] - p[2][1], b2 = p[2][1] - p[0][1], b3 = p[0][1] - p[1][1];
  const double c1 = p[2][0] - p[1][0], c2 = p[0][0] - p[2][0], c3 = p[1][0] - p[0][0];
  const double A = 0.5 * (b1 * c2 - b2 * c1);
  Eigen::MatrixXd B = Eigen::MatrixXd::Zero(3, 6);
  B << b1, 0, b2, 0, b3, 0,
       0, c1, 0, c2, 0, c3,
       c1, b1, c2, b2, c3, b3;
  B /= 2.0 * A;
  Eigen::Matrix3d D;
  D << lambda + 2 * mu, lambda, 0,
       lambda, lambda + 2 * mu, 0,
       0, 0, mu;
  return A * B.transpose() * D * B;
}

void check_spd(const SparseMat& A) {
  const Eigen::MatrixXd Ad(A);
  CHECK((Ad - Ad.transpose()).cwiseAbs().maxCoeff() <=
        1e-14 * Ad.cwiseAbs().maxCoeff());
  Eigen::LLT<Eigen::MatrixXd> llt(Ad);
  CHECK(llt.info() == Eigen::Success);
}

}  // namespace

TEST_CASE("1D P1 uniform mass and stiffness rows") {
  const int n = 8;
  const double h = 1.0 / n;
  const GalerkinSpace sp = GalerkinSpace::fem_1d(Mesh1D::uniform(0, 1, n), 1);
  const AssembledPair pair = assemble(sp, EllipticForm::scalar_laplace());
  const Eigen::MatrixXd M(pair.M), S(pair.S);
  const int i = 3;  // interior dof
  CHECK(M(i, i) == Catch::Approx(4.0 * h / 6.0).epsilon(1e-14));
  CHECK(M(i, i - 1) == Catch::Approx(h / 6.0).epsilon(1e-14));
  CHECK(M(i, i + 1) == Catch::Approx(h / 6.0).epsilon(1e-14));
  CHECK(S(i, i) == Catch::Approx(2.0 / h).epsilon(1e-14));
  CHECK(S(i, i - 1) == Catch::Approx(-1.0 / h).epsilon(1e-14));
  CHECK(S(i, i + 1) == Catch::Approx(-1.0 / h).epsilon(1e-14));
}

TEST_CASE("spectral assembly is identity mass and eigenvalue stiffness") {
  const GalerkinSpace sp = GalerkinSpace::spectral(6);
  const AssembledPair pair = assemble(sp, EllipticForm::scalar_laplace());
  const Eigen::MatrixXd M(pair.M), S(pair.S);
  CHECK((M - Eigen::MatrixXd::Identity(6, 6)).cwiseAbs().maxCoeff() == 0.0);
  for (int j = 0; j < 6; ++j) {
    const double lam = std::pow((j + 1) * std::numbers::pi, 2);
    CHECK(S(j, j) == Catch::Approx(lam).epsilon(1e-14));
  }
  // orthonormality of the basis under quadrature
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) {
      const double ip = composite_gauss(
          [&](double x) { return sp.spectral_basis(i, x) * sp.spectral_basis(j, x); },
          0.0, 1.0, 32, 10);
      CHECK(ip == Catch::Approx(i == j ? 1.0 : 0.0).margin(1e-12));
    }
}

TEST_CASE("elasticity element matrix matches the analytic CST oracle") {
  const double lambda = 2.0, mu = 1.5;
  const TriMesh2D mesh = TriMesh2D::single_triangle();  // all Neumann: no constraints
  const GalerkinSpace sp = GalerkinSpace::fem_2d(mesh, 1, 2);
  REQUIRE(sp.dimension() == 6);
  const AssembledPair pair = assemble(sp, EllipticForm::elasticity(lambda, mu));
  const Eigen::MatrixXd S(pair.S);

  const Eigen::MatrixXd oracle = cst_stiffness(
      {{{0.0, 0.0}, {1.0, 0.0}, {0.0, 1.0}}}, lambda, mu);
  CHECK((S - oracle).cwiseAbs().maxCoeff() <= 1e-12);

  // rigid modes (two translations, one rotation) span the nullspace
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(S);
  int zeros = 0;
  for (int i = 0; i < 6; ++i)
    if (std::abs(es.eigenvalues()[i]) < 1e-12) ++zeros;
  CHECK(zeros == 3);
  for (int i = 3; i < 6; ++i) CHECK(es.eigenvalues()[i] > 1e-10);
}

TEST_CASE("assembled pairs are symmetric positive definite") {
  const GalerkinSpace s1 = GalerkinSpace::fem_1d(Mesh1D::uniform(0, 1, 9), 2);
  const AssembledPair p1 = assemble(s1, EllipticForm::scalar_laplace());
  check_spd(p1.M);
  check_spd(p1.S);

  const GalerkinSpace s2 =
      GalerkinSpace::fem_2d(TriMesh2D::unit_square(4, Side::Top), 2);
  const AssembledPair p2 = assemble(s2, EllipticForm::scalar_laplace());
  check_spd(p2.M);
  check_spd(p2.S);

  const GalerkinSpace s3 =
      GalerkinSpace::fem_2d(TriMesh2D::unit_square(3), 1, 2);
  const AssembledPair p3 = assemble(s3, EllipticForm::elasticity(1.0, 1.0));
  check_spd(p3.M);
  check_spd(p3.S);
}

TEST_CASE("form/space mismatches are rejected") {
  const GalerkinSpace scalar2d = GalerkinSpace::fem_2d(TriMesh2D::unit_square(2), 1);
  CHECK_THROWS_AS(assemble(scalar2d, EllipticForm::elasticity(1.0, 1.0)),
                  std::invalid_argument);
  const GalerkinSpace vec2d = GalerkinSpace::fem_2d(TriMesh2D::unit_square(2), 1, 2);
  CHECK_THROWS_AS(assemble(vec2d, EllipticForm::scalar_laplace()),
                  std::invalid_argument);
  CHECK_THROWS_AS(assemble(GalerkinSpace::spectral(2), EllipticForm::elasticity(1, 1)),
                  std::invalid_argument);
  CHECK_THROWS_AS(EllipticForm::elasticity(0.0, 0.0), std::invalid_argument);
}

TEST_CASE("load vector") {
  SECTION("zero load gives zero vector") {
    const GalerkinSpace sp = GalerkinSpace::fem_1d(Mesh1D::uniform(0, 1, 8), 1);
    const Eigen::VectorXd F = assemble_load(sp, [](double, double) { return 0.0; });
    CHECK(F.cwiseAbs().maxCoeff() == 0.0);
  }
  SECTION("constant load on 1D P1 gives h per interior node") {
    const int n = 8;
    const GalerkinSpace sp = GalerkinSpace::fem_1d(Mesh1D::uniform(0, 1, n), 1);
    const Eigen::VectorXd F = assemble_load(sp, [](double, double) { return 1.0; });
    for (int i = 0; i < sp.dimension(); ++i)
      CHECK(F[i] == Catch::Approx(1.0 / n).epsilon(1e-14));
  }
  SECTION("unit Neumann datum spreads L/2 to edge nodes") {
    const TriMesh2D mesh = TriMesh2D::unit_square(2, Side::Right);
    const GalerkinSpace sp = GalerkinSpace::fem_2d(mesh, 1);
    const Eigen::VectorXd F =
        assemble_load(sp, [](double, double) { return 0.0; },
                      [](double, double) { return 1.0; });
    // the free Neumann node (1, 0.5) touches two edges of length 1/2
    const double expect = 0.5 * 0.5 + 0.5 * 0.5;
    bool found = false;
    for (int i = 0; i < sp.dimension(); ++i)
      if (F[i] != 0.0) {
        CHECK(F[i] == Catch::Approx(expect).epsilon(1e-14));
        found = true;
      }
    CHECK(found);
  }
  SECTION("Neumann datum without Neumann edges is an error") {
    const GalerkinSpace sp = GalerkinSpace::fem_2d(TriMesh2D::unit_square(2), 1);
    CHECK_THROWS_AS(assemble_load(sp, [](double, double) { return 0.0; },
                                  [](double, double) { return 1.0; }),
                    std::invalid_argument);
  }
}

TEST_CASE("trace constant") {
  const GalerkinSpace dir = GalerkinSpace::fem_2d(TriMesh2D::unit_square(3), 1);
  const AssembledPair pd = assemble(dir, EllipticForm::scalar_laplace());
  CHECK(trace_constant(dir, pd) == 0.0);

  const GalerkinSpace mixed =
      GalerkinSpace::fem_2d(TriMesh2D::unit_square(3, Side::Right), 1);
  const AssembledPair pm = assemble(mixed, EllipticForm::scalar_laplace());
  CHECK(trace_constant(mixed, pm) > 0.0);
}

TEST_CASE("coordinate export") {
  const GalerkinSpace sp = GalerkinSpace::fem_1d(Mesh1D::uniform(0, 1, 4), 1);
  const AssembledPair pair = assemble(sp, EllipticForm::scalar_laplace());
  std::stringstream ss;
  write_coordinate(ss, pair.S);
  int rows = 0;
  std::string line;
  while (std::getline(ss, line)) ++rows;
  CHECK(rows == static_cast<int>(pair.S.nonZeros()));
}
