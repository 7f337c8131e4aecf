#include <gtest/gtest.h>

#include "helpers.hpp"

using namespace qgs;
using qgs::testing::pi;

TEST(Scattering, Dirichlet) {
  const StarRepresentation s(equilateral_star_graph(3, 1.0));
  const CMatrix sv = vertex_s_matrix(dirichlet_conditions(s), 2.0);
  EXPECT_NEAR((sv + CMatrix::Identity(6, 6)).norm(), 0.0, 1e-14);
}

TEST(Scattering, KirchhoffIsKIndependent) {
  const StarRepresentation s(equilateral_star_graph(3, 1.0));
  const BoundaryMatrices bc = kirchhoff_conditions(s);
  const CMatrix centre = vertex_s_matrix(bc, 1.7).topLeftCorner(3, 3);
  CMatrix expected = CMatrix::Constant(3, 3, 2.0 / 3.0);
  expected.diagonal().array() -= 1.0;
  EXPECT_NEAR((centre - expected).norm(), 0.0, 1e-13);
  // degree-one vertices are Neumann
  EXPECT_NEAR(std::abs(vertex_s_matrix(bc, 1.7)(4, 4) - 1.0), 0.0, 1e-13);
  EXPECT_NEAR((vertex_s_matrix(bc, 0.3) - vertex_s_matrix(bc, 9.1)).norm(), 0.0, 1e-12);
}

TEST(Scattering, UnitarityAndInverse) {
  const StarRepresentation s(complete_graph(4, 1.0));
  const BoundaryMatrices bc = kirchhoff_conditions(s);
  const StarRepresentation st(equilateral_star_graph(3, 1.0));
  const BoundaryMatrices mixed = mixed_conditions(st, {0});
  for (double u : {0.4, 1.9, -3.3}) {
    const CMatrix a = vertex_s_matrix(bc, u);
    EXPECT_NEAR((a * a.adjoint() - CMatrix::Identity(12, 12)).norm(), 0.0, 1e-13);
    EXPECT_NEAR((a * vertex_s_matrix(bc, -u) - CMatrix::Identity(12, 12)).norm(), 0.0, 1e-13);
    const CMatrix m = vertex_s_matrix(mixed, u);
    EXPECT_NEAR((m * vertex_s_matrix(mixed, -u) - CMatrix::Identity(6, 6)).norm(), 0.0, 1e-13);
  }
}

TEST(Scattering, SingularAtZeroForKirchhoff) {
  const StarRepresentation s(equilateral_star_graph(3, 1.0));
  EXPECT_THROW(vertex_s_matrix(kirchhoff_conditions(s), 0.0), SingularityError);
  EXPECT_NO_THROW(vertex_s_matrix(dirichlet_conditions(s), 0.0));
}

TEST(Scattering, InvalidConditions) {
  CMatrix a = CMatrix::Identity(2, 2);
  CMatrix b = CMatrix::Zero(2, 2);
  b(0, 0) = cplx(0, 1);
  EXPECT_THROW(BoundaryMatrices(a, b), ValidationError);
  EXPECT_THROW(BoundaryMatrices(CMatrix::Zero(2, 2), CMatrix::Zero(2, 2)), ValidationError);
  EXPECT_THROW(BoundaryMatrices(CMatrix::Identity(2, 2), CMatrix::Zero(3, 3)), ValidationError);
}

TEST(Scattering, IntervalSecular) {
  const StarRepresentation s(interval_graph(1.0));
  const BoundaryMatrices bc = dirichlet_conditions(s);
  for (int m = 1; m <= 5; ++m) EXPECT_LT(std::abs(one_particle_secular(bc, s, m * pi)), 1e-12);
  EXPECT_GT(std::abs(one_particle_secular(bc, s, pi / 2)), 0.5);
}

TEST(Scattering, ThreeStarSecularMatchesBisection) {
  // Kirchhoff centre, Dirichlet leaves: eigenvalues solve cos(k) sin(k)^2 = 0.
  const StarRepresentation s(equilateral_star_graph(3, 1.0));
  const BoundaryMatrices bc = mixed_conditions(s, {0});
  auto f = [](double k) { return std::cos(k); };
  for (double lo : {1.0, 4.0, 7.5}) {
    double a = lo, b = lo + 1.0;
    for (int it = 0; it < 200 && b - a > 1e-15; ++it) {
      const double mid = 0.5 * (a + b);
      (f(a) * f(mid) <= 0 ? b : a) = mid;
    }
    EXPECT_LT(std::abs(one_particle_secular(bc, s, 0.5 * (a + b))), 1e-12);
  }
  EXPECT_LT(std::abs(one_particle_secular(bc, s, pi)), 1e-12);
  EXPECT_GT(std::abs(one_particle_secular(bc, s, 1.0)), 1e-3);
}

TEST(Scattering, TetrahedronSecular) {
  // Equilateral K4 with Kirchhoff conditions: cos k is an eigenvalue of the normalised
  // adjacency matrix (1 or -1/3), or sin k = 0.
  const StarRepresentation s(complete_graph(4, 1.0));
  const BoundaryMatrices bc = kirchhoff_conditions(s);
  EXPECT_LT(std::abs(one_particle_secular(bc, s, std::acos(-1.0 / 3.0))), 1e-12);
  EXPECT_LT(std::abs(one_particle_secular(bc, s, pi)), 1e-12);
  EXPECT_LT(std::abs(one_particle_secular(bc, s, 2 * pi)), 1e-12);
  EXPECT_GT(std::abs(one_particle_secular(bc, s, 1.0)), 1e-3);
}
