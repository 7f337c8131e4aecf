#include <gtest/gtest.h>

#include <random>

#include "helpers.hpp"

using namespace qgs;
using qgs::testing::interval_system;
using qgs::testing::pi;

TEST(Secular, TwoBodyPhase) {
  EXPECT_NEAR(std::abs(s_p(1.0, 0.0) - 1.0), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(s_p(1.0, 1.0) - cplx(0, -1)), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(s_p(0.0, 2.0) + 1.0), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(s_p(3.7, 0.4)), 1.0, 1e-15);
  EXPECT_THROW(s_p(0.0, 0.0), PoleError);
}

TEST(Secular, OneParticleReduction) {
  for (const auto& g : {interval_graph(1.0), equilateral_star_graph(3, 1.0)}) {
    const StarRepresentation star(g);
    const BoundaryMatrices bc = mixed_conditions(star, {0});
    const SecularSystem sys(SystemAssembly(star, bc, 1, 1.0));
    for (double k = 0.05; k < 10; k += 0.37)
      EXPECT_NEAR(std::abs(secular_value(sys, {k}) - one_particle_secular(bc, star, k)), 0.0, 1e-12);
  }
}

TEST(Secular, NonInteractingRoot) {
  const SecularSystem sys = interval_system(2, 1.0, 1.0, false);
  for (const auto& r : quantization_residuals(sys, {pi, 2 * pi})) EXPECT_LT(std::abs(r), 1e-12);
  EXPECT_LT(sigma_min(sys, {pi, 2 * pi}), 1e-12);
  EXPECT_GT(sigma_min(sys, {pi, 2.5 * pi}), 1e-3);
}

TEST(Secular, GaudinRootsAreJointZeros) {
  for (double alpha : {0.5, 1.0, 10.0}) {
    const SecularSystem sys = interval_system(2, alpha);
    const WaveTuple k = solve_interval_bethe(alpha, 1.0, {1, 3});
    EXPECT_LT(interval_bethe_residual(k, alpha, 1.0).max_norm, 1e-12);
    for (double s : shift_sigma_min(sys, k)) EXPECT_LT(s, 1e-10);
    EXPECT_GT(sigma_min(sys, {k[0] + 0.05, k[1]}), 1e-4);
  }
}

TEST(Secular, ClosureUnderReorderingAndReflection) {
  const SecularSystem sys = interval_system(3, 1.0);
  const WaveTuple k = solve_interval_bethe(1.0, 1.0, {1, 2, 4});
  for (const auto& x : enumerate(2)) {
    const WaveTuple kx = act(embed(x, 3), k);
    for (double s : shift_sigma_min(sys, kx)) EXPECT_LT(s, 1e-9);
  }
  for (double s : shift_sigma_min(sys, act(element_r(3, 3), k))) EXPECT_LT(s, 1e-9);
}

TEST(Secular, Continuity) {
  const SecularSystem sys = interval_system(2, 1.0);
  const cplx a = secular_value(sys, {1.3, 2.9});
  const cplx b = secular_value(sys, {1.3 + 1e-8, 2.9 - 1e-8});
  EXPECT_LT(std::abs(a - b), 1e-6);
}

TEST(Secular, ChainIsUnitary) {
  const StarRepresentation star(equilateral_star_graph(3, 1.0));
  const SecularSystem sys(SystemAssembly(star, kirchhoff_conditions(star), 2, 0.7));
  const CMatrix u = unitary_chain(sys, {0.8, 2.3});
  EXPECT_LT((u * u.adjoint() - CMatrix::Identity(sys.dim(), sys.dim())).norm(), 1e-12);
}

TEST(Secular, BosonicSectorIsInvariant) {
  const SecularSystem sys = interval_system(3, 1.0);
  const CMatrix v = sector_basis(sys.assembly, Sector::bosonic);
  EXPECT_LT((v.adjoint() * v - CMatrix::Identity(v.cols(), v.cols())).norm(), 1e-14);
  const CMatrix u = unitary_chain(sys, {0.9, 1.7, 3.1});
  const CMatrix ub = sector_unitary(sys, {0.9, 1.7, 3.1}, Sector::bosonic);
  EXPECT_LT((u * v - v * ub).norm(), 1e-12);
}

TEST(Secular, FastSigmaMatchesSvd) {
  const SecularSystem sys = interval_system(2, 1.0);
  for (const WaveTuple& k : {WaveTuple{0.7, 2.2}, WaveTuple{3.0, 6.1}}) {
    const double s = sigma_min(sys, k);
    EXPECT_NEAR(std::sqrt(fast_sigma_min_sq(unitary_chain(sys, k))), s, 1e-7);
  }
}

TEST(Secular, SingularVertexFactorIsReported) {
  const StarRepresentation star(equilateral_star_graph(3, 1.0));
  const SecularSystem sys(SystemAssembly(star, kirchhoff_conditions(star), 2, 1.0));
  try {
    secular_value(sys, {1.0, 0.0});
    FAIL() << "no error";
  } catch (const SingularityError& e) {
    EXPECT_NE(std::string(e.what()).find("S_v"), std::string::npos);
  }
  EXPECT_THROW(secular_value(sys, {1.0}), ValidationError);
}

TEST(Secular, CyclicShift) {
  EXPECT_EQ(cyclic_shift({1, 2, 3}, 1), (WaveTuple{3, 1, 2}));
  EXPECT_EQ(cyclic_shift({1, 2, 3}, 3), (WaveTuple{1, 2, 3}));
  EXPECT_EQ(cyclic_shift({1, 2, 3}, 1), act(element_c(3), {1, 2, 3}));
}
