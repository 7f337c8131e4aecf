#include <gtest/gtest.h>

#include "helpers.hpp"

using namespace qgs;
using qgs::testing::pi;

TEST(FDOracle, OneParticle) {
  const auto e = fd_one_particle(1.0, 200, 3);
  EXPECT_NEAR(e[0] / (pi * pi), 1.0, 1e-4);
  const auto x = fd_extrapolated(1, 1.0, 0.0, 100, 3);
  for (int m = 1; m <= 3; ++m) EXPECT_NEAR(x[m - 1].extrapolated / (m * m * pi * pi), 1.0, 1e-6);
}

TEST(FDOracle, SecondOrderConvergence) {
  const double exact = 2 * pi * pi;
  const double e1 = fd_two_bosons(1.0, 0.0, 32, 1)[0] - exact;
  const double e2 = fd_two_bosons(1.0, 0.0, 65, 1)[0] - exact;
  const double order = std::log(e1 / e2) / std::log((1.0 / 33) / (1.0 / 66));
  EXPECT_GE(order, 1.7);
  EXPECT_LE(order, 2.3);
}

TEST(FDOracle, FreeBosons) {
  const auto x = fd_extrapolated(2, 1.0, 0.0, 63, 3);
  const double expected[] = {2, 5, 8};
  for (int i = 0; i < 3; ++i) EXPECT_NEAR(x[i].extrapolated / (expected[i] * pi * pi), 1.0, 1e-3);
}

TEST(FDOracle, AgreesWithBetheGroundState) {
  const auto x = fd_extrapolated(2, 1.0, 2.0, 63, 1);
  const double bethe = energy(solve_interval_bethe(2.0, 1.0, {1, 2}));
  EXPECT_NEAR(x[0].extrapolated / bethe, 1.0, 1e-3);
}

TEST(FDOracle, StrongCouplingStaysBelowFermions) {
  const double e = fd_two_bosons(1.0, 1e4, 63, 1)[0];
  EXPECT_LT(e, 5 * pi * pi);
  EXPECT_GT(e, 4 * pi * pi);
}

TEST(FDOracle, MonotoneInCoupling) {
  double prev = 0;
  for (double alpha : {0.0, 0.5, 2.0, 10.0, 100.0}) {
    const double e = fd_two_bosons(1.0, alpha, 40, 1)[0];
    EXPECT_GT(e, prev);
    prev = e;
  }
}

TEST(FDOracle, SymmetricSpectrumIsPartOfTheFullOne) {
  const int n = 16;
  const Eigen::MatrixXd full(fd_two_particle_hamiltonian(1.0, 3.0, n));
  const Eigen::MatrixXd sym(fd_two_boson_hamiltonian(1.0, 3.0, n));
  const Eigen::VectorXd ef = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(full).eigenvalues();
  const Eigen::VectorXd es = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(sym).eigenvalues();
  EXPECT_EQ(es.size(), n * (n + 1) / 2);
  for (double e : es) EXPECT_LT((ef.array() - e).abs().minCoeff(), 1e-9 * e);
}

TEST(FDOracle, SparseAndDenseAgree) {
  const RSparse h = fd_two_boson_hamiltonian(1.0, 2.0, 40);
  const auto sparse = lowest_eigenvalues(h, 3);
  const Eigen::VectorXd dense = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(Eigen::MatrixXd(h)).eigenvalues();
  for (int i = 0; i < 3; ++i) EXPECT_NEAR(sparse[i], dense(i), 1e-9 * dense(i));
}

TEST(FDOracle, Guards) {
  EXPECT_THROW(fd_two_bosons(1.0, 1.0, 257, 1), SizeError);
  EXPECT_THROW(fd_two_bosons(1.0, 1.0, 20, 1), ValidationError);
  EXPECT_THROW(fd_two_bosons(1.0, -1.0, 40, 1), ValidationError);
  EXPECT_THROW(fd_extrapolated(3, 1.0, 1.0, 40, 1), ValidationError);
  EXPECT_THROW(fd_one_particle(1.0, 8, 1), ValidationError);
}
