#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <Eigen/Sparse>
#include <Eigen/SparseCholesky>

#include "qgs/errors.hpp"

namespace qgs {

using RSparse = Eigen::SparseMatrix<double>;

struct FDGrid {
  FDGrid(double l_, int n_) : l(l_), N(n_), h(l_ / (n_ + 1)) {
    if (!(l > 0) || !std::isfinite(l)) throw ValidationError("fd grid: length must be positive");
    if (N < 16) throw ValidationError("fd grid: need at least 16 interior points");
  }
  double l;
  int N;
  double h;
};

// Lowest m eigenvalues of the 3-point Dirichlet Laplacian (-1, 2, -1)/h^2, ascending.
inline std::vector<double> fd_one_particle(double l, int N, int m) {
  const FDGrid g(l, N);
  if (m < 1 || m > N) throw ValidationError("fd_one_particle: level count out of range");
  Eigen::VectorXd diag = Eigen::VectorXd::Constant(N, 2.0 / (g.h * g.h));
  Eigen::VectorXd off = Eigen::VectorXd::Constant(N - 1, -1.0 / (g.h * g.h));
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
  es.computeFromTridiagonal(diag, off, Eigen::EigenvaluesOnly);
  return std::vector<double>(es.eigenvalues().data(), es.eigenvalues().data() + m);
}

// Two-point extrapolation for an O(h^2) error.
inline double richardson(double e1, double h1, double e2, double h2) {
  return (h1 * h1 * e2 - h2 * h2 * e1) / (h1 * h1 - h2 * h2);
}

// 5-point Laplacian on the N x N grid plus (2 alpha/h) on the diagonal x_1 = x_2, full space.
inline RSparse fd_two_particle_hamiltonian(double l, double alpha, int N) {
  const FDGrid g(l, N);
  const double w = 1.0 / (g.h * g.h);
  std::vector<Eigen::Triplet<double>> trip;
  auto at = [N](int i, int j) { return i * N + j; };
  for (int i = 0; i < N; ++i)
    for (int j = 0; j < N; ++j) {
      trip.emplace_back(at(i, j), at(i, j), 4 * w + (i == j ? 2 * alpha / g.h : 0.0));
      if (i > 0) trip.emplace_back(at(i, j), at(i - 1, j), -w);
      if (i + 1 < N) trip.emplace_back(at(i, j), at(i + 1, j), -w);
      if (j > 0) trip.emplace_back(at(i, j), at(i, j - 1), -w);
      if (j + 1 < N) trip.emplace_back(at(i, j), at(i, j + 1), -w);
    }
  RSparse out(N * N, N * N);
  out.setFromTriplets(trip.begin(), trip.end());
  return out;
}

// The same operator restricted to symmetric grid functions, in the orthonormal basis
// (|ij> + |ji>)/sqrt(2) for i < j and |ii>.
inline RSparse fd_two_boson_hamiltonian(double l, double alpha, int N) {
  const FDGrid g(l, N);
  const double w = 1.0 / (g.h * g.h);
  auto idx = [N](int i, int j) {
    if (i > j) std::swap(i, j);
    return i * N - i * (i - 1) / 2 + (j - i);
  };
  const int dim = N * (N + 1) / 2;
  std::vector<Eigen::Triplet<double>> trip;
  for (int i = 0; i < N; ++i)
    for (int j = i; j < N; ++j) {
      const int a = idx(i, j);
      trip.emplace_back(a, a, 4 * w + (i == j ? 2 * alpha / g.h : 0.0));
      const int moves[4][2] = {{i - 1, j}, {i + 1, j}, {i, j - 1}, {i, j + 1}};
      int seen[4];
      int count = 0;
      for (const auto& mv : moves) {
        if (mv[0] < 0 || mv[0] >= N || mv[1] < 0 || mv[1] >= N) continue;
        const int b = idx(mv[0], mv[1]);
        if (std::find(seen, seen + count, b) != seen + count) continue;
        seen[count++] = b;
        const bool one_diagonal = (i == j) != (mv[0] == mv[1]);
        trip.emplace_back(a, b, one_diagonal ? -std::sqrt(2.0) * w : -w);
      }
    }
  RSparse out(dim, dim);
  out.setFromTriplets(trip.begin(), trip.end());
  return out;
}

// Lowest m eigenvalues of a sparse symmetric positive definite matrix by block inverse
// iteration with Rayleigh-Ritz.
inline std::vector<double> lowest_eigenvalues(const RSparse& h, int m, double tol = 1e-13, int max_iterations = 500) {
  const long dim = h.rows();
  if (dim <= 400) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(Eigen::MatrixXd(h), Eigen::EigenvaluesOnly);
    return std::vector<double>(es.eigenvalues().data(), es.eigenvalues().data() + m);
  }
  Eigen::SimplicialLDLT<RSparse> ldlt(h);
  if (ldlt.info() != Eigen::Success) throw IterationError("lowest_eigenvalues: factorisation failed");
  const long p = std::min<long>(dim, 2 * m + 6);
  // Deterministic start block.
  Eigen::MatrixXd x(dim, p);
  for (long i = 0; i < dim; ++i)
    for (long c = 0; c < p; ++c) x(i, c) = std::sin(0.7 * (i + 1) * (c + 1) + 0.3 * c) + 1e-3 * ((i * 7 + c * 13) % 11);
  Eigen::VectorXd prev = Eigen::VectorXd::Constant(m, 0.0);
  for (int it = 0; it < max_iterations; ++it) {
    x = ldlt.solve(x);
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(x);
    x = qr.householderQ() * Eigen::MatrixXd::Identity(dim, p);
    const Eigen::MatrixXd small = x.transpose() * (h * x);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(0.5 * (small + small.transpose()));
    x = x * es.eigenvectors();
    const Eigen::VectorXd cur = es.eigenvalues().head(m);
    if (it > 2 && ((cur - prev).array().abs() <= tol * cur.array().abs()).all())
      return std::vector<double>(cur.data(), cur.data() + m);
    prev = cur;
  }
  throw IterationError("lowest_eigenvalues: subspace iteration did not converge");
}

// Lowest m eigenvalues of two bosons on [0, l] with Dirichlet ends and contact strength alpha.
inline std::vector<double> fd_two_bosons(double l, double alpha, int N, int m) {
  if (!(alpha >= 0) || !std::isfinite(alpha)) throw ValidationError("fd_two_bosons: alpha must be finite and >= 0");
  if (N < 32) throw ValidationError("fd_two_bosons: need N >= 32");
  if (N > 256) throw SizeError("fd_two_bosons: N > 256 exceeds the supported grid size; use a coarser grid");
  if (m < 1) throw ValidationError("fd_two_bosons: level count must be positive");
  return lowest_eigenvalues(fd_two_boson_hamiltonian(l, alpha, N), m);
}

struct FDComparison {
  double e_coarse = 0;
  double e_fine = 0;
  double extrapolated = 0;
};

// Levels on grids N and 2N, extrapolated in h^2.
inline std::vector<FDComparison> fd_extrapolated(int particles, double l, double alpha, int N, int m) {
  std::vector<double> c, f;
  if (particles == 1) {
    c = fd_one_particle(l, N, m);
    f = fd_one_particle(l, 2 * N, m);
  } else if (particles == 2) {
    c = fd_two_bosons(l, alpha, N, m);
    f = fd_two_bosons(l, alpha, 2 * N, m);
  } else {
    throw ValidationError("finite-difference oracle supports 1 or 2 particles only");
  }
  const double h1 = l / (N + 1), h2 = l / (2 * N + 1);
  std::vector<FDComparison> out;
  for (int i = 0; i < m; ++i) out.push_back({c[i], f[i], richardson(c[i], h1, f[i], h2)});
  return out;
}

}  // namespace qgs
