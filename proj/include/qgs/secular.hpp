#pragma once

#include <cmath>
#include <complex>
#include <vector>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include "qgs/tensor_ops.hpp"

namespace qgs {

// s_p(k) = (k - i alpha)/(k + i alpha)
inline cplx s_p(double k, double alpha) {
  if (k == 0.0 && alpha == 0.0) throw PoleError("s_p: pole at k = 0, alpha = 0");
  return cplx(k, -alpha) / cplx(k, alpha);
}

struct SecularSystem {
  explicit SecularSystem(SystemAssembly a) : assembly(std::move(a)) {}
  SystemAssembly assembly;
  long dim() const { return assembly.dim(); }
  int n() const { return assembly.n(); }
};

inline void check_tuple(const SecularSystem& sys, const WaveTuple& k) {
  if (static_cast<int>(k.size()) != sys.n()) throw ValidationError("wave tuple length does not match n");
  for (double x : k)
    if (!std::isfinite(x)) throw ValidationError("wave tuple has a non-finite entry");
}

// U(k) x0 with U(k) = E(k_n) Y_{n-1}(k_n - k_{n-1}) ... Y_1(k_n - k_1) S(k_n) Y_1(k_1 + k_n) ... Y_{n-1}(k_{n-1} + k_n)
inline CMatrix apply_unitary_chain(const SecularSystem& sys, const WaveTuple& k, const RowMatrix& x0) {
  check_tuple(sys, k);
  const SystemAssembly& s = sys.assembly;
  const int n = s.n();
  const double kn = k[n - 1];
  CMatrix sv;
  try {
    sv = vertex_s_matrix(s.bc(), kn);
  } catch (const SingularityError& e) {
    throw SingularityError(std::string("secular matrix: lifted vertex factor S_v(k_n): ") + e.what(), e.k);
  }
  RowMatrix x = x0;
  RowMatrix tmp;
  for (int i = n - 1; i >= 1; --i) {
    apply_y(s, i, k[i - 1] + kn, x, tmp);
    x.swap(tmp);
  }
  apply_lifted(s, sv, x, tmp);
  x.swap(tmp);
  for (int i = 1; i <= n - 1; ++i) {
    apply_y(s, i, kn - k[i - 1], x, tmp);
    x.swap(tmp);
  }
  apply_e(s, kn, x, tmp);
  return CMatrix(tmp);
}

inline CMatrix unitary_chain(const SecularSystem& sys, const WaveTuple& k) {
  return apply_unitary_chain(sys, k, RowMatrix::Identity(sys.dim(), sys.dim()));
}

// Every factor of U(k) commutes with relabelling the [Q] blocks, so U(k) is block diagonal over
// the symmetry sectors of S_n. The bosonic sector (all [Q] blocks equal) carries the
// exchange-symmetric eigenfunctions and has dimension |E|^n.
enum class Sector { all, bosonic };

inline CMatrix sector_basis(const SystemAssembly& s, Sector sector) {
  if (sector == Sector::all) return CMatrix::Identity(s.dim(), s.dim());
  const long d = s.block_size();
  CMatrix v = CMatrix::Zero(s.dim(), d);
  const double w = 1.0 / std::sqrt(static_cast<double>(s.perm_count()));
  for (int q = 0; q < s.perm_count(); ++q) v.middleRows(q * d, d).diagonal().setConstant(w);
  return v;
}

// U(k) restricted to a sector, in the basis returned by sector_basis.
inline CMatrix sector_unitary(const SecularSystem& sys, const WaveTuple& k, Sector sector) {
  if (sector == Sector::all) return unitary_chain(sys, k);
  const CMatrix v = sector_basis(sys.assembly, sector);
  return v.adjoint() * apply_unitary_chain(sys, k, RowMatrix(v));
}

inline CMatrix secular_matrix(const SecularSystem& sys, const WaveTuple& k) {
  CMatrix m = -unitary_chain(sys, k);
  m.diagonal().array() += 1.0;
  return m;
}

inline cplx secular_value(const SecularSystem& sys, const WaveTuple& k) {
  return Eigen::PartialPivLU<CMatrix>(secular_matrix(sys, k)).determinant();
}

// C_n^d applied to k: d = 1 gives (k_n, k_1, ..., k_{n-1}).
inline WaveTuple cyclic_shift(const WaveTuple& k, int d) {
  const int n = static_cast<int>(k.size());
  WaveTuple out(n);
  for (int i = 0; i < n; ++i) out[i] = k[((i - d) % n + n) % n];
  return out;
}

inline std::vector<cplx> quantization_residuals(const SecularSystem& sys, const WaveTuple& k) {
  std::vector<cplx> out;
  for (int d = 0; d < sys.n(); ++d) out.push_back(secular_value(sys, cyclic_shift(k, d)));
  return out;
}

inline Eigen::VectorXd singular_values(const CMatrix& m) {
  if (m.rows() <= 64) return Eigen::JacobiSVD<CMatrix>(m).singularValues();
  return Eigen::BDCSVD<CMatrix>(m).singularValues();
}

inline double smallest_singular_value(const CMatrix& m) {
  const Eigen::VectorXd sv = singular_values(m);
  return sv(sv.size() - 1);
}

inline double sigma_min(const SecularSystem& sys, const WaveTuple& k) {
  return smallest_singular_value(secular_matrix(sys, k));
}

// Per cyclic shift.
inline std::vector<double> shift_sigma_min(const SecularSystem& sys, const WaveTuple& k) {
  std::vector<double> out;
  for (int d = 0; d < sys.n(); ++d) out.push_back(sigma_min(sys, cyclic_shift(k, d)));
  return out;
}

// sigma_min(I - U)^2 for unitary U, from the Hermitian matrix (I - U)^*(I - U) = 2I - U - U^*.
// Cheaper than an SVD and accurate to ~1e-15 absolute, which is enough for scanning.
inline double fast_sigma_min_sq(const CMatrix& u) {
  CMatrix h = -(u + u.adjoint());
  h.diagonal().array() += 2.0;
  Eigen::SelfAdjointEigenSolver<CMatrix> es(h, Eigen::EigenvaluesOnly);
  return std::max(0.0, es.eigenvalues()(0));
}

struct BetheResidual {
  std::vector<cplx> r;
  double max_norm = 0;
};

// r_j = exp(-2 i k_j l) - prod_{i != j} s_p(k_j + k_i) s_p(k_j - k_i)
inline BetheResidual interval_bethe_residual(const WaveTuple& k, double alpha, double l) {
  if (!(l > 0)) throw ValidationError("interval_bethe_residual: length must be positive");
  BetheResidual out;
  const int n = static_cast<int>(k.size());
  for (int j = 0; j < n; ++j) {
    cplx prod = 1.0;
    if (alpha != 0.0)
      for (int i = 0; i < n; ++i)
        if (i != j) prod *= s_p(k[j] + k[i], alpha) * s_p(k[j] - k[i], alpha);
    const cplx r = std::exp(cplx(0, -2.0 * k[j] * l)) - prod;
    out.r.push_back(r);
    out.max_norm = std::max(out.max_norm, std::abs(r));
  }
  return out;
}

}  // namespace qgs
