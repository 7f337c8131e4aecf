#pragma once

#include <complex>
#include <string>

#include <Eigen/Dense>

#include "qgs/errors.hpp"
#include "qgs/graph.hpp"

namespace qgs {

using cplx = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;

inline constexpr double kSingularRcond = 1e-12;

// Vertex conditions A psi + B psi' = 0 on the half-edges of the star representation.
class BoundaryMatrices {
 public:
  BoundaryMatrices(CMatrix a, CMatrix b) : a_(std::move(a)), b_(std::move(b)) {
    if (a_.rows() != a_.cols() || b_.rows() != b_.cols() || a_.rows() != b_.rows() || a_.rows() == 0)
      throw ValidationError("boundary matrices: A and B must be square of equal size");
    const CMatrix ab = a_ * b_.adjoint();
    const double herm = (ab - ab.adjoint()).cwiseAbs().maxCoeff();
    if (herm > 1e-12)
      throw ValidationError("boundary matrices: A B* is not Hermitian (defect " + std::to_string(herm) + ")");
    CMatrix block(a_.rows(), 2 * a_.rows());
    block << a_, b_;
    Eigen::JacobiSVD<CMatrix> svd(block);
    const auto& sv = svd.singularValues();
    if (sv(sv.size() - 1) < 1e-12 * std::max(1.0, sv(0)))
      throw ValidationError("boundary matrices: (A, B) does not have full rank");
  }

  const CMatrix& A() const { return a_; }
  const CMatrix& B() const { return b_; }
  int size() const { return static_cast<int>(a_.rows()); }

 private:
  CMatrix a_;
  CMatrix b_;
};

inline BoundaryMatrices dirichlet_conditions(const StarRepresentation& star) {
  const int e = star.half_edge_count();
  return BoundaryMatrices(CMatrix::Identity(e, e), CMatrix::Zero(e, e));
}

// Continuity of the value across each vertex plus vanishing sum of outgoing derivatives.
// A degree-one vertex gets a Neumann row.
inline BoundaryMatrices kirchhoff_conditions(const StarRepresentation& star) {
  const int e = star.half_edge_count();
  CMatrix a = CMatrix::Zero(e, e);
  CMatrix b = CMatrix::Zero(e, e);
  int row = 0;
  for (int v = 0; v < star.vertex_count(); ++v) {
    const auto owned = star.owned_by(v);
    if (owned.empty()) continue;
    for (std::size_t r = 0; r + 1 < owned.size(); ++r, ++row) {
      a(row, owned[r]) = 1.0;
      a(row, owned[r + 1]) = -1.0;
    }
    for (int j : owned) b(row, j) = 1.0;
    ++row;
  }
  return BoundaryMatrices(std::move(a), std::move(b));
}

// Kirchhoff at the vertices in `kirchhoff_vertices`, Dirichlet elsewhere.
inline BoundaryMatrices mixed_conditions(const StarRepresentation& star, const std::vector<int>& kirchhoff_vertices) {
  const BoundaryMatrices k = kirchhoff_conditions(star);
  const int e = star.half_edge_count();
  CMatrix a = CMatrix::Zero(e, e);
  CMatrix b = CMatrix::Zero(e, e);
  // Rows of the Kirchhoff factory are grouped by vertex in increasing order.
  int row = 0;
  for (int v = 0; v < star.vertex_count(); ++v) {
    const auto owned = star.owned_by(v);
    const bool kirch = std::find(kirchhoff_vertices.begin(), kirchhoff_vertices.end(), v) != kirchhoff_vertices.end();
    for (std::size_t r = 0; r < owned.size(); ++r, ++row) {
      if (kirch) {
        a.row(row) = k.A().row(row);
        b.row(row) = k.B().row(row);
      } else {
        a(row, owned[r]) = 1.0;
      }
    }
  }
  return BoundaryMatrices(std::move(a), std::move(b));
}

// sigma_min / sigma_max of A + ikB. LU-based estimates miss exactly singular matrices
// (e.g. zero rows of A at k = 0), and these matrices are small.
inline double condition_rcond(const BoundaryMatrices& bc, double k) {
  const CMatrix m = bc.A() + cplx(0, k) * bc.B();
  const Eigen::VectorXd sv = Eigen::JacobiSVD<CMatrix>(m).singularValues();
  return sv(0) > 0 ? sv(sv.size() - 1) / sv(0) : 0.0;
}

// S_v(k) = -(A + ikB)^{-1} (A - ikB)
inline CMatrix vertex_s_matrix(const BoundaryMatrices& bc, double k) {
  const CMatrix plus = bc.A() + cplx(0, k) * bc.B();
  const CMatrix minus = bc.A() - cplx(0, k) * bc.B();
  if (!(condition_rcond(bc, k) > kSingularRcond))
    throw SingularityError("vertex scattering matrix: A + ikB is singular at k = " + std::to_string(k), k);
  return -Eigen::PartialPivLU<CMatrix>(plus).solve(minus);
}

inline CMatrix t_matrix(double k, const StarRepresentation& star) {
  const int ec = star.compact_edge_count();
  CMatrix t = CMatrix::Zero(2 * ec, 2 * ec);
  for (int e = 0; e < ec; ++e) {
    const cplx ph = std::exp(cplx(0, k * star.length(e)));
    t(e, e + ec) = ph;
    t(e + ec, e) = ph;
  }
  return t;
}

inline cplx one_particle_secular(const BoundaryMatrices& bc, const StarRepresentation& star, double k) {
  const int e = star.half_edge_count();
  if (bc.size() != e) throw ValidationError("boundary matrices do not match the half-edge count");
  const CMatrix m = CMatrix::Identity(e, e) - vertex_s_matrix(bc, k) * t_matrix(k, star);
  return m.determinant();
}

}  // namespace qgs
