#pragma once

#include <complex>
#include <map>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include "qgs/errors.hpp"
#include "qgs/graph.hpp"
#include "qgs/scattering.hpp"
#include "qgs/weyl.hpp"

namespace qgs {

using SMatrix = Eigen::SparseMatrix<cplx>;
using Triplet = Eigen::Triplet<cplx>;

// Flattening of (q, j_1, ..., j_n): q slowest, then j_1, ..., j_n (j_n fastest).
struct TensorIndex {
  int q = 0;
  std::vector<int> edges;
};

inline long ipow(long base, int e) {
  long r = 1;
  for (int i = 0; i < e; ++i) r *= base;
  return r;
}

inline long flatten(const TensorIndex& t, int e_size) {
  long j = 0;
  for (int x : t.edges) j = j * e_size + x;
  return static_cast<long>(t.q) * ipow(e_size, static_cast<int>(t.edges.size())) + j;
}

inline TensorIndex unflatten(long flat, int e_size, int n) {
  const long d = ipow(e_size, n);
  TensorIndex t{static_cast<int>(flat / d), std::vector<int>(n)};
  long j = flat % d;
  for (int m = n - 1; m >= 0; --m, j /= e_size) t.edges[m] = static_cast<int>(j % e_size);
  return t;
}

// (R(Q) v)_J = v_{J o Q}, where (J o Q)_m = j_{Q(m)}. R(Q1 Q2) = R(Q1) R(Q2).
inline SMatrix perm_rep(const std::vector<int>& q, int e_size, int n) {
  if (static_cast<int>(q.size()) != n) throw ValidationError("perm_rep: permutation length differs from n");
  const long d = ipow(e_size, n);
  std::vector<Triplet> trip;
  trip.reserve(d);
  std::vector<int> j(n), src(n);
  for (long row = 0; row < d; ++row) {
    long r = row;
    for (int m = n - 1; m >= 0; --m, r /= e_size) j[m] = static_cast<int>(r % e_size);
    long col = 0;
    for (int m = 0; m < n; ++m) col = col * e_size + j[q[m]];
    trip.emplace_back(row, col, 1.0);
  }
  SMatrix out(d, d);
  out.setFromTriplets(trip.begin(), trip.end());
  return out;
}

// Diagonal of c_i (1-based i): 1 where half-edges j_i and j_{i+1} share a vertex.
inline std::vector<char> c_diagonal(const StarRepresentation& star, int i, int n) {
  if (i < 1 || i > n - 1) throw IndexError("c_tensor: index out of range");
  const int e = star.half_edge_count();
  const long d = ipow(e, n);
  const long lo = ipow(e, n - 1 - i);  // stride of slot i+1 (1-based)
  std::vector<char> out(d);
  for (long row = 0; row < d; ++row) {
    const int a = static_cast<int>((row / (lo * e)) % e);
    const int b = static_cast<int>((row / lo) % e);
    out[row] = same_star(star, a, b);
  }
  return out;
}

inline SMatrix c_tensor(const StarRepresentation& star, int i, int n) {
  const auto diag = c_diagonal(star, i, n);
  SMatrix out(diag.size(), diag.size());
  std::vector<Triplet> trip;
  for (std::size_t r = 0; r < diag.size(); ++r)
    if (diag[r]) trip.emplace_back(r, r, 1.0);
  out.setFromTriplets(trip.begin(), trip.end());
  return out;
}

// Everything needed to build the n-particle operators of one graph. Immutable.
class SystemAssembly {
 public:
  SystemAssembly(StarRepresentation star, BoundaryMatrices bc, int n, double alpha, bool interacting = true)
      : star_(std::move(star)), bc_(std::move(bc)), n_(n), alpha_(alpha), interacting_(interacting) {
    if (n_ < 1 || n_ > 6) throw ValidationError("system assembly: n must be in 1..6");
    if (!std::isfinite(alpha_)) throw ValidationError("system assembly: alpha must be finite");
    if (bc_.size() != star_.half_edge_count())
      throw ValidationError("system assembly: boundary matrices do not match the half-edge count");
    e_ = star_.half_edge_count();
    block_ = ipow(e_, n_);
    perms_ = permutations_lex(n_);
    for (std::size_t q = 0; q < perms_.size(); ++q) perm_index_[perms_[q]] = static_cast<int>(q);
    dim_ = static_cast<long>(perms_.size()) * block_;
    for (int i = 1; i < n_; ++i) {
      std::vector<int> t(n_);
      std::iota(t.begin(), t.end(), 0);
      std::swap(t[i - 1], t[i]);
      std::vector<int> qt(perms_.size());
      for (std::size_t q = 0; q < perms_.size(); ++q) qt[q] = perm_index_.at(compose_perm(perms_[q], t));
      q_times_t_.push_back(std::move(qt));
      if (interacting_)
        c_.push_back(c_diagonal(star_, i, n_));
      else
        c_.push_back(std::vector<char>(block_, 0));
      const long lo = ipow(e_, n_ - 1 - i);
      std::vector<long> sw(block_);
      for (long row = 0; row < block_; ++row) {
        const long a = (row / (lo * e_)) % e_;
        const long b = (row / lo) % e_;
        sw[row] = row + (b - a) * lo * e_ + (a - b) * lo;
      }
      swap_.push_back(std::move(sw));
    }
  }

  const StarRepresentation& star() const { return star_; }
  const BoundaryMatrices& bc() const { return bc_; }
  int n() const { return n_; }
  double alpha() const { return alpha_; }
  bool interacting() const { return interacting_; }
  int edge_count() const { return e_; }
  long block_size() const { return block_; }
  long dim() const { return dim_; }
  int perm_count() const { return static_cast<int>(perms_.size()); }
  const std::vector<std::vector<int>>& perms() const { return perms_; }
  int perm_index(const std::vector<int>& q) const { return perm_index_.at(q); }
  // [Q T_i] for 1-based i
  int q_times_t(int i, int q) const { return q_times_t_[i - 1][q]; }
  const std::vector<char>& c(int i) const { return c_[i - 1]; }
  // edge-tuple index with slots i, i+1 swapped
  long swapped(int i, long j) const { return swap_[i - 1][j]; }

  static std::vector<int> compose_perm(const std::vector<int>& a, const std::vector<int>& b) {
    std::vector<int> out(a.size());
    for (std::size_t m = 0; m < a.size(); ++m) out[m] = a[b[m]];
    return out;
  }

 private:
  StarRepresentation star_;
  BoundaryMatrices bc_;
  int n_;
  double alpha_;
  bool interacting_;
  int e_ = 0;
  long block_ = 0;
  long dim_ = 0;
  std::vector<std::vector<int>> perms_;
  std::map<std::vector<int>, int> perm_index_;
  std::vector<std::vector<int>> q_times_t_;
  std::vector<std::vector<char>> c_;
  std::vector<std::vector<long>> swap_;
};

// (Y_i(k))_{[Q][Q']} = r c_i d_{[Q][Q']} + (t c_i + T^(i)(I - c_i)) d_{[Q T_i][Q']}
// with r = -i alpha/(k + i alpha), t = k/(k + i alpha); at alpha = 0 exactly r = 0, t = 1.
inline SMatrix y_matrix(const SystemAssembly& s, int i, double k) {
  if (i < 1 || i > s.n() - 1) throw IndexError("y_matrix: index out of range");
  cplx r = 0.0, t = 1.0;
  if (s.alpha() != 0.0) {
    const cplx den(k, s.alpha());
    r = cplx(0, -s.alpha()) / den;
    t = k / den;
  }
  const long d = s.block_size();
  const auto& c = s.c(i);
  std::vector<Triplet> trip;
  trip.reserve(2 * s.dim());
  for (int q = 0; q < s.perm_count(); ++q) {
    const long row0 = q * d;
    const long col0 = s.q_times_t(i, q) * d;
    for (long j = 0; j < d; ++j) {
      if (c[j]) {
        trip.emplace_back(row0 + j, row0 + j, r);
        trip.emplace_back(row0 + j, col0 + j, t);
      } else {
        trip.emplace_back(row0 + j, col0 + s.swapped(i, j), 1.0);
      }
    }
  }
  SMatrix out(s.dim(), s.dim());
  out.setFromTriplets(trip.begin(), trip.end());
  return out;
}

// I_{n!} (x) S (x) I_{|E|^{n-1}} for a given |E| x |E| matrix S.
inline SMatrix lift_first_slot(const SystemAssembly& s, const CMatrix& sv) {
  const long inner = ipow(s.edge_count(), s.n() - 1);
  const int e = s.edge_count();
  std::vector<Triplet> trip;
  trip.reserve(s.dim() * e);
  for (int q = 0; q < s.perm_count(); ++q) {
    const long base = q * s.block_size();
    for (int a = 0; a < e; ++a)
      for (int b = 0; b < e; ++b) {
        const cplx v = sv(a, b);
        if (v == cplx(0.0)) continue;
        for (long rest = 0; rest < inner; ++rest) trip.emplace_back(base + a * inner + rest, base + b * inner + rest, v);
      }
  }
  SMatrix out(s.dim(), s.dim());
  out.setFromTriplets(trip.begin(), trip.end());
  return out;
}

inline SMatrix lifted_vertex_matrix(const SystemAssembly& s, double k) {
  return lift_first_slot(s, vertex_s_matrix(s.bc(), k));
}

// Acts on the last slot: j -> partner(j) with phase exp(i k l_edge).
inline SMatrix e_matrix(const SystemAssembly& s, double k) {
  const int e = s.edge_count();
  std::vector<cplx> phase(e);
  std::vector<int> partner(e);
  for (int j = 0; j < e; ++j) {
    partner[j] = s.star().partner(j);
    phase[j] = std::exp(cplx(0, k * s.star().length(s.star().origin_edge(j))));
  }
  std::vector<Triplet> trip;
  trip.reserve(s.dim());
  for (long row = 0; row < s.dim(); ++row) {
    const int j = static_cast<int>(row % e);
    trip.emplace_back(row, row - j + partner[j], phase[j]);
  }
  SMatrix out(s.dim(), s.dim());
  out.setFromTriplets(trip.begin(), trip.end());
  return out;
}

using RowMatrix = Eigen::Matrix<cplx, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

// Matrix-free products with the operators above: out = Op * in, row by row.
inline void apply_y(const SystemAssembly& s, int i, double k, const RowMatrix& in, RowMatrix& out) {
  cplx r = 0.0, t = 1.0;
  if (s.alpha() != 0.0) {
    const cplx den(k, s.alpha());
    r = cplx(0, -s.alpha()) / den;
    t = k / den;
  }
  const long d = s.block_size();
  const auto& c = s.c(i);
  out.resize(in.rows(), in.cols());
  for (int q = 0; q < s.perm_count(); ++q) {
    const long row0 = q * d;
    const long col0 = s.q_times_t(i, q) * d;
    for (long j = 0; j < d; ++j) {
      if (c[j])
        out.row(row0 + j) = r * in.row(row0 + j) + t * in.row(col0 + j);
      else
        out.row(row0 + j) = in.row(col0 + s.swapped(i, j));
    }
  }
}

inline void apply_lifted(const SystemAssembly& s, const CMatrix& sv, const RowMatrix& in, RowMatrix& out) {
  const long inner = ipow(s.edge_count(), s.n() - 1);
  const int e = s.edge_count();
  out.setZero(in.rows(), in.cols());
  for (int q = 0; q < s.perm_count(); ++q) {
    const long base = q * s.block_size();
    for (int a = 0; a < e; ++a)
      for (int b = 0; b < e; ++b) {
        const cplx v = sv(a, b);
        if (v == cplx(0.0)) continue;
        for (long rest = 0; rest < inner; ++rest) out.row(base + a * inner + rest) += v * in.row(base + b * inner + rest);
      }
  }
}

inline void apply_e(const SystemAssembly& s, double k, const RowMatrix& in, RowMatrix& out) {
  const int e = s.edge_count();
  std::vector<cplx> phase(e);
  std::vector<int> partner(e);
  for (int j = 0; j < e; ++j) {
    partner[j] = s.star().partner(j);
    phase[j] = std::exp(cplx(0, k * s.star().length(s.star().origin_edge(j))));
  }
  out.resize(in.rows(), in.cols());
  for (long row = 0; row < in.rows(); ++row) {
    const int j = static_cast<int>(row % e);
    out.row(row) = phase[j] * in.row(row - j + partner[j]);
  }
}

inline SMatrix sparse_identity(long d) {
  SMatrix id(d, d);
  id.setIdentity();
  return id;
}

// Frobenius norm of the difference.
template <class A, class B>
double frobenius_distance(const A& a, const B& b) {
  return CMatrix(CMatrix(a) - CMatrix(b)).norm();
}

inline double frobenius_distance(const SMatrix& a, const SMatrix& b) {
  return SMatrix(a - b).norm();
}

}  // namespace qgs
