#pragma once

#include <array>
#include <optional>

#include "qgs/tensor_ops.hpp"

namespace qgs {

// Residuals of the six operator identities behind the closure of the Bethe ansatz on a graph,
// evaluated at (u, v). Entries are empty where an identity has no instance (e.g. the
// commutation of distant Y's needs n >= 4).
using RelationResiduals = std::array<std::optional<double>, 6>;

inline const char* relation_description(int r) {
  static const char* names[6] = {
      "S(u)S(-u) = I",
      "Y_i(u)Y_i(-u) = I",
      "Y_i(u)Y_j(v) = Y_j(v)Y_i(u), |i-j| > 1",
      "Y_{i+1}(u)Y_i(u+v)Y_{i+1}(v) = Y_i(v)Y_{i+1}(u+v)Y_i(u)",
      "reflection equation for Y_1 and the lifted vertex matrix",
      "Y_i(u) commutes with the lifted vertex matrix, i > 1",
  };
  return names[r - 1];
}

inline RelationResiduals check_relations(const SystemAssembly& s, double u, double v) {
  RelationResiduals res;
  const int n = s.n();
  const CMatrix su = vertex_s_matrix(s.bc(), u);
  const CMatrix smu = vertex_s_matrix(s.bc(), -u);
  const CMatrix sv = vertex_s_matrix(s.bc(), v);
  const long e = s.edge_count();
  res[0] = frobenius_distance(CMatrix(su * smu), CMatrix::Identity(e, e));
  if (n < 2) return res;

  const SMatrix id = sparse_identity(s.dim());
  std::vector<SMatrix> yu, yv;
  for (int i = 1; i < n; ++i) {
    yu.push_back(y_matrix(s, i, u));
    yv.push_back(y_matrix(s, i, v));
  }
  double worst = 0;
  for (int i = 1; i < n; ++i) worst = std::max(worst, frobenius_distance(SMatrix(yu[i - 1] * y_matrix(s, i, -u)), id));
  res[1] = worst;

  if (n >= 4) {
    worst = 0;
    for (int i = 1; i < n; ++i)
      for (int j = 1; j < n; ++j)
        if (std::abs(i - j) > 1)
          worst = std::max(worst, frobenius_distance(SMatrix(yu[i - 1] * yv[j - 1]), SMatrix(yv[j - 1] * yu[i - 1])));
    res[2] = worst;
  }
  if (n >= 3) {
    worst = 0;
    for (int i = 1; i + 1 < n; ++i) {
      const SMatrix lhs = yu[i] * y_matrix(s, i, u + v) * yv[i];
      const SMatrix rhs = yv[i - 1] * y_matrix(s, i + 1, u + v) * yu[i - 1];
      worst = std::max(worst, frobenius_distance(lhs, rhs));
    }
    res[3] = worst;
  }
  const SMatrix lu = lift_first_slot(s, su);
  const SMatrix lv = lift_first_slot(s, sv);
  const SMatrix y_sum = y_matrix(s, 1, u + v);
  const SMatrix y_diff = y_matrix(s, 1, v - u);
  res[4] = frobenius_distance(SMatrix(lu * y_sum * lv * y_diff), SMatrix(y_diff * lv * y_sum * lu));
  if (n >= 3) {
    worst = 0;
    for (int i = 2; i < n; ++i) worst = std::max(worst, frobenius_distance(SMatrix(yu[i - 1] * lv), SMatrix(lv * yu[i - 1])));
    res[5] = worst;
  }
  return res;
}

}  // namespace qgs
