#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "qgs/errors.hpp"

namespace qgs {

struct Edge {
  int a = 0;
  int b = 0;
  double length = 1.0;
};

struct MetricGraph {
  int vertex_count = 0;
  std::vector<Edge> edges;
};

inline void validate(const MetricGraph& g) {
  if (g.vertex_count <= 0) throw ValidationError("graph: vertex_count must be positive");
  if (g.edges.empty()) throw ValidationError("graph: at least one edge is required");
  for (std::size_t e = 0; e < g.edges.size(); ++e) {
    const Edge& ed = g.edges[e];
    const std::string where = "graph: edge " + std::to_string(e);
    if (ed.a < 0 || ed.a >= g.vertex_count || ed.b < 0 || ed.b >= g.vertex_count)
      throw ValidationError(where + " has an endpoint outside [0, vertex_count)");
    if (!std::isfinite(ed.length) || ed.length <= 0.0)
      throw ValidationError(where + " has a non-positive or non-finite length");
  }
}

// The graph cut open at every edge. Half-edge j < E_c is the `a` end of edge j,
// half-edge j + E_c its `b` end. Ids are 0-based.
class StarRepresentation {
 public:
  explicit StarRepresentation(const MetricGraph& g) {
    validate(g);
    vertex_count_ = g.vertex_count;
    const int ec = static_cast<int>(g.edges.size());
    owner_.resize(2 * ec);
    for (int e = 0; e < ec; ++e) {
      owner_[e] = g.edges[e].a;
      owner_[e + ec] = g.edges[e].b;
      lengths_.push_back(g.edges[e].length);
    }
  }

  int half_edge_count() const { return static_cast<int>(owner_.size()); }
  int compact_edge_count() const { return static_cast<int>(lengths_.size()); }
  int vertex_count() const { return vertex_count_; }

  int owner_vertex(int j) const { return owner_.at(check(j)); }
  int partner(int j) const {
    const int ec = compact_edge_count();
    return check(j) < ec ? j + ec : j - ec;
  }
  int origin_edge(int j) const { return check(j) % compact_edge_count(); }
  double length(int edge) const { return lengths_.at(edge); }
  const std::vector<double>& lengths() const { return lengths_; }
  double max_length() const {
    double m = 0;
    for (double l : lengths_) m = std::max(m, l);
    return m;
  }
  double min_length() const {
    double m = lengths_.front();
    for (double l : lengths_) m = std::min(m, l);
    return m;
  }

  std::vector<int> owned_by(int v) const {
    std::vector<int> out;
    for (int j = 0; j < half_edge_count(); ++j)
      if (owner_[j] == v) out.push_back(j);
    return out;
  }

 private:
  int check(int j) const {
    if (j < 0 || j >= half_edge_count())
      throw IndexError("half-edge id " + std::to_string(j) + " out of range");
    return j;
  }

  int vertex_count_ = 0;
  std::vector<int> owner_;
  std::vector<double> lengths_;
};

inline StarRepresentation build_star_representation(const MetricGraph& g) { return StarRepresentation(g); }

inline bool same_star(const StarRepresentation& s, int j, int j2) {
  return s.owner_vertex(j) == s.owner_vertex(j2);
}

// Row-major table, table[j * |E| + j2].
inline std::vector<char> same_star_table(const StarRepresentation& s) {
  const int e = s.half_edge_count();
  std::vector<char> t(static_cast<std::size_t>(e) * e);
  for (int j = 0; j < e; ++j)
    for (int j2 = 0; j2 < e; ++j2) t[j * e + j2] = same_star(s, j, j2);
  return t;
}

inline MetricGraph interval_graph(double l) {
  if (!(l > 0.0) || !std::isfinite(l)) throw ValidationError("interval_graph: length must be positive");
  return MetricGraph{2, {Edge{0, 1, l}}};
}

inline MetricGraph equilateral_star_graph(int d, double l) {
  if (d < 2) throw ValidationError("equilateral_star_graph: need at least 2 arms");
  if (!(l > 0.0) || !std::isfinite(l)) throw ValidationError("equilateral_star_graph: length must be positive");
  MetricGraph g{d + 1, {}};
  for (int i = 1; i <= d; ++i) g.edges.push_back(Edge{0, i, l});
  return g;
}

inline MetricGraph complete_graph(int v, double l) {
  if (v < 3) throw ValidationError("complete_graph: need at least 3 vertices");
  if (!(l > 0.0) || !std::isfinite(l)) throw ValidationError("complete_graph: length must be positive");
  MetricGraph g{v, {}};
  for (int a = 0; a < v; ++a)
    for (int b = a + 1; b < v; ++b) g.edges.push_back(Edge{a, b, l});
  return g;
}

}  // namespace qgs
