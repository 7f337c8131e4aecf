#pragma once

#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "qgs/graph.hpp"
#include "qgs/scattering.hpp"

namespace qgs {

// Unreadable or malformed graph file. Physically invalid conditions raise ValidationError instead.
struct GraphFileError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct GraphDefinition {
  MetricGraph graph;
  // "dirichlet", "kirchhoff", {"kirchhoff": [vertices]} or {"A": ..., "B": ...}
  nlohmann::json conditions = "dirichlet";
};

namespace detail {

inline const nlohmann::json& field(const nlohmann::json& obj, const char* name, const std::string& where) {
  if (!obj.is_object() || !obj.contains(name)) throw GraphFileError(where + ": missing field '" + name + "'");
  return obj.at(name);
}

inline cplx complex_entry(const nlohmann::json& v, const std::string& where) {
  if (v.is_number()) return {v.get<double>(), 0.0};
  if (v.is_array() && v.size() == 2 && v[0].is_number() && v[1].is_number()) return {v[0].get<double>(), v[1].get<double>()};
  throw GraphFileError(where + ": expected a number or a [re, im] pair");
}

inline CMatrix complex_matrix(const nlohmann::json& m, int size, const std::string& where) {
  if (!m.is_array() || static_cast<int>(m.size()) != size)
    throw GraphFileError(where + ": expected " + std::to_string(size) + " rows");
  CMatrix out(size, size);
  for (int r = 0; r < size; ++r) {
    const std::string row = where + "[" + std::to_string(r) + "]";
    if (!m[r].is_array() || static_cast<int>(m[r].size()) != size)
      throw GraphFileError(row + ": expected " + std::to_string(size) + " entries");
    for (int c = 0; c < size; ++c) out(r, c) = complex_entry(m[r][c], row + "[" + std::to_string(c) + "]");
  }
  return out;
}

}  // namespace detail

inline GraphDefinition parse_graph(const std::string& text, const std::string& source = "graph") {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw GraphFileError(source + ": " + e.what());
  }
  GraphDefinition def;
  const auto& vertices = detail::field(doc, "vertices", source);
  if (!vertices.is_number_integer()) throw GraphFileError(source + ": 'vertices' must be an integer");
  def.graph.vertex_count = vertices.get<int>();
  const auto& edges = detail::field(doc, "edges", source);
  if (!edges.is_array()) throw GraphFileError(source + ": 'edges' must be an array");
  for (std::size_t e = 0; e < edges.size(); ++e) {
    const std::string where = source + ": edges[" + std::to_string(e) + "]";
    const auto& a = detail::field(edges[e], "a", where);
    const auto& b = detail::field(edges[e], "b", where);
    const auto& len = detail::field(edges[e], "length", where);
    if (!a.is_number_integer() || !b.is_number_integer()) throw GraphFileError(where + ": endpoints must be integers");
    if (!len.is_number()) throw GraphFileError(where + ".length: expected a number");
    def.graph.edges.push_back(Edge{a.get<int>(), b.get<int>(), len.get<double>()});
  }
  try {
    validate(def.graph);
  } catch (const ValidationError& e) {
    throw GraphFileError(source + ": " + e.what());
  }
  if (doc.contains("conditions")) def.conditions = doc.at("conditions");
  return def;
}

inline GraphDefinition load_graph(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw GraphFileError("cannot open graph file '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_graph(buf.str(), path);
}

inline BoundaryMatrices make_conditions(const GraphDefinition& def, const StarRepresentation& star) {
  const auto& c = def.conditions;
  if (c.is_string()) {
    const auto name = c.get<std::string>();
    if (name == "dirichlet") return dirichlet_conditions(star);
    if (name == "kirchhoff") return kirchhoff_conditions(star);
    throw GraphFileError("conditions: unknown name '" + name + "'");
  }
  if (c.is_object() && c.contains("kirchhoff")) {
    if (!c.at("kirchhoff").is_array()) throw GraphFileError("conditions.kirchhoff: expected an array of vertex ids");
    return mixed_conditions(star, c.at("kirchhoff").get<std::vector<int>>());
  }
  if (c.is_object() && c.contains("A") && c.contains("B")) {
    const int e = star.half_edge_count();
    return BoundaryMatrices(detail::complex_matrix(c.at("A"), e, "conditions.A"),
                            detail::complex_matrix(c.at("B"), e, "conditions.B"));
  }
  throw GraphFileError("conditions: expected \"dirichlet\", \"kirchhoff\", {\"kirchhoff\": [...]} or {\"A\": ..., \"B\": ...}");
}

}  // namespace qgs
