#pragma once

#include <numbers>

#include "qgs/qgs.hpp"

namespace qgs::testing {

inline constexpr double pi = std::numbers::pi;

inline SecularSystem interval_system(int n, double alpha, double l = 1.0, bool interacting = true) {
  StarRepresentation star(interval_graph(l));
  BoundaryMatrices bc = dirichlet_conditions(star);
  return SecularSystem(SystemAssembly(star, std::move(bc), n, alpha, interacting));
}

inline SystemAssembly star_assembly(int n, double alpha, bool kirchhoff) {
  StarRepresentation star(equilateral_star_graph(3, 1.0));
  BoundaryMatrices bc = kirchhoff ? kirchhoff_conditions(star) : dirichlet_conditions(star);
  return SystemAssembly(star, std::move(bc), n, alpha);
}

}  // namespace qgs::testing
