#pragma once

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <vector>

#include <Eigen/Dense>

#include "qgs/secular.hpp"

namespace qgs {

using QuantumNumbers = std::vector<int>;

inline double energy(const WaveTuple& k) {
  double e = 0;
  for (double x : k) e += x * x;
  return e;
}

namespace detail {

// Antiderivative of atan(x/alpha).
inline double yang_yang_kernel(double x, double alpha) {
  return x * std::atan(x / alpha) - 0.5 * alpha * std::log1p((x / alpha) * (x / alpha));
}

// Convex functional whose gradient is the logarithmic Bethe system
//   l k_j + sum_{i != j} [atan((k_j + k_i)/alpha) + atan((k_j - k_i)/alpha)] - pi m_j.
inline double yang_yang(const WaveTuple& k, const QuantumNumbers& m, double alpha, double l) {
  double f = 0;
  const int n = static_cast<int>(k.size());
  for (int j = 0; j < n; ++j) f += 0.5 * l * k[j] * k[j] - std::numbers::pi * m[j] * k[j];
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < j; ++i) f += yang_yang_kernel(k[j] + k[i], alpha) + yang_yang_kernel(k[j] - k[i], alpha);
  return f;
}

}  // namespace detail

// Gaudin labels of the branch that continues, as alpha grows from 0, from the
// non-interacting tuple (m_1 pi/l, ..., m_n pi/l): sort, then I_j = m_j + j - 1.
inline QuantumNumbers quantum_numbers_from_free_limit(QuantumNumbers m) {
  std::sort(m.begin(), m.end());
  for (std::size_t j = 0; j < m.size(); ++j) m[j] += static_cast<int>(j);
  return m;
}

// Solves the interval Bethe equations (Dirichlet ends, length l) on the branch labelled by m.
// For alpha > 0 the labels are distinct integers >= 1 and
//   k_j l = pi m_j - sum_{i != j} [atan((k_j + k_i)/alpha) + atan((k_j - k_i)/alpha)],
// so alpha -> infinity gives k_j = m_j pi/l. At alpha = 0 the equations decouple and
// k_j = m_j pi/l with repeated labels allowed.
inline WaveTuple solve_interval_bethe(double alpha, double l, const QuantumNumbers& m, double tol = 1e-13,
                                      int max_iterations = 200) {
  using std::numbers::pi;
  if (!(alpha >= 0) || !std::isfinite(alpha)) throw ValidationError("solve_interval_bethe: alpha must be finite and >= 0");
  if (!(l > 0) || !std::isfinite(l)) throw ValidationError("solve_interval_bethe: length must be positive");
  if (m.empty()) throw ValidationError("solve_interval_bethe: empty quantum numbers");
  for (int x : m)
    if (x < 1) throw ValidationError("solve_interval_bethe: quantum numbers must be >= 1");
  const int n = static_cast<int>(m.size());
  WaveTuple k(n);
  for (int j = 0; j < n; ++j) k[j] = pi * m[j] / l;
  if (alpha == 0.0 || n == 1) return k;
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < j; ++i)
      if (m[i] == m[j]) throw DegeneracyError("solve_interval_bethe: repeated quantum number " + std::to_string(m[j]));

  auto g = [alpha](double x) { return alpha / (alpha * alpha + x * x); };
  std::vector<double> trace;
  double f = detail::yang_yang(k, m, alpha, l);
  for (int it = 0; it < max_iterations; ++it) {
    Eigen::VectorXd grad(n);
    Eigen::MatrixXd hess = Eigen::MatrixXd::Zero(n, n);
    for (int j = 0; j < n; ++j) {
      grad(j) = l * k[j] - pi * m[j];
      hess(j, j) = l;
      for (int i = 0; i < n; ++i) {
        if (i == j) continue;
        const double sp = k[j] + k[i], sm = k[j] - k[i];
        grad(j) += std::atan(sp / alpha) + std::atan(sm / alpha);
        hess(j, j) += g(sp) + g(sm);
        hess(j, i) = g(sp) - g(sm);
      }
    }
    const Eigen::VectorXd step = -hess.ldlt().solve(grad);
    const double full = step.cwiseAbs().maxCoeff();
    // Backtracking on the convex functional keeps the Newton iteration globally convergent.
    // Close to the root the functional is flat to rounding, so the full step is taken.
    double s = 1.0;
    WaveTuple next(n);
    double fn = f;
    for (int bt = 0; bt < 60; ++bt, s *= 0.5) {
      for (int j = 0; j < n; ++j) next[j] = k[j] + s * step(j);
      fn = detail::yang_yang(next, m, alpha, l);
      if (full < 1e-6 || fn <= f + 1e-4 * s * grad.dot(step)) break;
    }
    trace.push_back(s * full);
    k = next;
    f = fn;
    if (full < tol * std::max(1.0, std::abs(k[n - 1]))) {
      for (int j = 0; j < n; ++j)
        for (int i = 0; i < j; ++i)
          if (std::abs(k[i] - k[j]) < 1e-9 * std::max(1.0, std::abs(k[j])))
            throw DegeneracyError("solve_interval_bethe: coincident roots");
      return k;
    }
  }
  std::ostringstream msg;
  msg << "solve_interval_bethe: no convergence after " << max_iterations << " iterations; last updates:";
  for (std::size_t i = trace.size() > 5 ? trace.size() - 5 : 0; i < trace.size(); ++i) msg << ' ' << trace[i];
  throw IterationError(msg.str());
}

// Strictly increasing label tuples with entries in [1, max_label].
inline std::vector<QuantumNumbers> increasing_labels(int n, int max_label) {
  std::vector<QuantumNumbers> out;
  QuantumNumbers cur;
  auto rec = [&](auto&& self, int start) -> void {
    if (static_cast<int>(cur.size()) == n) {
      out.push_back(cur);
      return;
    }
    for (int v = start; v <= max_label; ++v) {
      cur.push_back(v);
      self(self, v + 1);
      cur.pop_back();
    }
  };
  rec(rec, 1);
  return out;
}

// Non-decreasing label tuples with entries in [1, max_label].
inline std::vector<QuantumNumbers> nondecreasing_labels(int n, int max_label) {
  std::vector<QuantumNumbers> out;
  QuantumNumbers cur;
  auto rec = [&](auto&& self, int start) -> void {
    if (static_cast<int>(cur.size()) == n) {
      out.push_back(cur);
      return;
    }
    for (int v = start; v <= max_label; ++v) {
      cur.push_back(v);
      self(self, v);
      cur.pop_back();
    }
  };
  rec(rec, 1);
  return out;
}

struct MonotonicityViolation {
  double alpha_low = 0;
  double alpha_high = 0;
  int slot = 0;
  double decrease = 0;
};

// Reports every place where some k_j decreases between consecutive alpha samples.
inline std::vector<MonotonicityViolation> alpha_monotonicity_violations(double l, const QuantumNumbers& m,
                                                                        const std::vector<double>& alphas) {
  std::vector<MonotonicityViolation> out;
  WaveTuple prev;
  for (std::size_t a = 0; a < alphas.size(); ++a) {
    const WaveTuple k = solve_interval_bethe(alphas[a], l, m);
    if (a > 0)
      for (std::size_t j = 0; j < k.size(); ++j)
        if (k[j] < prev[j] - 1e-12)
          out.push_back({alphas[a - 1], alphas[a], static_cast<int>(j), prev[j] - k[j]});
    prev = k;
  }
  return out;
}

}  // namespace qgs
