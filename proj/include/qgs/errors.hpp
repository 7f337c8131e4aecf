#pragma once

#include <stdexcept>
#include <string>

namespace qgs {

// Invalid input data: graph, boundary conditions, options.
struct ValidationError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct IndexError : std::out_of_range {
  using std::out_of_range::out_of_range;
};

// s_p or Y_i evaluated at k + i*alpha = 0.
struct PoleError : std::domain_error {
  using std::domain_error::domain_error;
};

// A + ikB numerically singular.
struct SingularityError : std::runtime_error {
  SingularityError(const std::string& what, double k_) : std::runtime_error(what), k(k_) {}
  double k;
};

struct IterationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct DegeneracyError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct CertificationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct SizeError : std::length_error {
  using std::length_error::length_error;
};

}  // namespace qgs
