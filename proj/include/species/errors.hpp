#pragma once

#include <stdexcept>
#include <string>

namespace species {

/// Argument outside the mathematical domain of an operation.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Index outside a triangular table or probability vector.
class IndexError : public std::out_of_range {
 public:
  using std::out_of_range::out_of_range;
};

/// Inputs that contradict each other (e.g. frequencies not summing to n).
class ConsistencyError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Numerical procedure did not reach the requested accuracy.
class ConvergenceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace species
