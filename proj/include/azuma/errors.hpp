#pragma once

#include <stdexcept>

namespace azuma {

// Argument outside the mathematical domain of an operation (delta >= 1, b < 1, ...).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// A documented precondition of a verification routine does not hold.
class PreconditionError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

// Result does not fit the return type (e.g. a horizon beyond uint64).
class OverflowError : public std::overflow_error {
 public:
  using std::overflow_error::overflow_error;
};

// Simulation budget exceeded.
class ResourceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Quantity is undefined for the input (zero-variance generator).
class DegenerateInputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace azuma
