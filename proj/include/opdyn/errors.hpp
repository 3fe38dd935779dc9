#pragma once

#include <stdexcept>
#include <string>

namespace opdyn {

// Index outside a universe, mismatched universes, or a value outside the
// mathematical domain of an operation.
struct DomainError : std::domain_error {
  using std::domain_error::domain_error;
};

// Caller-supplied parameter violates a documented precondition.
struct ParameterError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// An operator could not be built (nonpositive weights, bad dimensions).
struct ConstructionError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// The operation does not support this operator variant.
struct UnsupportedError : std::logic_error {
  using std::logic_error::logic_error;
};

// A finite computation could not settle the answer (e.g. degree detection
// ran out of window).
struct IndeterminateError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct SingularMatrixError : DomainError {
  using DomainError::DomainError;
};

}  // namespace opdyn
