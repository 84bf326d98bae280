#pragma once

#include <stdexcept>
#include <string>

namespace sphtp {

/// Caller violated an operation's documented precondition (grid too small,
/// band limit out of range, mismatched grids).
class PreconditionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Labels do not satisfy the triangle condition where one is required.
class TriangleViolation : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// The (0,0,0) path: scalar multiplication, which no VSTP realises.
class NotInteractable : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A coefficient that must be nonzero came out numerically degenerate.
class NumericalDegeneracy : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace sphtp
