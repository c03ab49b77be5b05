#pragma once

#include <stdexcept>
#include <string>

namespace aopt {

// Problem data violates a structural invariant (dimensions, symmetry,
// positive definiteness, sign of the noise level).
class InvalidProblem : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// An iterative procedure could not make progress (e.g. a backtracking line
// search exhausted its doubling budget).
class NumericalFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// The instance is degenerate for the requested operation (e.g. the
// multiplicative update when K is effectively zero).
class DegenerateInstance : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace aopt
