#ifndef COILOPT_ERRORS_H_
#define COILOPT_ERRORS_H_

#include <stdexcept>
#include <string>

namespace coilopt {

// Bad argument or violated precondition (index out of range, malformed spec, ...).
class InvalidArgument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Base for failures that come from the numerics rather than the caller.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Two coils (or a coil and an evaluation point) are closer than the kernel guard allows.
class NearSingular : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

// |ds/dt| vanished at a quadrature node, so the length gradient is undefined.
class DegenerateVelocity : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

// Scene file does not follow the schema or fails validation.
class SceneError : public InvalidArgument {
 public:
  using InvalidArgument::InvalidArgument;
};

}  // namespace coilopt

#endif  // COILOPT_ERRORS_H_
