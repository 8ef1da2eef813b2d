#pragma once

#include <stdexcept>
#include <string>

namespace entangle {

// Bad input: malformed files, out-of-range parameters, invalid states.
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// The computation itself failed: non-convergence, degenerate postselection.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DimensionMismatch : public InputError {
 public:
  using InputError::InputError;
};

class InvalidArgument : public InputError {
 public:
  using InputError::InputError;
};

class ParseError : public InputError {
 public:
  using InputError::InputError;
};

class InvalidState : public InputError {
 public:
  using InputError::InputError;
};

class NotHermitian : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class NoConvergence : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class RankDeficient : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class ZeroProbability : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

}  // namespace entangle
