#pragma once

#include <stdexcept>
#include <string>

namespace novikov {

// Error categories map onto the CLI exit-code contract (see run.hpp).

class InputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class ResourceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Raised when finite-window evidence contradicts a structural statement the
/// tracer relies on (spanning level line while Omega- or Omega+ misses the
/// window boundary). Indicates a tracer bug or a singular-level artifact.
class ConsistencyError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// A probe landed too close to the level to decide a sign.
class UndeterminedError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An operation that requires a level outside the critical interval found
/// open level lines.
class ContradictionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace novikov
