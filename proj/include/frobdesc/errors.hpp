#pragma once

#include <stdexcept>
#include <string>

namespace frobdesc {

/// An input is outside the domain where an operation is defined.
class PreconditionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A computed quantity disagrees with a claim it is supposed to verify.
/// Raising this means the mathematics did not check out for the given input.
class InconsistencyError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// Malformed textual input (polynomials, ranges, scenario documents).
class ParseError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

}  // namespace frobdesc
