#pragma once

#include <stdexcept>
#include <string>

namespace freqlab {

// Parameter outside the family's domain; message names the violated bound.
struct DomainError : std::domain_error {
  using std::domain_error::domain_error;
};

// An operation's hypothesis does not hold for the given input.
struct PreconditionError : std::logic_error {
  using std::logic_error::logic_error;
};

// A materialized table (a_spec, growth function) is too short for the request.
struct CoverageError : std::out_of_range {
  using std::out_of_range::out_of_range;
};

struct ResourceError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct StructuralError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Raised when an exact identity that must hold does not (a bug, not an input issue).
struct ConsistencyError : std::logic_error {
  using std::logic_error::logic_error;
};

struct SearchError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace freqlab
