#pragma once

#include <stdexcept>
#include <string>

namespace anticorr {

// Raised when an argument violates a documented domain invariant
// (probabilities outside [0,1], p + q + r != 1, empty ranges, ...).
class InvariantError : public std::invalid_argument {
  public:
    using std::invalid_argument::invalid_argument;
};

// Raised when a computation cannot produce a finite, trustworthy value:
// pole guards, non-convergent series, cutoff caps.
class NumericError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

} // namespace anticorr
