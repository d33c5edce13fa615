#ifndef REGIONMIX_ERRORS_HPP_
#define REGIONMIX_ERRORS_HPP_

#include <stdexcept>
#include <string>

namespace regionmix {

// Base class for all errors raised by this library.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Filesystem-level failures: missing file, unreadable, write failure.
struct IoError : Error {
  using Error::Error;
};

// Malformed or unsupported file contents (bad magic, wrong bit depth, ...).
struct FormatError : Error {
  using Error::Error;
};

// Dimension or index mismatch between tensors, grids and masks.
struct ShapeError : Error {
  using Error::Error;
};

// A scalar argument outside its admissible domain.
struct DomainError : Error {
  using Error::Error;
};

// Exhaustive oracle asked to enumerate beyond its configured limit.
struct TooLarge : Error {
  using Error::Error;
};

// Boundary distance requested for a non-adjacent region pair.
struct NotAdjacent : Error {
  using Error::Error;
};

// Transport plan used as a permutation before convergence.
struct NotConverged : Error {
  using Error::Error;
};

// A reduced binary subproblem violates the submodularity condition the
// graph construction requires.
struct SubmodularityViolation : Error {
  using Error::Error;
};

}  // namespace regionmix

#endif  // REGIONMIX_ERRORS_HPP_
