#pragma once

#include <stdexcept>
#include <string>

namespace rftrap {

// Base for every error raised by the library that is not a plain
// precondition violation (those use std::invalid_argument).
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Operation restricted to the quadrupole (k = 2) was called on a multipole.
class QuadrupoleOnly : public Error {
 public:
  explicit QuadrupoleOnly(const std::string& what)
      : Error(what + ": quadrupole-only operation (k = 2)") {}
};

// (a, q) outside the lowest stability region, or the continued fraction
// did not converge.
class UnstablePoint : public Error {
 public:
  using Error::Error;
};

// Axial deconfinement exceeds the radial pseudopotential curvature.
class Deconfined : public Error {
 public:
  using Error::Error;
};

// Root bracketing failed: target unreachable within the search range.
class OutOfBracket : public Error {
 public:
  using Error::Error;
};

// Profile did not reach its edge (step underflow or truncated).
class IncompleteProfile : public Error {
 public:
  using Error::Error;
};

// Numerical failure of a solver (step underflow without bracketing, etc.).
class SolverFailure : public Error {
 public:
  using Error::Error;
};

// Spectrum requested from a trajectory too short or too coarsely sampled.
class TooShort : public Error {
 public:
  using Error::Error;
};

}  // namespace rftrap
