#pragma once

#include <stdexcept>
#include <string>

namespace droplet {

/// Base class for all library errors.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// Grid too small to hold the requested lattice band alias-free.
class GridTooSmallError : public Error {
 public:
  using Error::Error;
};

/// Input violates the symmetry lattice beyond the configured tolerance.
class SymmetryViolationError : public Error {
 public:
  using Error::Error;
};

/// Pointwise division hit the magnitude floor (near-degenerate map).
class DivisionFloorError : public Error {
 public:
  using Error::Error;
};

/// min |Z_alpha| fell below the nondegeneracy floor.
class DegenerateMapError : public Error {
 public:
  using Error::Error;
};

/// A quantity that must be real carries too much imaginary part.
class RealnessError : public Error {
 public:
  using Error::Error;
};

/// Seed amplitude outside the admissible local neighborhood.
class StepTooLargeError : public Error {
 public:
  using Error::Error;
};

/// Lattice/mode index out of range.
class IndexError : public Error {
 public:
  using Error::Error;
};

/// Newton corrector did not converge (iteration cap or singular system).
class NewtonFailureError : public Error {
 public:
  using Error::Error;
};

/// Jacobian null space has unexpected dimension along the branch.
class RankDeficiencyError : public Error {
 public:
  using Error::Error;
};

/// Inconsistent continuation configuration.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Malformed persisted branch data.
class ParseError : public Error {
 public:
  using Error::Error;
};

/// Filesystem failure while reading or writing artifacts.
class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace droplet
