#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace entangle {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Numerical or geometric failure; the CLI maps these to exit status 2.
class NumericalError : public Error {
 public:
  using Error::Error;
};

/// Two segments intersect, nearly intersect, or share an endpoint.
class DegeneratePair : public NumericalError {
 public:
  enum class Reason { shared_endpoint, too_close };

  explicit DegeneratePair(Reason reason, std::size_t first = npos, std::size_t second = npos)
      : NumericalError(describe(reason, first, second)),
        reason_(reason),
        first_(first),
        second_(second) {}

  Reason reason() const noexcept { return reason_; }
  std::size_t first() const noexcept { return first_; }
  std::size_t second() const noexcept { return second_; }

  DegeneratePair with_indices(std::size_t first, std::size_t second) const {
    return DegeneratePair(reason_, first, second);
  }

  static constexpr std::size_t npos = static_cast<std::size_t>(-1);

 private:
  static std::string describe(Reason reason, std::size_t first, std::size_t second) {
    std::string msg = reason == Reason::shared_endpoint ? "segments share an endpoint"
                                                        : "segments intersect or nearly intersect";
    if (first != npos) {
      msg += " (edges " + std::to_string(first) + ", " + std::to_string(second) + ")";
    }
    return msg;
  }

  Reason reason_;
  std::size_t first_;
  std::size_t second_;
};

/// Projected segments are not in general position for the chosen direction.
class DegenerateProjection : public NumericalError {
 public:
  DegenerateProjection() : NumericalError("projection is not in general position") {}
};

/// Consecutive edges are parallel so the binormal is undefined.
class DegenerateTurn : public NumericalError {
 public:
  DegenerateTurn() : NumericalError("consecutive edges are parallel") {}
};

class QuadratureFailure : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class ConcatMismatch : public Error {
 public:
  ConcatMismatch() : Error("concatenated walks must share their start point") {}
};

class SpecInvalid : public Error {
 public:
  using Error::Error;
};

class ExcessiveDegeneracy : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class SingularDesign : public NumericalError {
 public:
  SingularDesign() : NumericalError("fit design is singular: all regressor values are equal") {}
};

class GridMismatch : public Error {
 public:
  GridMismatch() : Error("tables do not share the same length grid") {}
};

class FormatError : public Error {
 public:
  using Error::Error;
};

}  // namespace entangle
