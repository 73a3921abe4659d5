#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace moment_spectra {

enum class ErrorKind {
  Syntax,
  InvalidArgument,
  DimensionMismatch,
  QuadratureFailed,
  DuplicateMoments,
  DegenerateAtZero,
  DivisionBlowUp,
  HypothesesNotMet,
  DenseLimitExceeded,
  NonConvergence,
  Overflow,
};

const char* to_string(ErrorKind kind);

/// Base exception for every recoverable failure in the toolkit.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

/// Measure-spec syntax error; position is a 0-based byte offset into the input.
class ParseError : public Error {
 public:
  ParseError(std::size_t position, const std::string& message)
      : Error(ErrorKind::Syntax,
              message + " at position " + std::to_string(position)),
        position_(position) {}

  std::size_t position() const noexcept { return position_; }

 private:
  std::size_t position_;
};

/// Adaptive quadrature could not reach the requested tolerance.
class QuadratureError : public Error {
 public:
  QuadratureError(double achieved, double requested)
      : Error(ErrorKind::QuadratureFailed,
              "quadrature reached error bound " + std::to_string(achieved) +
                  " > tolerance " + std::to_string(requested)),
        achieved_(achieved) {}

  double achieved_bound() const noexcept { return achieved_; }

 private:
  double achieved_;
};

}  // namespace moment_spectra
