#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace gyro {

// Base of every error the library throws. The CLI maps the subclasses
// onto exit codes, so new failure kinds should derive from one of these.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Input violates a documented precondition or type invariant.
class ValidationError : public Error {
 public:
  using Error::Error;
};

// Malformed text input. `line()` is 1-based; 0 when not tied to a line.
class ParseError : public ValidationError {
 public:
  ParseError(std::size_t line, const std::string& what);
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

// The math is well posed on paper but not at this point (singular
// interconnect, unstable step, on-resonance pole, ...).
class NumericalError : public Error {
 public:
  using Error::Error;
};

// Polarization state or rotation angle has no value for this matrix.
class UndefinedPolarization : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class CascadeSingular : public NumericalError {
 public:
  CascadeSingular(double frequency_hz, double condition);
  double frequency() const noexcept { return frequency_; }
  double condition() const noexcept { return condition_; }

 private:
  double frequency_;
  double condition_;
};

// Analysis ran but reached a negative verdict (e.g. no resonance in band).
class AnalysisVerdict : public Error {
 public:
  using Error::Error;
};

}  // namespace gyro
