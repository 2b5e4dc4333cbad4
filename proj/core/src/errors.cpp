#include "gyro/errors.hpp"

#include <sstream>

namespace gyro {

ParseError::ParseError(std::size_t line, const std::string& what)
    : ValidationError(line > 0 ? "line " + std::to_string(line) + ": " + what : what),
      line_(line) {}

namespace {
std::string singular_message(double f, double cond) {
  std::ostringstream os;
  os << "cascade singular at frequency " << f << " Hz (condition estimate " << cond << ")";
  return os.str();
}
}  // namespace

CascadeSingular::CascadeSingular(double frequency_hz, double condition)
    : NumericalError(singular_message(frequency_hz, condition)),
      frequency_(frequency_hz),
      condition_(condition) {}

}  // namespace gyro
