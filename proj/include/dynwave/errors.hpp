#pragma once

#include <stdexcept>
#include <string>

namespace dynwave {

/// Base class for every error thrown by the library.
class Error : public std::runtime_error {
public:
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

/// Violated precondition or invalid argument (bad N, incompatible traces, ...).
class ArgumentError : public Error {
public:
  explicit ArgumentError(const std::string& msg) : Error(msg) {}
};

/// Config-file or command-line parsing problem; carries the offending line.
class ConfigError : public Error {
public:
  ConfigError(const std::string& msg, int line_no = 0)
      : Error(line_no > 0 ? "line " + std::to_string(line_no) + ": " + msg : msg),
        line(line_no) {}
  int line;
};

/// Numerical breakdown: non-convergence, singular solve, overflow.
class NumericalError : public Error {
public:
  explicit NumericalError(const std::string& msg) : Error(msg) {}
};

/// Spectral parameter hit a pole (sigma(A0) or a discrete eigenvalue).
class SingularityError : public NumericalError {
public:
  explicit SingularityError(const std::string& msg) : NumericalError(msg) {}
};

/// Time integration produced NaN/Inf; records the step where it happened.
class BlowUpError : public NumericalError {
public:
  BlowUpError(const std::string& msg, long at_step)
      : NumericalError(msg + " at step " + std::to_string(at_step)), step(at_step) {}
  long step;
};

} // namespace dynwave
