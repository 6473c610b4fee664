#pragma once

#include <stdexcept>
#include <string>

namespace hwgrowth {

// Base of every error raised by the library. The CLI maps subclasses onto
// exit codes, so keep the hierarchy flat.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DomainError : public Error {
 public:
  using Error::Error;
};

// Adaptive quadrature ran out of subdivisions before meeting its tolerance.
class NonConvergence : public Error {
 public:
  using Error::Error;
};

// Averaged counting function of a profile with mass at the origin.
class DivergentIntegral : public Error {
 public:
  using Error::Error;
};

class DivergentTail : public Error {
 public:
  using Error::Error;
};

// S(rho) requested at an integer order.
class IntegerOrderError : public Error {
 public:
  using Error::Error;
};

// Circle mean requested on a circle that passes through an atom.
class SingularCircle : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t line)
      : Error(line ? "line " + std::to_string(line) + ": " + what : what),
        line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

}  // namespace hwgrowth
