#pragma once

#include <stdexcept>
#include <string>

namespace enf {

// Base for every error thrown by the library. Bad caller input derives from
// InvalidArgument; numerically degenerate data derives from DegenerateInput.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidArgument : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

class UnsupportedFormat : public Error {
 public:
  using Error::Error;
};

// Malformed track file; line() is 1-based and counts the header.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t line)
      : Error(what), line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

class DegenerateInput : public Error {
 public:
  using Error::Error;
};

class NotPositiveDefinite : public DegenerateInput {
 public:
  NotPositiveDefinite(const std::string& what, std::size_t order)
      : DegenerateInput(what), order_(order) {}
  // Recursion order at which the prediction error stopped being positive.
  std::size_t order() const noexcept { return order_; }

 private:
  std::size_t order_;
};

class NumericalDegeneracy : public DegenerateInput {
 public:
  NumericalDegeneracy(const std::string& what, std::size_t bin)
      : DegenerateInput(what), bin_(bin) {}
  std::size_t bin() const noexcept { return bin_; }

 private:
  std::size_t bin_;
};

class UndefinedCorrelation : public DegenerateInput {
 public:
  using DegenerateInput::DegenerateInput;
};

}  // namespace enf
