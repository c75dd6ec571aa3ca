#pragma once

#include <stdexcept>
#include <string>

namespace cgf_outliers {

// Bad arguments: empty vectors, non-finite data, out-of-range parameters.
class ArgumentError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Input is well-formed but statistically degenerate (zero variance, zero MAD).
class DegenerateInputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Distribution parameters that do not define a valid law (non-SPD scale,
// |delta| >= 1, nu <= 2, empty outlier block).
class ParameterError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class DetectorError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed CSV or price table; carries the 1-based row and column when known.
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, std::size_t row = 0, std::size_t col = 0)
      : std::runtime_error(what), row_(row), col_(col) {}
  std::size_t row() const { return row_; }
  std::size_t col() const { return col_; }

 private:
  std::size_t row_;
  std::size_t col_;
};

}  // namespace cgf_outliers
