#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace ddca {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Invalid parameters: engine config, scenario spec, threshold inputs.
class ConfigError : public Error {
 public:
  using Error::Error;
};

// Malformed or out-of-order input data. line() is 1-based, 0 when unknown.
class DataError : public Error {
 public:
  explicit DataError(const std::string& what, std::size_t line = 0)
      : Error(line == 0 ? what : "line " + std::to_string(line) + ": " + what), line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

// A postcondition of the engine or a cross-check failed.
class InvariantError : public Error {
 public:
  using Error::Error;
};

}  // namespace ddca
