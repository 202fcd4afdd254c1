#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace mor {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed input text. `line()` is 1-based, 0 when not tied to a line.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t line = 0)
      : Error(line ? what + " (line " + std::to_string(line) + ")" : what), line_(line) {}
  [[nodiscard]] std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

class ShapeError : public Error {
 public:
  using Error::Error;
};

/// A flow cascade asked for a history frame that was never pushed or was evicted.
class NotEnoughHistory : public Error {
 public:
  explicit NotEnoughHistory(std::int64_t missing_index)
      : Error("not enough history: frame " + std::to_string(missing_index) + " is unavailable"),
        missing_index_(missing_index) {}
  [[nodiscard]] std::int64_t missing_index() const noexcept { return missing_index_; }

 private:
  std::int64_t missing_index_;
};

class NumericError : public Error {
 public:
  using Error::Error;
};

}  // namespace mor
