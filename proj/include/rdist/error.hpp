#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace rdist {

// Invalid argument to a library call (bad vertex id, r < 1, ...).
class ArgumentError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// The strength parameter is undefined for the input (isolated edge present).
class ProblemUndefined : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Integer range exceeded (Δ^{r-1} or Δ·k_max beyond 62 bits).
class CapacityError : public std::overflow_error {
 public:
  using std::overflow_error::overflow_error;
};

// Malformed text input. line() is 1-based, 0 when not tied to a line.
class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : std::runtime_error(line == 0 ? what : "line " + std::to_string(line) + ": " + what),
        line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

}  // namespace rdist
