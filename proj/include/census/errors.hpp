#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace census {

struct MalformedUrl : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct BudgetExhausted : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct OutOfScope : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct NotADirectory : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct TrainingError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ValidationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct NoPath : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct UndefinedRate : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Malformed input file content. `line` is 1-based, 0 when unknown.
struct FormatError : std::runtime_error {
  FormatError(const std::string& what, std::size_t line = 0)
      : std::runtime_error(line ? what + " (line " + std::to_string(line) + ")" : what),
        line(line) {}
  std::size_t line;
};

}  // namespace census
