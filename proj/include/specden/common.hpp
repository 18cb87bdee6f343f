#pragma once

#include <stdexcept>
#include <string>

namespace specden {

// Numerical failure (solver non-convergence, eigensolver breakdown, ...).
// CLI maps this to exit code 2.
class numerical_error : public std::runtime_error {
 public:
  explicit numerical_error(const std::string& msg) : std::runtime_error(msg) {}
};

// A model violates one of the checkable hypotheses. CLI exit code 3.
class hypothesis_error : public std::runtime_error {
 public:
  explicit hypothesis_error(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace specden
