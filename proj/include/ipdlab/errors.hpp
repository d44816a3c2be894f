#pragma once

#include <stdexcept>
#include <string>

namespace ipdlab {

// Invalid input: malformed parameters, strategies, rosters, or violated
// preconditions. CLI maps this to exit code 2.
class ConstraintError : public std::runtime_error {
 public:
  explicit ConstraintError(const std::string& what) : std::runtime_error(what) {}
};

// A solver failed to produce a trustworthy result. CLI maps this to exit code 3.
class NumericError : public std::runtime_error {
 public:
  explicit NumericError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace ipdlab
