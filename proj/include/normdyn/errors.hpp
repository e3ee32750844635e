#pragma once

#include <stdexcept>
#include <string>

namespace normdyn {

// Bad inputs: rejected preconditions, malformed specs/files. CLI maps this to exit 2.
class ValidationError : public std::runtime_error {
 public:
  explicit ValidationError(const std::string& what) : std::runtime_error(what) {}
};

// Structurally valid request that exceeds a stated size/budget bound. CLI exit 3.
class CapacityError : public std::runtime_error {
 public:
  explicit CapacityError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace normdyn
