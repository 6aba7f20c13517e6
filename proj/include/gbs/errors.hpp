#pragma once
#include <stdexcept>
#include <string>

namespace gbs {

// Domain-level failures (bad mathematical input, violated preconditions).
// The CLI maps these to exit code 1.
struct DomainError : std::runtime_error {
  explicit DomainError(const std::string& what) : std::runtime_error(what) {}
};

// Malformed text input. The CLI maps these to exit code 2.
struct ParseError : std::runtime_error {
  explicit ParseError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace gbs
