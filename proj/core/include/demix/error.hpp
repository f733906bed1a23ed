#pragma once

#include <stdexcept>
#include <string>

namespace demix {

/// Raised when an argument violates an operation's documented precondition
/// (wrong shape, out-of-range parameter, non-orthogonal basis, ...).
class DomainError : public std::invalid_argument {
 public:
  explicit DomainError(const std::string& what) : std::invalid_argument(what) {}
};

/// Raised when a numerical procedure cannot produce an answer: a root is
/// not bracketed, an iteration cap was hit where no best iterate makes
/// sense, and so on.
class NumericalError : public std::runtime_error {
 public:
  explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace demix
