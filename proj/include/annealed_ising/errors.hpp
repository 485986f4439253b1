#pragma once

#include <stdexcept>
#include <string>

namespace aising {

/// Argument outside the mathematical domain of an operation (odd pairing
/// counts, t outside [0, 1/2], d < 2, ...).
class DomainError : public std::domain_error {
 public:
  explicit DomainError(const std::string& what) : std::domain_error(what) {}
};

/// Bracketed root search called without a sign change.
class BracketError : public std::invalid_argument {
 public:
  explicit BracketError(const std::string& what) : std::invalid_argument(what) {}
};

/// Iterative scheme failed to reach its tolerance.
class NumericalError : public std::runtime_error {
 public:
  explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace aising
