#ifndef MVK_ERROR_HPP
#define MVK_ERROR_HPP

#include <stdexcept>
#include <string>

namespace mvk {

/// Argument outside the domain of a polynomial family or process.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Duality needs every first-category basis value nonzero.
class DualityUnavailableError : public DomainError {
 public:
  using DomainError::DomainError;
};

/// A candidate object (basis, urn, multi-index) failed its invariants.
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A truncated infinite sum could not meet its tolerance.
class TruncationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// The requested operation is not defined for this family or scalar type.
class UnsupportedError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// Problem size exceeds the brute-force / oracle limits.
class ScaleError : public std::length_error {
 public:
  using std::length_error::length_error;
};

}  // namespace mvk

#endif  // MVK_ERROR_HPP
