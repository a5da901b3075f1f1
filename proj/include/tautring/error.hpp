#ifndef TAUTRING_ERROR_HPP
#define TAUTRING_ERROR_HPP

#include <stdexcept>
#include <string>

namespace tautring {

/// Bad caller input: unstable (g,n), malformed graph, ambient mismatch.
class InvalidInput : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A configured size budget was exhausted. Never raised after partial output.
class BudgetExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An internal consistency check failed; indicates a bug, not bad input.
class InvariantViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace tautring

#endif  // TAUTRING_ERROR_HPP
