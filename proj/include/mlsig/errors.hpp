#pragma once

#include <stdexcept>
#include <string>

namespace mlsig {

/// Base class of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed text input (cycle notation, group files, LS files, key files).
class ParseError : public Error {
 public:
  using Error::Error;
};

/// A precondition on the arguments was violated (degree mismatch, digit out
/// of range, non-solvable input to a solvable-only routine, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// An element is not a member of the group it was supposed to belong to.
class NotMember : public Error {
 public:
  using Error::Error;
};

/// A computation would exceed its configured enumeration budget.
class BudgetExceeded : public Error {
 public:
  using Error::Error;
};

}  // namespace mlsig
