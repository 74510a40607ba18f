#pragma once

#include <stdexcept>
#include <string>

namespace pam {

/// Failure categories reported to callers. The CLI maps every kind to exit
/// code 1 and prints the kind string.
enum class ErrorKind {
  invalid_argument,
  domain,
  non_square_atom,
  unsupported_prime,
  refine_required,
  division_by_zero,
  times_degenerate,
  schema,
};

inline const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::invalid_argument: return "invalid-argument";
    case ErrorKind::domain: return "domain";
    case ErrorKind::non_square_atom: return "non-square-atom";
    case ErrorKind::unsupported_prime: return "unsupported-prime";
    case ErrorKind::refine_required: return "refine-xi-required";
    case ErrorKind::division_by_zero: return "division-by-zero";
    case ErrorKind::times_degenerate: return "times-degenerate";
    case ErrorKind::schema: return "schema";
  }
  return "unknown";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& detail)
      : std::runtime_error(detail), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

/// Raised when an identity that must always hold is observed to fail.
/// Seeing one means an implementation bug or a corrupted input fixture.
class IdentityFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& detail) {
  throw Error(kind, detail);
}

}  // namespace pam
