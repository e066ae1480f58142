#pragma once

#include <stdexcept>
#include <string>

namespace harnesslab {

struct DomainError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// u(1+sigma*s)+tau-q*s vanished: the regression form is undefined there.
struct ZeroDenominator : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ZeroF : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// A lambda denominator vanished while building the recurrence tables.
struct DegenerateDenominator : std::runtime_error {
  int index;
  explicit DegenerateDenominator(int n)
      : std::runtime_error("degenerate denominator at n=" + std::to_string(n)), index(n) {}
};

struct RepeatedRoot : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Exact mode cannot represent an irrational intermediate (sqrt).
struct IrrationalValue : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct FamilyMismatch : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct PositivityViolated : std::runtime_error {
  int index;
  explicit PositivityViolated(int n)
      : std::runtime_error("positivity violated at n=" + std::to_string(n)), index(n) {}
};

struct TruncationExceeded : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct NotBanded : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct NotSymmetrizable : std::runtime_error {
  int index;
  explicit NotSymmetrizable(int n)
      : std::runtime_error("a_{n-1}c_n not positive at n=" + std::to_string(n)), index(n) {}
};

struct EigenFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace harnesslab
