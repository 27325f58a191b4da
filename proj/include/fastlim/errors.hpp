#pragma once

#include <stdexcept>
#include <string>

namespace fastlim {

/// Argument outside the domain of a kinetic or discrete operator
/// (negative toxicity, non-finite input, mismatched lengths, ...).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// f(s) + g(s) fell below the configured floor, so the critical-manifold
/// split R = xi1 + xi2 is not defined.
class SingularManifoldError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A single time step produced negative or non-finite values.
class StepRejected : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Step rejection persisted after the maximum number of step halvings.
class StiffFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace fastlim
