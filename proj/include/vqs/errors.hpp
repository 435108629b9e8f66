#pragma once

#include <stdexcept>

namespace vqs {

/// Raised when Pauli or Hamiltonian text cannot be parsed.
class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Raised when a measurement builder produces a plan that leaves some
/// target term with covering probability zero.
class PlanRejected : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Raised when an estimator is asked for a term whose covering probability
/// under the supplied plan is zero or unknown.
class UncoveredTerm : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Raised when every singular value of the metric matrix falls below the
/// truncation cutoff, leaving no invertible subspace.
class SingularM : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Raised when a statistical check is requested with zero samples.
class EmptySample : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace vqs
