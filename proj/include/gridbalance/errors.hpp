#pragma once

#include <stdexcept>
#include <string>

namespace gridbalance {

// Invalid inputs are reported with std::invalid_argument. The two types below
// cover the remaining failure classes.

/// A computation would exceed a configured size cap (tree count, permutation
/// count, poset size). The message names the cap.
class ResourceLimitError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An internal arithmetic invariant failed. Seeing this means a bug.
class ComputationError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace gridbalance
