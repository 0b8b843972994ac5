#pragma once

#include <stdexcept>
#include <string>

namespace otdr {

// Input validation failures.
struct DimensionMismatch : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};
struct NegativeEntry : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};
struct MarginalSumOutOfRange : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};
struct ZeroIterations : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};
struct EmptyClass : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Runtime numerical failures.
struct NonFiniteIterate : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct NoConvergence : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct NumericalUnderflow : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace otdr
