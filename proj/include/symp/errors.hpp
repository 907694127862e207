#pragma once

#include <stdexcept>
#include <string>

namespace symp {

/// Base class for all library errors. Validation failures (bad input,
/// violated preconditions) derive from this; the CLI maps them to exit 2.
struct Error : std::runtime_error {
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

struct DimensionError : Error {
  using Error::Error;
};
struct DeterminantError : Error {
  using Error::Error;
};
struct ZeroFormError : Error {
  using Error::Error;
};
struct FitError : Error {
  using Error::Error;
};
struct DivisionError : Error {
  using Error::Error;
};
struct DegenerateError : Error {
  using Error::Error;
};
struct RangeError : Error {
  using Error::Error;
};
struct SolveError : Error {
  using Error::Error;
};
struct RankError : Error {
  using Error::Error;
};
struct MissingVolumeError : Error {
  using Error::Error;
};
struct HypothesisError : Error {
  using Error::Error;
};

/// Memory/work budget exhaustion. The CLI maps this to exit 3.
struct CapacityError : Error {
  using Error::Error;
};

}  // namespace symp
