#pragma once

#include <stdexcept>
#include <string>

namespace stepfit {

/// Base class for all errors raised by this library.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct EmptyInput : Error {
  EmptyInput() : Error("empty input") {}
  explicit EmptyInput(const std::string& what) : Error(what) {}
};

struct DuplicateP : Error {
  explicit DuplicateP(double p)
      : Error("duplicate p-coordinate " + std::to_string(p) +
              " (use the merge policy to keep repeated prices)") {}
};

struct NonFiniteValue : Error {
  NonFiniteValue() : Error("non-finite value in input") {}
  explicit NonFiniteValue(const std::string& what) : Error(what) {}
};

struct ParseError : Error {
  using Error::Error;
};

struct IndexOutOfRange : Error {
  IndexOutOfRange() : Error("block index out of range") {}
  explicit IndexOutOfRange(const std::string& what) : Error(what) {}
};

struct CurveDoesNotCoverData : Error {
  CurveDoesNotCoverData() : Error("step curve does not cover the data's price span") {}
};

struct BelowDomain : Error {
  BelowDomain() : Error("evaluation point lies below the curve's first breakpoint") {}
};

struct InvalidConfig : Error {
  using Error::Error;
};

struct InstanceTooLarge : Error {
  InstanceTooLarge() : Error("instance exceeds the brute-force size guard") {}
};

struct InfeasibleStepMin : Error {
  InfeasibleStepMin()
      : Error("minimum step length excludes every path to the sink") {}
};

struct InfeasibleCardinality : Error {
  InfeasibleCardinality()
      : Error("no completion within the remaining arc budget") {}
};

struct NonPositiveLB : Error {
  NonPositiveLB() : Error("gap is undefined for a non-positive lower bound") {}
};

}  // namespace stepfit
