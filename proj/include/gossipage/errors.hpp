#pragma once

#include <stdexcept>
#include <string>

namespace gossipage {

// Violations of scenario invariants (bad counts, rates, split sums).
enum class SpecErrorCode {
  NonDivisible,
  NonPositiveRate,
  RateSplitMismatch,
  HierarchyCountMismatch,
  MissingRate,
  BadCount,
};

class SpecError : public std::runtime_error {
public:
  SpecError(SpecErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}
  SpecErrorCode code() const noexcept { return code_; }

private:
  SpecErrorCode code_;
};

// Failures raised while evaluating an otherwise valid scenario.
enum class EvalErrorCode {
  ClusterTooLarge,
  UnreachableUser,
  UnsupportedRegime,
  DegenerateCurve,
  ZeroTotalRate,
  HorizonTooShort,
  NoFeasibleTuple,
  UnknownEdge,
};

class EvalError : public std::runtime_error {
public:
  EvalError(EvalErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}
  EvalErrorCode code() const noexcept { return code_; }

private:
  EvalErrorCode code_;
};

const char* to_string(SpecErrorCode code);
const char* to_string(EvalErrorCode code);

}  // namespace gossipage
