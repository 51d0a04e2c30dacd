#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace brwbrw {

enum class ErrorCode {
  InvalidArgument,
  // walk-core
  NegativeWeight,
  NotNormalized,
  ZeroWeightLayerOne,
  NonPositiveFirstDriftLayerZero,
  CoordinateOutOfRange,
  // trace-graph
  NonUnitIncrement,
  NoGeneratorState,
  UnknownVertex,
  TooSmall,
  VertexBudgetExceeded,
  MalformedDump,
  // analysis
  NotAnEdgePair,
  NotTransient,
  AlphaNotRoot,
  // nested-walk
  FrontierNotExtended,
  // experiments
  DegenerateGrid,
  TooFewSamples,
  Overflow,
  AlphaInfinite,
  InsufficientGrid,
};

std::string_view to_string(ErrorCode code);

// Every library failure is reported through this type; callers switch on code().
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace brwbrw
