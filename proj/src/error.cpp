#include "brwbrw/error.hpp"

namespace brwbrw {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::NegativeWeight: return "NegativeWeight";
    case ErrorCode::NotNormalized: return "NotNormalized";
    case ErrorCode::ZeroWeightLayerOne: return "ZeroWeightLayerOne";
    case ErrorCode::NonPositiveFirstDriftLayerZero: return "NonPositiveFirstDriftLayerZero";
    case ErrorCode::CoordinateOutOfRange: return "CoordinateOutOfRange";
    case ErrorCode::NonUnitIncrement: return "NonUnitIncrement";
    case ErrorCode::NoGeneratorState: return "NoGeneratorState";
    case ErrorCode::UnknownVertex: return "UnknownVertex";
    case ErrorCode::TooSmall: return "TooSmall";
    case ErrorCode::VertexBudgetExceeded: return "VertexBudgetExceeded";
    case ErrorCode::MalformedDump: return "MalformedDump";
    case ErrorCode::NotAnEdgePair: return "NotAnEdgePair";
    case ErrorCode::NotTransient: return "NotTransient";
    case ErrorCode::AlphaNotRoot: return "AlphaNotRoot";
    case ErrorCode::FrontierNotExtended: return "FrontierNotExtended";
    case ErrorCode::DegenerateGrid: return "DegenerateGrid";
    case ErrorCode::TooFewSamples: return "TooFewSamples";
    case ErrorCode::Overflow: return "Overflow";
    case ErrorCode::AlphaInfinite: return "AlphaInfinite";
    case ErrorCode::InsufficientGrid: return "InsufficientGrid";
  }
  return "Unknown";
}

}  // namespace brwbrw
