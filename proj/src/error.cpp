#include "regrowth/error.hpp"

namespace regrowth {

std::string_view to_string(ErrorCode code) noexcept {
    switch (code) {
        case ErrorCode::NonStochasticRow: return "NonStochasticRow";
        case ErrorCode::ReducibleChain: return "ReducibleChain";
        case ErrorCode::DomainError: return "DomainError";
        case ErrorCode::NonFiniteIntegrand: return "NonFiniteIntegrand";
        case ErrorCode::NumericUnderflow: return "NumericUnderflow";
        case ErrorCode::InfiniteMoment: return "InfiniteMoment";
        case ErrorCode::GridMismatch: return "GridMismatch";
        case ErrorCode::InvalidValueTag: return "InvalidValueTag";
        case ErrorCode::InfeasiblePolicy: return "InfeasiblePolicy";
        case ErrorCode::DegenerateMass: return "DegenerateMass";
        case ErrorCode::BoundaryPolicy: return "BoundaryPolicy";
        case ErrorCode::EmptySample: return "EmptySample";
        case ErrorCode::ConfigError: return "ConfigError";
        case ErrorCode::MissingArtifact: return "MissingArtifact";
    }
    return "Unknown";
}

}  // namespace regrowth
