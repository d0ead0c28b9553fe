#include "growthlab/error.hpp"

namespace growthlab {

const char* to_string(ErrorCode code) noexcept {
    switch (code) {
        case ErrorCode::InvalidArgument: return "InvalidArgument";
        case ErrorCode::ParseError: return "ParseError";
        case ErrorCode::NotPrime: return "NotPrime";
        case ErrorCode::NotIrreducible: return "NotIrreducible";
        case ErrorCode::DivisionByZero: return "DivisionByZero";
        case ErrorCode::FieldMismatch: return "FieldMismatch";
        case ErrorCode::EmptyInput: return "EmptyInput";
        case ErrorCode::ZeroDivisorEdge: return "ZeroDivisorEdge";
        case ErrorCode::ZeroDilation: return "ZeroDilation";
        case ErrorCode::BudgetExceeded: return "BudgetExceeded";
        case ErrorCode::TooSmall: return "TooSmall";
        case ErrorCode::SubsetBudgetExceeded: return "SubsetBudgetExceeded";
        case ErrorCode::NotInLeftSet: return "NotInLeftSet";
        case ErrorCode::DensityTooLow: return "DensityTooLow";
        case ErrorCode::NoWitness: return "NoWitness";
        case ErrorCode::ZeroInRight: return "ZeroInRight";
        case ErrorCode::AtInfinity: return "AtInfinity";
        case ErrorCode::DimMismatch: return "DimMismatch";
        case ErrorCode::NotAFrame: return "NotAFrame";
        case ErrorCode::DegenerateTriple: return "DegenerateTriple";
        case ErrorCode::NoIncidences: return "NoIncidences";
        case ErrorCode::NotACube: return "NotACube";
        case ErrorCode::FieldTooSmall: return "FieldTooSmall";
        case ErrorCode::FocusInSet: return "FocusInSet";
        case ErrorCode::NotInP: return "NotInP";
        case ErrorCode::RegularityViolated: return "RegularityViolated";
        case ErrorCode::HypothesisFailed: return "HypothesisFailed";
        case ErrorCode::MapDegenerate: return "MapDegenerate";
        case ErrorCode::PreconditionFailed: return "PreconditionFailed";
        case ErrorCode::ZeroElement: return "ZeroElement";
        case ErrorCode::DegenerateElements: return "DegenerateElements";
        case ErrorCode::NotInSet: return "NotInSet";
        case ErrorCode::NotAChain: return "NotAChain";
        case ErrorCode::NotSeparable: return "NotSeparable";
        case ErrorCode::SpecInvalid: return "SpecInvalid";
        case ErrorCode::IOFailure: return "IOFailure";
        case ErrorCode::UnknownCheck: return "UnknownCheck";
        case ErrorCode::TooFewPoints: return "TooFewPoints";
    }
    return "Unknown";
}

}  // namespace growthlab
