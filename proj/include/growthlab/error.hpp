#pragma once

#include <stdexcept>
#include <string>

namespace growthlab {

enum class ErrorCode {
    InvalidArgument,
    ParseError,
    NotPrime,
    NotIrreducible,
    DivisionByZero,
    FieldMismatch,
    EmptyInput,
    ZeroDivisorEdge,
    ZeroDilation,
    BudgetExceeded,
    TooSmall,
    SubsetBudgetExceeded,
    NotInLeftSet,
    DensityTooLow,
    NoWitness,
    ZeroInRight,
    AtInfinity,
    DimMismatch,
    NotAFrame,
    DegenerateTriple,
    NoIncidences,
    NotACube,
    FieldTooSmall,
    FocusInSet,
    NotInP,
    RegularityViolated,
    HypothesisFailed,
    MapDegenerate,
    PreconditionFailed,
    ZeroElement,
    DegenerateElements,
    NotInSet,
    NotAChain,
    NotSeparable,
    SpecInvalid,
    IOFailure,
    UnknownCheck,
    TooFewPoints,
};

const char* to_string(ErrorCode code) noexcept;

// Every library failure is reported through this type; `code()` identifies the
// condition and `what()` carries a human-readable message.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& message)
        : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& message) {
    throw Error(code, message);
}

// Budget on enumeration steps shared by the exhaustive routines.
inline constexpr unsigned long long kEnumerationBudget = 100000000ULL;

}  // namespace growthlab
