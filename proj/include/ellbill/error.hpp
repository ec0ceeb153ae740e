#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace ellbill {

/// Failure categories raised by the library. The CLI maps these to exit code 1
/// and prints the name returned by error_name().
enum class ErrorCode {
    DegenerateEllipse,
    OutOfRange,
    GlancingRay,
    SeparatrixLevel,
    OutOfActionInterval,
    DivisionDegenerate,
    OutOfSector,
    TruncationNotConverged,
    GridTooCoarse,
    ShootingBracketFailed,
    NotACharacteristicValue,
    NoBracket,
    MultipleRoots,
    KindMismatch,
    NotSymmetric,
    SolverStagnated,
    ParseError,
    InvalidArgument,
};

constexpr std::string_view error_name(ErrorCode code) {
    switch (code) {
        case ErrorCode::DegenerateEllipse: return "DegenerateEllipse";
        case ErrorCode::OutOfRange: return "OutOfRange";
        case ErrorCode::GlancingRay: return "GlancingRay";
        case ErrorCode::SeparatrixLevel: return "SeparatrixLevel";
        case ErrorCode::OutOfActionInterval: return "OutOfActionInterval";
        case ErrorCode::DivisionDegenerate: return "DivisionDegenerate";
        case ErrorCode::OutOfSector: return "OutOfSector";
        case ErrorCode::TruncationNotConverged: return "TruncationNotConverged";
        case ErrorCode::GridTooCoarse: return "GridTooCoarse";
        case ErrorCode::ShootingBracketFailed: return "ShootingBracketFailed";
        case ErrorCode::NotACharacteristicValue: return "NotACharacteristicValue";
        case ErrorCode::NoBracket: return "NoBracket";
        case ErrorCode::MultipleRoots: return "MultipleRoots";
        case ErrorCode::KindMismatch: return "KindMismatch";
        case ErrorCode::NotSymmetric: return "NotSymmetric";
        case ErrorCode::SolverStagnated: return "SolverStagnated";
        case ErrorCode::ParseError: return "ParseError";
        case ErrorCode::InvalidArgument: return "InvalidArgument";
    }
    return "Unknown";
}

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(std::string(error_name(code)) + ": " + what), code_(code) {}

    ErrorCode code() const noexcept { return code_; }
    std::string_view name() const noexcept { return error_name(code_); }

private:
    ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) { throw Error(code, what); }

}  // namespace ellbill
