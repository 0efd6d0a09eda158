#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace tcs {

enum class ErrorCode {
    // input / format
    SyntaxError,
    DuplicateLabel,
    UnknownLabel,
    InvalidSpec,
    IoError,
    // metric axioms
    NonSymmetric,
    NegativeOrZeroOffDiagonal,
    NonZeroDiagonal,
    TriangleViolation,
    // transport
    NotZeroSum,
    UnknownPoint,
    MissingValue,
    // LP / matching
    DimensionMismatch,
    TooLarge,
    DuplicatePoint,
    UncrossingFailed,
    NotAMinimumMatching,
    // projection construction
    NotAMember,
    WellDefinednessViolation,
    CaseUnresolvable,
    Internal,
};

inline const char* error_code_name(ErrorCode c) {
    switch (c) {
        case ErrorCode::SyntaxError: return "SyntaxError";
        case ErrorCode::DuplicateLabel: return "DuplicateLabel";
        case ErrorCode::UnknownLabel: return "UnknownLabel";
        case ErrorCode::InvalidSpec: return "InvalidSpec";
        case ErrorCode::IoError: return "IoError";
        case ErrorCode::NonSymmetric: return "NonSymmetric";
        case ErrorCode::NegativeOrZeroOffDiagonal: return "NegativeOrZeroOffDiagonal";
        case ErrorCode::NonZeroDiagonal: return "NonZeroDiagonal";
        case ErrorCode::TriangleViolation: return "TriangleViolation";
        case ErrorCode::NotZeroSum: return "NotZeroSum";
        case ErrorCode::UnknownPoint: return "UnknownPoint";
        case ErrorCode::MissingValue: return "MissingValue";
        case ErrorCode::DimensionMismatch: return "DimensionMismatch";
        case ErrorCode::TooLarge: return "TooLarge";
        case ErrorCode::DuplicatePoint: return "DuplicatePoint";
        case ErrorCode::UncrossingFailed: return "UncrossingFailed";
        case ErrorCode::NotAMinimumMatching: return "NotAMinimumMatching";
        case ErrorCode::NotAMember: return "NotAMember";
        case ErrorCode::WellDefinednessViolation: return "WellDefinednessViolation";
        case ErrorCode::CaseUnresolvable: return "CaseUnresolvable";
        case ErrorCode::Internal: return "Internal";
    }
    return "Unknown";
}

/// Library-wide exception. `witnesses` carries the offending labels/indices
/// (e.g. the point triple of a triangle violation), `index` the failing
/// prefix length for NotAMinimumMatching.
class TcsError : public std::runtime_error {
public:
    TcsError(ErrorCode code, const std::string& message,
             std::vector<std::string> witnesses = {}, long index = -1)
        : std::runtime_error(std::string(error_code_name(code)) + ": " + message),
          code_(code),
          witnesses_(std::move(witnesses)),
          index_(index) {}

    ErrorCode code() const noexcept { return code_; }
    const std::vector<std::string>& witnesses() const noexcept { return witnesses_; }
    long index() const noexcept { return index_; }

private:
    ErrorCode code_;
    std::vector<std::string> witnesses_;
    long index_;
};

} // namespace tcs
