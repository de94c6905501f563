#pragma once

#include <stdexcept>
#include <string>

namespace multicolor {

enum class ErrorCode {
    EmptyPath,
    IllegalSegment,
    IoError,
    ConflictingKind,
    UnknownNode,
    EmptyCandidateSet,
    DuplicateUnit,
    DuplicateIssueId,
    DimensionMismatch,
    UnknownIssue,
    EmptyCorpus,
    IndexMismatch,
    FingerprintMismatch,
    InvalidIssue,
    BadConfig,
};

const char* to_string(ErrorCode code);

/// Domain error carrying a machine-checkable code plus a human message.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& message)
        : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

inline const char* to_string(ErrorCode code) {
    switch (code) {
        case ErrorCode::EmptyPath: return "EmptyPath";
        case ErrorCode::IllegalSegment: return "IllegalSegment";
        case ErrorCode::IoError: return "IoError";
        case ErrorCode::ConflictingKind: return "ConflictingKind";
        case ErrorCode::UnknownNode: return "UnknownNode";
        case ErrorCode::EmptyCandidateSet: return "EmptyCandidateSet";
        case ErrorCode::DuplicateUnit: return "DuplicateUnit";
        case ErrorCode::DuplicateIssueId: return "DuplicateIssueId";
        case ErrorCode::DimensionMismatch: return "DimensionMismatch";
        case ErrorCode::UnknownIssue: return "UnknownIssue";
        case ErrorCode::EmptyCorpus: return "EmptyCorpus";
        case ErrorCode::IndexMismatch: return "IndexMismatch";
        case ErrorCode::FingerprintMismatch: return "FingerprintMismatch";
        case ErrorCode::InvalidIssue: return "InvalidIssue";
        case ErrorCode::BadConfig: return "BadConfig";
    }
    return "UnknownError";
}

}  // namespace multicolor
