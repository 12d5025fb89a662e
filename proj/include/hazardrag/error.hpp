#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace hazardrag {

enum class ErrorCode {
    DuplicateId,
    EmptyText,
    MalformedRecord,
    SchemaRowMismatch,
    InvalidSchema,
    EmptyCorpus,
    EmbedderFailure,
    ScorerFailure,
    ClientFailure,
    SearchFailure,
    NonMonotonicTimestamp,
    LengthMismatch,
    EmptyInput,
    EmptyKeypoints,
    InvalidConfig,
    InvalidSnapshot,
    ExecutionError,
    TranslationFailed,
    UnknownSession,
    NotReady,
    Io,
};

std::string_view to_string(ErrorCode code) noexcept;

// Single exception type for the library; callers branch on code().
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& message)
        : std::runtime_error(message), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

}  // namespace hazardrag
