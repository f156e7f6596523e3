#pragma once

#include <stdexcept>
#include <string>

namespace patlake {

enum class ErrorCode {
    TokenBudgetExceeded,
    EmptyColumn,
    ColumnNotFound,
    ConfigMismatch,
    VersionMismatch,
    FingerprintMismatch,
    Io,
    Format,
    InvalidPattern,
    InvalidHierarchy,
    InvalidArgument,
    ToleranceExceeded,
};

const char* to_string(ErrorCode code);

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(what), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

}  // namespace patlake
