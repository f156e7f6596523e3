#include "patlake/error.hpp"

namespace patlake {

const char* to_string(ErrorCode code) {
    switch (code) {
        case ErrorCode::TokenBudgetExceeded: return "TokenBudgetExceeded";
        case ErrorCode::EmptyColumn: return "EmptyColumn";
        case ErrorCode::ColumnNotFound: return "ColumnNotFound";
        case ErrorCode::ConfigMismatch: return "ConfigMismatch";
        case ErrorCode::VersionMismatch: return "VersionMismatch";
        case ErrorCode::FingerprintMismatch: return "FingerprintMismatch";
        case ErrorCode::Io: return "IoError";
        case ErrorCode::Format: return "FormatError";
        case ErrorCode::InvalidPattern: return "InvalidPattern";
        case ErrorCode::InvalidHierarchy: return "InvalidHierarchy";
        case ErrorCode::InvalidArgument: return "InvalidArgument";
        case ErrorCode::ToleranceExceeded: return "ToleranceExceeded";
    }
    return "Unknown";
}

}  // namespace patlake
