#include "scherk/errors.hpp"

namespace scherk {

const char* to_string(ErrorKind kind) noexcept {
    switch (kind) {
        case ErrorKind::Validation: return "Validation";
        case ErrorKind::DomainError: return "DomainError";
        case ErrorKind::ConfigurationError: return "ConfigurationError";
        case ErrorKind::CothBoundViolated: return "CothBoundViolated";
        case ErrorKind::NonIntegrableTail: return "NonIntegrableTail";
        case ErrorKind::NotFound: return "NotFound";
        case ErrorKind::BracketFailure: return "BracketFailure";
        case ErrorKind::NoBracket: return "NoBracket";
        case ErrorKind::StepUnderflow: return "StepUnderflow";
        case ErrorKind::NearSingularity: return "NearSingularity";
        case ErrorKind::TooCloseToWall: return "TooCloseToWall";
    }
    return "Unknown";
}

bool is_input_error(ErrorKind kind) noexcept {
    switch (kind) {
        case ErrorKind::Validation:
        case ErrorKind::DomainError:
        case ErrorKind::ConfigurationError:
        case ErrorKind::CothBoundViolated:
            return true;
        default:
            return false;
    }
}

}  // namespace scherk
