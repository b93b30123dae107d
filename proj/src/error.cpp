#include "cproots/error.hpp"

namespace cproots {

const char* error_code_name(ErrorCode code) {
    switch (code) {
        case ErrorCode::NonSquare: return "NonSquare";
        case ErrorCode::NotHermitian: return "NotHermitian";
        case ErrorCode::NoPrincipalLog: return "NoPrincipalLog";
        case ErrorCode::ShapeMismatch: return "ShapeMismatch";
        case ErrorCode::NotPSD: return "NotPSD";
        case ErrorCode::NotUNCP: return "NotUNCP";
        case ErrorCode::VerificationFailed: return "VerificationFailed";
        case ErrorCode::SupportNotAbsorbed: return "SupportNotAbsorbed";
        case ErrorCode::NotFaithful: return "NotFaithful";
        case ErrorCode::NotAStateRoot: return "NotAStateRoot";
        case ErrorCode::OrderOutOfRange: return "OrderOutOfRange";
        case ErrorCode::EpsilonNotFound: return "EpsilonNotFound";
        case ErrorCode::ConstructionFailed: return "ConstructionFailed";
        case ErrorCode::BadRank: return "BadRank";
        case ErrorCode::BadIndices: return "BadIndices";
        case ErrorCode::CaseInfeasible: return "CaseInfeasible";
        case ErrorCode::BadGrid: return "BadGrid";
        case ErrorCode::InvalidInput: return "InvalidInput";
    }
    return "Unknown";
}

Error::Error(ErrorCode code, const std::string& what)
    : std::runtime_error(std::string(error_code_name(code)) + ": " + what), code_(code) {}

}  // namespace cproots
