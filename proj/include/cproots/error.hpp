#pragma once

#include <stdexcept>
#include <string>

namespace cproots {

enum class ErrorCode {
    NonSquare,
    NotHermitian,
    NoPrincipalLog,
    ShapeMismatch,
    NotPSD,
    NotUNCP,
    VerificationFailed,
    SupportNotAbsorbed,
    NotFaithful,
    NotAStateRoot,
    OrderOutOfRange,
    EpsilonNotFound,
    ConstructionFailed,
    BadRank,
    BadIndices,
    CaseInfeasible,
    BadGrid,
    InvalidInput,
};

const char* error_code_name(ErrorCode code);

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what);
    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

}  // namespace cproots
