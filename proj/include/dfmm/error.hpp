#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace dfmm {

enum class ErrorCode {
    // curves
    TooFewPoints,
    NonMonotoneVolumes,
    NonPositiveDensity,
    InvalidPoint,
    UnsupportedDegree,
    OutOfDomain,
    ReversedInterval,
    NoFeasibleRoot,
    SolverDivergence,
    // ledger
    NonPositiveAmount,
    ExceedsLpClaim,
    ValuationUnavailable,
    NegativeFlow,
    UnknownAsset,
    // pricing
    NoFeasibleSolution,
    ExceedsCapacity,
    CurveUnavailable,
    StaleQuote,
    InsufficientInventory,
    // vaults
    ZeroCapacity,
    BadParams,
    ZeroPrevValue,
    NoCounterpartyCollateral,
    // auction
    NoTargetInOptimal,
    InactiveSide,
    // treasury
    BadRate,
    BadRates,
    NegativeReserveInvariantBreach,
    // metrics
    NonPositivePrice,
    ReversedBounds,
    DegenerateAllAtMarket,
    // sim / cli
    ConfigInvalid,
    ParseError,
    UnknownLogKind,
    CorruptManifest,
    IoError,
};

constexpr std::string_view to_string(ErrorCode code) {
    switch (code) {
    case ErrorCode::TooFewPoints: return "TooFewPoints";
    case ErrorCode::NonMonotoneVolumes: return "NonMonotoneVolumes";
    case ErrorCode::NonPositiveDensity: return "NonPositiveDensity";
    case ErrorCode::InvalidPoint: return "InvalidPoint";
    case ErrorCode::UnsupportedDegree: return "UnsupportedDegree";
    case ErrorCode::OutOfDomain: return "OutOfDomain";
    case ErrorCode::ReversedInterval: return "ReversedInterval";
    case ErrorCode::NoFeasibleRoot: return "NoFeasibleRoot";
    case ErrorCode::SolverDivergence: return "SolverDivergence";
    case ErrorCode::NonPositiveAmount: return "NonPositiveAmount";
    case ErrorCode::ExceedsLpClaim: return "ExceedsLpClaim";
    case ErrorCode::ValuationUnavailable: return "ValuationUnavailable";
    case ErrorCode::NegativeFlow: return "NegativeFlow";
    case ErrorCode::UnknownAsset: return "UnknownAsset";
    case ErrorCode::NoFeasibleSolution: return "NoFeasibleSolution";
    case ErrorCode::ExceedsCapacity: return "ExceedsCapacity";
    case ErrorCode::CurveUnavailable: return "CurveUnavailable";
    case ErrorCode::StaleQuote: return "StaleQuote";
    case ErrorCode::InsufficientInventory: return "InsufficientInventory";
    case ErrorCode::ZeroCapacity: return "ZeroCapacity";
    case ErrorCode::BadParams: return "BadParams";
    case ErrorCode::ZeroPrevValue: return "ZeroPrevValue";
    case ErrorCode::NoCounterpartyCollateral: return "NoCounterpartyCollateral";
    case ErrorCode::NoTargetInOptimal: return "NoTargetInOptimal";
    case ErrorCode::InactiveSide: return "InactiveSide";
    case ErrorCode::BadRate: return "BadRate";
    case ErrorCode::BadRates: return "BadRates";
    case ErrorCode::NegativeReserveInvariantBreach: return "NegativeReserveInvariantBreach";
    case ErrorCode::NonPositivePrice: return "NonPositivePrice";
    case ErrorCode::ReversedBounds: return "ReversedBounds";
    case ErrorCode::DegenerateAllAtMarket: return "DegenerateAllAtMarket";
    case ErrorCode::ConfigInvalid: return "ConfigInvalid";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::UnknownLogKind: return "UnknownLogKind";
    case ErrorCode::CorruptManifest: return "CorruptManifest";
    case ErrorCode::IoError: return "IoError";
    }
    return "Unknown";
}

// Fatal codes mean the engine's own bookkeeping is broken; runs halt on them.
constexpr bool is_fatal(ErrorCode code) {
    return code == ErrorCode::NegativeReserveInvariantBreach;
}

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) {
    throw Error(code, what);
}

} // namespace dfmm
