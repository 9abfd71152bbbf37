#include "arena/error.hpp"

namespace arena {

std::string_view to_string(Errc code)
{
    switch (code) {
    case Errc::MalformedHeader: return "MalformedHeader";
    case Errc::MalformedLine: return "MalformedLine";
    case Errc::CountMismatch: return "CountMismatch";
    case Errc::RedefinedVariable: return "RedefinedVariable";
    case Errc::UndefinedLiteral: return "UndefinedLiteral";
    case Errc::UnsupportedFeature: return "UnsupportedFeature";
    case Errc::TruncatedDeltaEncoding: return "TruncatedDeltaEncoding";
    case Errc::NotReindexable: return "NotReindexable";
    case Errc::ConflictingStatus: return "ConflictingStatus";
    case Errc::UnknownVariable: return "UnknownVariable";
    case Errc::ManagerMismatch: return "ManagerMismatch";
    case Errc::NotRealizable: return "NotRealizable";
    case Errc::IsRealizable: return "IsRealizable";
    case Errc::UnmappedVariable: return "UnmappedVariable";
    case Errc::StrategyMismatch: return "StrategyMismatch";
    case Errc::TooLarge: return "TooLarge";
    case Errc::ArityMismatch: return "ArityMismatch";
    case Errc::ParamOutOfRange: return "ParamOutOfRange";
    case Errc::IoFailure: return "IoFailure";
    case Errc::EmptyIndex: return "EmptyIndex";
    case Errc::SpawnFailure: return "SpawnFailure";
    case Errc::TooManyConfigurations: return "TooManyConfigurations";
    case Errc::InvalidConfig: return "InvalidConfig";
    }
    return "Unknown";
}

} // namespace arena
