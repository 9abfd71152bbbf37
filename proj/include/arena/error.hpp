#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace arena {

enum class Errc {
    // aiger
    MalformedHeader,
    MalformedLine,
    CountMismatch,
    RedefinedVariable,
    UndefinedLiteral,
    UnsupportedFeature,
    TruncatedDeltaEncoding,
    NotReindexable,
    ConflictingStatus,
    // dd
    UnknownVariable,
    ManagerMismatch,
    // game / synth
    NotRealizable,
    IsRealizable,
    UnmappedVariable,
    StrategyMismatch,
    TooLarge,
    // verify
    ArityMismatch,
    // bench / harness
    ParamOutOfRange,
    IoFailure,
    EmptyIndex,
    SpawnFailure,
    TooManyConfigurations,
    InvalidConfig,
};

std::string_view to_string(Errc code);

class Error : public std::runtime_error
{
public:
    Error(Errc code, const std::string& what)
        : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code)
    {
    }

    Errc code() const noexcept { return code_; }

private:
    Errc code_;
};

} // namespace arena
