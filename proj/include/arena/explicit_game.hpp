#pragma once

#include "arena/aiger.hpp"
#include "arena/sim.hpp"

#include <cstddef>
#include <cstdint>
#include <vector>

// Explicit-state safety games: every (state, uncontrollable, controllable)
// combination is tabulated by gate-level simulation and the game is solved by
// backward induction over the full state graph. Shares nothing with the BDD
// path, which is what makes it useful as a reference.
namespace arena::explicit_game {

inline constexpr unsigned max_bits = 24;

struct Table
{
    unsigned latches = 0;
    unsigned uncontrollable = 0;
    unsigned controllable = 0;
    // Indexed by s | u << latches | c << (latches + uncontrollable).
    std::vector<std::uint8_t> err;
    std::vector<std::uint32_t> next;

    std::size_t index(std::uint32_t s, std::uint32_t u, std::uint32_t c) const
    {
        return std::size_t{s} | std::size_t{u} << latches | std::size_t{c} << (latches + uncontrollable);
    }
    std::size_t states() const { return std::size_t{1} << latches; }

    friend bool operator==(const Table&, const Table&) = default;
};

// Throws TooLarge beyond max_bits total latches + inputs.
Table tabulate(const aiger::Aig& a, const aiger::InputPartition& p, sim::Exec exec);

inline constexpr std::uint32_t never = static_cast<std::uint32_t>(-1);

struct Solution
{
    // rank[s] = k >= 1 if s first joins the losing set at iteration k,
    // `never` if s is winning.
    std::vector<std::uint32_t> rank;
    bool realizable = false;
    std::size_t iterations = 0;

    friend bool operator==(const Solution&, const Solution&) = default;
};

Solution solve(const Table& t, sim::Exec exec);

} // namespace arena::explicit_game
