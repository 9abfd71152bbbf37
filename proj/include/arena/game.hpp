#pragma once

#include "arena/aiger.hpp"
#include "arena/dd.hpp"

#include <cstddef>
#include <ostream>
#include <vector>

namespace arena::game {

// Symbolic safety game of an extended-AIGER specification. Variable order in
// the manager: (latch_i, latch_i') interleaved, then uncontrollable inputs,
// then controllable inputs.
struct Game
{
    dd::Manager* manager = nullptr;
    std::vector<dd::VarId> state_vars;
    std::vector<dd::VarId> next_vars;
    std::vector<dd::VarId> uncontrollable_vars;
    std::vector<dd::VarId> controllable_vars;
    std::vector<dd::Bdd> next_fns; // over (state, uncontrollable, controllable)
    dd::Bdd err_fn;
    dd::Bdd init; // all latches 0
};

Game build_game(const aiger::Aig& a, const aiger::InputPartition& p, dd::Manager& m);

// States from which the environment forces, in one step, the error or a
// successor in `target`: exists u. forall c. err | target(next).
dd::Bdd upre(const Game& g, const dd::Bdd& target);

struct SolveResult
{
    bool realizable = false;
    dd::Bdd winning_region;
    // L_0 = false, L_{k+1} = L_k | upre(L_k); the last two entries are equal.
    std::vector<dd::Bdd> losing_rings;
    std::size_t iterations = 0;
};

struct SolveOptions
{
    // Ring sizes are written here, one line per iteration, when set.
    std::ostream* log = nullptr;
};

SolveResult solve(const Game& g, const SolveOptions& options = {});

// Mealy controller: one function over (state, uncontrollable) per
// controllable input, aligned with Game::controllable_vars.
struct Strategy
{
    std::vector<dd::Bdd> functions;
};

// Moore environment: one function over the state per uncontrollable input,
// aligned with Game::uncontrollable_vars.
struct CounterStrategy
{
    std::vector<dd::Bdd> functions;
};

// Permissible moves: !err & W(next).
dd::Bdd safe_moves(const Game& g, const dd::Bdd& winning_region);

// Controllable inputs are fixed one at a time in declaration order; each
// takes 1 only where 0 is not permissible.
Strategy extract_strategy(const Game& g, const SolveResult& r);

CounterStrategy extract_counter_strategy(const Game& g, const SolveResult& r);

// W & !(safe moves)[c := f] is empty.
bool strategy_is_sound(const Game& g, const SolveResult& r, const Strategy& s);

// From every state of ring k > 0, u := g(s) forces err or a successor in
// ring k-1 for every choice of the controllable inputs.
bool counter_strategy_is_sound(const Game& g, const SolveResult& r, const CounterStrategy& s);

} // namespace arena::game
