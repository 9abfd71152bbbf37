#pragma once

#include "arena/aiger.hpp"
#include "arena/dd.hpp"
#include "arena/game.hpp"

#include <cstddef>
#include <filesystem>
#include <unordered_map>

namespace arena::synth {

// Specification plus controller. The controller is combinational over the
// specification latches, so controller_latch_count is always 0 here.
struct Solution
{
    aiger::Aig circuit;
    std::size_t controller_and_count = 0;
    std::size_t controller_latch_count = 0;
};

// One input per specification latch (latch order), one output: the winning region.
struct WitnessCircuit
{
    aiger::Aig circuit;
};

// Lowers BDDs to multiplexer gates appended to `sink`, at most three AND
// gates per BDD node. Nodes are memoized across calls, so functions sharing
// subgraphs share gates.
class GateEncoder
{
public:
    GateEncoder(dd::Manager& m, aiger::Aig& sink, std::unordered_map<dd::VarId, aiger::Lit> var_to_lit);

    aiger::Lit encode(const dd::Bdd& f);

private:
    aiger::Lit make_and(aiger::Lit a, aiger::Lit b);
    aiger::Lit encode_node(const dd::Bdd& f);

    dd::Manager* mgr_;
    aiger::Aig* sink_;
    std::unordered_map<dd::VarId, aiger::Lit> var_to_lit_;
    std::unordered_map<dd::NodeId, aiger::Lit> memo_;
};

aiger::Lit bdd_to_gates(dd::Manager& m, const dd::Bdd& f, const std::unordered_map<dd::VarId, aiger::Lit>& var_to_lit,
                        aiger::Aig& sink);

// Former controllable inputs keep their variable index and become gate
// outputs; everything else in the specification is left as it was, and the
// controller gates come after the specification gates.
Solution encode_solution(const aiger::Aig& spec, const aiger::InputPartition& p, const game::Game& g,
                         const game::Strategy& strategy);

// Environment side: uncontrollable inputs become gate outputs over the
// latches, controllable inputs stay free, the output is still the error.
aiger::Aig encode_counter_strategy(const aiger::Aig& spec, const aiger::InputPartition& p, const game::Game& g,
                                   const game::CounterStrategy& strategy);

WitnessCircuit encode_witness(const game::Game& g, const dd::Bdd& winning_region);

// "<solution>.winregion.aag"
std::filesystem::path witness_path(const std::filesystem::path& solution);

} // namespace arena::synth
