#include "arena/synth.hpp"

#include "arena/error.hpp"

#include <algorithm>
#include <map>

namespace arena::synth {

using aiger::Lit;

GateEncoder::GateEncoder(dd::Manager& m, aiger::Aig& sink, std::unordered_map<dd::VarId, Lit> var_to_lit)
    : mgr_(&m), sink_(&sink), var_to_lit_(std::move(var_to_lit))
{
}

Lit GateEncoder::make_and(Lit a, Lit b)
{
    if (a == aiger::lit_false || b == aiger::lit_false || a == aiger::negate(b))
        return aiger::lit_false;
    if (a == aiger::lit_true || a == b)
        return b;
    if (b == aiger::lit_true)
        return a;
    const Lit lhs = aiger::make_lit(++sink_->max_var);
    sink_->ands.push_back({lhs, std::max(a, b), std::min(a, b)});
    return lhs;
}

Lit GateEncoder::encode(const dd::Bdd& f)
{
    if (f.manager() != mgr_)
        throw Error(Errc::ManagerMismatch, "BDD belongs to a different manager");
    return encode_node(f);
}

Lit GateEncoder::encode_node(const dd::Bdd& f)
{
    if (f.is_false())
        return aiger::lit_false;
    if (f.is_true())
        return aiger::lit_true;
    if (const auto it = memo_.find(f.id()); it != memo_.end())
        return it->second;

    const auto v = mgr_->top_var(f);
    const auto mapped = var_to_lit_.find(v);
    if (mapped == var_to_lit_.end())
        throw Error(Errc::UnmappedVariable, "variable '" + mgr_->var_name(v) + "' has no circuit literal");
    const Lit sel = mapped->second;
    const Lit hi = encode_node(mgr_->high(f));
    const Lit lo = encode_node(mgr_->low(f));

    Lit r;
    if (hi == aiger::lit_true && lo == aiger::lit_false)
        r = sel;
    else if (hi == aiger::lit_false && lo == aiger::lit_true)
        r = aiger::negate(sel);
    else if (hi == aiger::lit_true)
        r = aiger::negate(make_and(aiger::negate(sel), aiger::negate(lo)));
    else if (hi == aiger::lit_false)
        r = make_and(aiger::negate(sel), lo);
    else if (lo == aiger::lit_false)
        r = make_and(sel, hi);
    else if (lo == aiger::lit_true)
        r = aiger::negate(make_and(sel, aiger::negate(hi)));
    else {
        const Lit t = make_and(sel, hi);
        const Lit e = make_and(aiger::negate(sel), lo);
        r = aiger::negate(make_and(aiger::negate(t), aiger::negate(e)));
    }
    memo_.emplace(f.id(), r);
    return r;
}

Lit bdd_to_gates(dd::Manager& m, const dd::Bdd& f, const std::unordered_map<dd::VarId, Lit>& var_to_lit,
                 aiger::Aig& sink)
{
    GateEncoder enc(m, sink, var_to_lit);
    return enc.encode(f);
}

namespace {

// Turns the inputs at `driven` into gate outputs computing `functions`.
// A fresh, un-negated driver gate takes over the input's variable index
// directly; otherwise the input is defined as a buffer AND(d, d).
aiger::Aig redefine_inputs(const aiger::Aig& spec, const std::vector<std::size_t>& driven,
                           const std::vector<dd::Bdd>& functions, dd::Manager& m,
                           std::unordered_map<dd::VarId, Lit> mapping)
{
    aiger::Aig out = spec;
    const auto spec_gates = spec.ands.size();
    const unsigned first_fresh = spec.max_var + 1;

    std::vector<Lit> drivers;
    {
        GateEncoder enc(m, out, std::move(mapping));
        for (const auto& f : functions)
            drivers.push_back(enc.encode(f));
    }

    std::map<unsigned, unsigned> claimed; // fresh var -> input var
    std::vector<bool> needs_buffer(driven.size(), true);
    for (std::size_t i = 0; i < driven.size(); ++i) {
        const Lit d = drivers[i];
        if (!aiger::is_negated(d) && aiger::var_of(d) >= first_fresh && !claimed.contains(aiger::var_of(d))) {
            claimed.emplace(aiger::var_of(d), aiger::var_of(spec.inputs[driven[i]]));
            needs_buffer[i] = false;
        }
    }

    std::vector<unsigned> renamed(out.max_var + 1 - first_fresh);
    unsigned next = first_fresh;
    for (unsigned v = first_fresh; v <= out.max_var; ++v) {
        const auto it = claimed.find(v);
        renamed[v - first_fresh] = it != claimed.end() ? it->second : next++;
    }
    const auto map = [&](Lit l) {
        const auto v = aiger::var_of(l);
        return v < first_fresh ? l : aiger::make_lit(renamed[v - first_fresh], aiger::is_negated(l));
    };
    for (std::size_t g = spec_gates; g < out.ands.size(); ++g) {
        auto& gate = out.ands[g];
        gate.lhs = map(gate.lhs);
        const Lit r0 = map(gate.rhs0);
        const Lit r1 = map(gate.rhs1);
        gate.rhs0 = std::max(r0, r1);
        gate.rhs1 = std::min(r0, r1);
    }
    for (std::size_t i = 0; i < driven.size(); ++i) {
        if (needs_buffer[i]) {
            const Lit d = map(drivers[i]);
            out.ands.push_back({spec.inputs[driven[i]], d, d});
        }
    }
    out.max_var = next - 1;

    std::vector<bool> removed(spec.inputs.size(), false);
    for (auto pos : driven)
        removed[pos] = true;
    out.inputs.clear();
    std::map<std::pair<aiger::SymbolKind, std::size_t>, std::string> symbols;
    for (const auto& [key, name] : spec.symbols)
        if (key.first != aiger::SymbolKind::Input)
            symbols.emplace(key, name);
    for (std::size_t i = 0; i < spec.inputs.size(); ++i) {
        if (removed[i])
            continue;
        if (const auto* name = spec.symbol(aiger::SymbolKind::Input, i))
            symbols.emplace(std::pair{aiger::SymbolKind::Input, out.inputs.size()}, *name);
        out.inputs.push_back(spec.inputs[i]);
    }
    out.symbols = std::move(symbols);
    return out;
}

std::unordered_map<dd::VarId, Lit> state_mapping(const aiger::Aig& spec, const game::Game& g)
{
    std::unordered_map<dd::VarId, Lit> mapping;
    for (std::size_t i = 0; i < g.state_vars.size(); ++i)
        mapping.emplace(g.state_vars[i], spec.latches.at(i).lit);
    return mapping;
}

} // namespace

Solution encode_solution(const aiger::Aig& spec, const aiger::InputPartition& p, const game::Game& g,
                         const game::Strategy& strategy)
{
    if (strategy.functions.size() != p.controllable.size() ||
        strategy.functions.size() != g.controllable_vars.size())
        throw Error(Errc::StrategyMismatch, "strategy covers " + std::to_string(strategy.functions.size()) +
                                                " inputs, specification has " +
                                                std::to_string(p.controllable.size()) + " controllable");
    if (g.uncontrollable_vars.size() != p.uncontrollable.size())
        throw Error(Errc::StrategyMismatch, "game and partition disagree on uncontrollable inputs");

    auto mapping = state_mapping(spec, g);
    for (std::size_t j = 0; j < p.uncontrollable.size(); ++j)
        mapping.emplace(g.uncontrollable_vars[j], spec.inputs.at(p.uncontrollable[j]));

    Solution s;
    s.circuit = redefine_inputs(spec, p.controllable, strategy.functions, *g.manager, std::move(mapping));
    s.controller_and_count = s.circuit.ands.size() - spec.ands.size();
    s.controller_latch_count = s.circuit.latches.size() - spec.latches.size();
    return s;
}

aiger::Aig encode_counter_strategy(const aiger::Aig& spec, const aiger::InputPartition& p, const game::Game& g,
                                   const game::CounterStrategy& strategy)
{
    if (strategy.functions.size() != p.uncontrollable.size())
        throw Error(Errc::StrategyMismatch, "counter-strategy does not cover the uncontrollable inputs");
    return redefine_inputs(spec, p.uncontrollable, strategy.functions, *g.manager, state_mapping(spec, g));
}

WitnessCircuit encode_witness(const game::Game& g, const dd::Bdd& winning_region)
{
    WitnessCircuit w;
    auto& a = w.circuit;
    std::unordered_map<dd::VarId, Lit> mapping;
    for (std::size_t i = 0; i < g.state_vars.size(); ++i) {
        const Lit lit = aiger::make_lit(static_cast<unsigned>(i + 1));
        a.inputs.push_back(lit);
        mapping.emplace(g.state_vars[i], lit);
    }
    a.max_var = static_cast<unsigned>(g.state_vars.size());
    GateEncoder enc(*g.manager, a, std::move(mapping));
    a.outputs.push_back(enc.encode(winning_region));
    return w;
}

std::filesystem::path witness_path(const std::filesystem::path& solution)
{
    auto p = solution;
    p += ".winregion.aag";
    return p;
}

} // namespace arena::synth
