#include "arena/game.hpp"

#include "arena/circuit_bdd.hpp"
#include "arena/error.hpp"

#include <string>
#include <unordered_map>

namespace arena::game {

using aiger::Lit;
using aiger::SymbolKind;

namespace {

std::string name_or(const aiger::Aig& a, SymbolKind kind, std::size_t pos, const std::string& fallback)
{
    const auto* s = a.symbol(kind, pos);
    return s ? *s : fallback;
}

std::vector<std::pair<dd::VarId, dd::Bdd>> next_substitution(const Game& g)
{
    std::vector<std::pair<dd::VarId, dd::Bdd>> sub;
    sub.reserve(g.state_vars.size());
    for (std::size_t i = 0; i < g.state_vars.size(); ++i)
        sub.emplace_back(g.state_vars[i], g.next_fns[i]);
    return sub;
}

// Fixes vars one at a time in order: var_i := 1 exactly where 0 leaves the
// relation unsatisfiable for every completion of the later vars.
std::vector<dd::Bdd> resolve_prefer_zero(dd::Manager& m, dd::Bdd relation, const std::vector<dd::VarId>& vars)
{
    std::vector<dd::Bdd> out;
    out.reserve(vars.size());
    for (std::size_t i = 0; i < vars.size(); ++i) {
        const std::vector<dd::VarId> later(vars.begin() + static_cast<std::ptrdiff_t>(i) + 1, vars.end());
        const auto r = m.exists(later, relation);
        const auto can_be_one = m.cofactor(r, vars[i], true);
        const auto can_be_zero = m.cofactor(r, vars[i], false);
        const auto f = can_be_one & ~can_be_zero;
        relation = m.ite(f, m.cofactor(relation, vars[i], true), m.cofactor(relation, vars[i], false));
        out.push_back(f);
    }
    return out;
}

} // namespace

Game build_game(const aiger::Aig& a, const aiger::InputPartition& p, dd::Manager& m)
{
    aiger::validate_spec(a);
    Game g;
    g.manager = &m;

    std::unordered_map<Lit, dd::Bdd> leaves;
    for (std::size_t i = 0; i < a.latches.size(); ++i) {
        const auto name = name_or(a, SymbolKind::Latch, i, "l" + std::to_string(i));
        g.state_vars.push_back(m.new_var(name));
        g.next_vars.push_back(m.new_var(name + "'"));
        leaves.emplace(a.latches[i].lit, m.var(g.state_vars.back()));
    }
    for (auto pos : p.uncontrollable) {
        g.uncontrollable_vars.push_back(m.new_var(name_or(a, SymbolKind::Input, pos, "i" + std::to_string(pos))));
        leaves.emplace(a.inputs.at(pos), m.var(g.uncontrollable_vars.back()));
    }
    for (auto pos : p.controllable) {
        g.controllable_vars.push_back(m.new_var(name_or(a, SymbolKind::Input, pos, "i" + std::to_string(pos))));
        leaves.emplace(a.inputs.at(pos), m.var(g.controllable_vars.back()));
    }

    const CircuitBdds bdds(a, m, [&](Lit leaf) {
        const auto it = leaves.find(leaf);
        if (it == leaves.end())
            throw Error(Errc::UnmappedVariable, "input " + std::to_string(leaf) + " missing from the partition");
        return it->second;
    });

    g.err_fn = bdds.lit(a.outputs[0]);
    for (const auto& l : a.latches)
        g.next_fns.push_back(bdds.lit(l.next));
    g.init = m.bdd_true();
    for (auto v : g.state_vars)
        g.init &= ~m.var(v);
    return g;
}

dd::Bdd upre(const Game& g, const dd::Bdd& target)
{
    auto& m = *g.manager;
    const auto sub = next_substitution(g);
    const auto lose = g.err_fn | m.compose(target, sub);
    return m.exists(g.uncontrollable_vars, m.forall(g.controllable_vars, lose));
}

SolveResult solve(const Game& g, const SolveOptions& options)
{
    auto& m = *g.manager;
    SolveResult r;
    auto losing = m.bdd_false();
    r.losing_rings.push_back(losing);
    while (true) {
        const auto next = losing | upre(g, losing);
        ++r.iterations;
        r.losing_rings.push_back(next);
        if (options.log)
            *options.log << "iteration " << r.iterations << ": ring nodes " << m.node_count(next) << '\n';
        if (next == losing)
            break;
        losing = next;
    }
    r.winning_region = ~losing;
    r.realizable = (g.init & losing).is_false();
    return r;
}

dd::Bdd safe_moves(const Game& g, const dd::Bdd& winning_region)
{
    return ~g.err_fn & g.manager->compose(winning_region, next_substitution(g));
}

Strategy extract_strategy(const Game& g, const SolveResult& r)
{
    if (!r.realizable)
        throw Error(Errc::NotRealizable, "cannot extract a controller for an unrealizable game");
    return {resolve_prefer_zero(*g.manager, safe_moves(g, r.winning_region), g.controllable_vars)};
}

CounterStrategy extract_counter_strategy(const Game& g, const SolveResult& r)
{
    if (r.realizable)
        throw Error(Errc::IsRealizable, "the system wins from the initial state");
    auto& m = *g.manager;
    const auto sub = next_substitution(g);
    auto good = m.bdd_false();
    for (std::size_t k = 1; k < r.losing_rings.size(); ++k) {
        const auto fresh = r.losing_rings[k] & ~r.losing_rings[k - 1];
        if (fresh.is_false())
            continue;
        const auto forcing = m.forall(g.controllable_vars, g.err_fn | m.compose(r.losing_rings[k - 1], sub));
        good |= fresh & forcing;
    }
    return {resolve_prefer_zero(m, good, g.uncontrollable_vars)};
}

bool strategy_is_sound(const Game& g, const SolveResult& r, const Strategy& s)
{
    if (s.functions.size() != g.controllable_vars.size())
        return false;
    auto& m = *g.manager;
    std::vector<std::pair<dd::VarId, dd::Bdd>> sub;
    for (std::size_t i = 0; i < s.functions.size(); ++i)
        sub.emplace_back(g.controllable_vars[i], s.functions[i]);
    const auto moves = m.compose(safe_moves(g, r.winning_region), sub);
    return (r.winning_region & ~moves).is_false();
}

bool counter_strategy_is_sound(const Game& g, const SolveResult& r, const CounterStrategy& s)
{
    if (s.functions.size() != g.uncontrollable_vars.size())
        return false;
    auto& m = *g.manager;
    const auto next_sub = next_substitution(g);
    std::vector<std::pair<dd::VarId, dd::Bdd>> sub;
    for (std::size_t i = 0; i < s.functions.size(); ++i)
        sub.emplace_back(g.uncontrollable_vars[i], s.functions[i]);
    for (std::size_t k = 1; k < r.losing_rings.size(); ++k) {
        const auto fresh = r.losing_rings[k] & ~r.losing_rings[k - 1];
        const auto forcing = m.forall(g.controllable_vars, g.err_fn | m.compose(r.losing_rings[k - 1], next_sub));
        if (!(fresh & ~m.compose(forcing, sub)).is_false())
            return false;
    }
    return true;
}

} // namespace arena::game
