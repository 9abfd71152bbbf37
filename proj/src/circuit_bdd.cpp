#include "arena/circuit_bdd.hpp"

#include "arena/error.hpp"

namespace arena {

CircuitBdds::CircuitBdds(const aiger::Aig& a, dd::Manager& m, const LeafFn& leaf)
    : mgr_(&m), vars_(std::size_t{a.max_var} + 1)
{
    vars_[0] = m.bdd_false();
    for (auto i : a.inputs)
        vars_[aiger::var_of(i)] = leaf(i);
    for (const auto& l : a.latches)
        vars_[aiger::var_of(l.lit)] = leaf(l.lit);
    for (auto g : aiger::topological_order(a)) {
        const auto& gate = a.ands[g];
        vars_[aiger::var_of(gate.lhs)] = lit(gate.rhs0) & lit(gate.rhs1);
    }
}

dd::Bdd CircuitBdds::lit(aiger::Lit l) const
{
    const auto v = aiger::var_of(l);
    if (!defines(v))
        throw Error(Errc::UndefinedLiteral, "literal " + std::to_string(l) + " has no BDD");
    return aiger::is_negated(l) ? ~vars_[v] : vars_[v];
}

} // namespace arena
