#pragma once

#include "arena/aiger.hpp"
#include "arena/dd.hpp"

#include <functional>
#include <vector>

namespace arena {

// BDD of every variable of a circuit. Inputs and latches take whatever
// function leaf() returns for their (positive) literal; AND gates are built
// in one topological pass.
class CircuitBdds
{
public:
    using LeafFn = std::function<dd::Bdd(aiger::Lit leaf)>;

    CircuitBdds(const aiger::Aig& a, dd::Manager& m, const LeafFn& leaf);

    dd::Bdd lit(aiger::Lit l) const;
    bool defines(unsigned var) const { return var < vars_.size() && !vars_[var].is_null(); }

private:
    dd::Manager* mgr_;
    std::vector<dd::Bdd> vars_;
};

} // namespace arena
