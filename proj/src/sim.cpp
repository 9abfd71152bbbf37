#include "arena/sim.hpp"

#include <cstddef>

namespace arena::sim {

using aiger::Lit;

Simulator::Simulator(const aiger::Aig& a) : aig_(a), order_(aiger::topological_order(a)) {}

void Simulator::evaluate(std::span<std::uint64_t> vars) const
{
    for (auto g : order_) {
        const auto& gate = aig_.ands[g];
        vars[aiger::var_of(gate.lhs)] = value(vars, gate.rhs0) & value(vars, gate.rhs1);
    }
}

void Simulator::load(std::span<std::uint64_t> vars, std::span<const std::uint64_t> inputs,
                     std::span<const std::uint64_t> latches) const
{
    vars[0] = 0;
    for (std::size_t i = 0; i < aig_.inputs.size(); ++i)
        vars[aiger::var_of(aig_.inputs[i])] = inputs[i];
    for (std::size_t i = 0; i < aig_.latches.size(); ++i)
        vars[aiger::var_of(aig_.latches[i].lit)] = latches[i];
}

Simulator::Step Simulator::step(const std::vector<bool>& latches, const std::vector<bool>& inputs) const
{
    std::vector<std::uint64_t> in(aig_.inputs.size()), st(aig_.latches.size());
    for (std::size_t i = 0; i < in.size(); ++i)
        in[i] = inputs.at(i) ? 1 : 0;
    for (std::size_t i = 0; i < st.size(); ++i)
        st[i] = latches.at(i) ? 1 : 0;
    std::vector<std::uint64_t> vars(word_count(), 0);
    load(vars, in, st);
    evaluate(vars);

    Step out;
    for (auto o : aig_.outputs)
        out.outputs.push_back(value(vars, o) & 1);
    for (const auto& l : aig_.latches)
        out.next.push_back(value(vars, l.next) & 1);
    return out;
}

namespace {

void simulate_row(const Simulator& sim, const Batch& batch, BatchResult& result, std::size_t w,
                  std::vector<std::uint64_t>& vars)
{
    const auto& a = sim.circuit();
    const auto ni = a.inputs.size();
    const auto nl = a.latches.size();
    const auto no = a.outputs.size();
    sim.load(vars, std::span(batch.inputs).subspan(w * ni, ni), std::span(batch.latches).subspan(w * nl, nl));
    sim.evaluate(vars);
    for (std::size_t o = 0; o < no; ++o)
        result.outputs[w * no + o] = Simulator::value(vars, a.outputs[o]);
    for (std::size_t l = 0; l < nl; ++l)
        result.next[w * nl + l] = Simulator::value(vars, a.latches[l].next);
}

} // namespace

BatchResult simulate(const Simulator& sim, const Batch& batch, Exec exec)
{
    const auto& a = sim.circuit();
    BatchResult result;
    result.outputs.assign(batch.words * a.outputs.size(), 0);
    result.next.assign(batch.words * a.latches.size(), 0);
    const auto words = static_cast<std::ptrdiff_t>(batch.words);

    if (exec == Exec::Serial) {
        std::vector<std::uint64_t> vars(sim.word_count(), 0);
        for (std::ptrdiff_t w = 0; w < words; ++w)
            simulate_row(sim, batch, result, static_cast<std::size_t>(w), vars);
        return result;
    }

#pragma omp parallel
    {
        std::vector<std::uint64_t> vars(sim.word_count(), 0);
#pragma omp for schedule(static)
        for (std::ptrdiff_t w = 0; w < words; ++w)
            simulate_row(sim, batch, result, static_cast<std::size_t>(w), vars);
    }
    return result;
}

} // namespace arena::sim
