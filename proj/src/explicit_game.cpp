#include "arena/explicit_game.hpp"

#include "arena/error.hpp"

#include <array>

namespace arena::explicit_game {

namespace {

// Bit k of pattern[p] is bit p of k, for the low six bits of a combination index.
constexpr std::array<std::uint64_t, 6> pattern = {
    0xaaaaaaaaaaaaaaaaULL, 0xccccccccccccccccULL, 0xf0f0f0f0f0f0f0f0ULL,
    0xff00ff00ff00ff00ULL, 0xffff0000ffff0000ULL, 0xffffffff00000000ULL,
};

std::uint64_t column(unsigned bit, std::size_t word)
{
    if (bit < 6)
        return pattern[bit];
    return ((word >> (bit - 6)) & 1u) ? ~std::uint64_t{0} : 0;
}

struct Layout
{
    std::vector<unsigned> input_bit; // per circuit input, its bit in the combination index
    unsigned latches;
    std::size_t combos;
};

void tabulate_word(const sim::Simulator& sim, const Layout& layout, Table& t, std::size_t w,
                   std::vector<std::uint64_t>& vars, std::vector<std::uint64_t>& in,
                   std::vector<std::uint64_t>& st)
{
    const auto& a = sim.circuit();
    for (std::size_t i = 0; i < in.size(); ++i)
        in[i] = column(layout.input_bit[i], w);
    for (unsigned i = 0; i < layout.latches; ++i)
        st[i] = column(i, w);
    sim.load(vars, in, st);
    sim.evaluate(vars);

    const auto err = sim::Simulator::value(vars, a.outputs[0]);
    std::vector<std::uint64_t> next(layout.latches);
    for (unsigned i = 0; i < layout.latches; ++i)
        next[i] = sim::Simulator::value(vars, a.latches[i].next);

    const std::size_t base = w * 64;
    for (unsigned b = 0; b < 64 && base + b < layout.combos; ++b) {
        t.err[base + b] = static_cast<std::uint8_t>((err >> b) & 1u);
        std::uint32_t s = 0;
        for (unsigned i = 0; i < layout.latches; ++i)
            s |= static_cast<std::uint32_t>((next[i] >> b) & 1u) << i;
        t.next[base + b] = s;
    }
}

} // namespace

Table tabulate(const aiger::Aig& a, const aiger::InputPartition& p, sim::Exec exec)
{
    aiger::validate_spec(a);
    const auto bits = a.latches.size() + a.inputs.size();
    if (bits > max_bits)
        throw Error(Errc::TooLarge, std::to_string(bits) + " state and input bits");

    Table t;
    t.latches = static_cast<unsigned>(a.latches.size());
    t.uncontrollable = static_cast<unsigned>(p.uncontrollable.size());
    t.controllable = static_cast<unsigned>(p.controllable.size());

    Layout layout;
    layout.latches = t.latches;
    layout.combos = std::size_t{1} << bits;
    layout.input_bit.assign(a.inputs.size(), 0);
    for (std::size_t j = 0; j < p.uncontrollable.size(); ++j)
        layout.input_bit[p.uncontrollable[j]] = t.latches + static_cast<unsigned>(j);
    for (std::size_t j = 0; j < p.controllable.size(); ++j)
        layout.input_bit[p.controllable[j]] = t.latches + t.uncontrollable + static_cast<unsigned>(j);

    t.err.assign(layout.combos, 0);
    t.next.assign(layout.combos, 0);
    const sim::Simulator sim(a);
    const auto words = static_cast<std::ptrdiff_t>((layout.combos + 63) / 64);

    if (exec == sim::Exec::Serial) {
        std::vector<std::uint64_t> vars(sim.word_count()), in(a.inputs.size()), st(a.latches.size());
        for (std::ptrdiff_t w = 0; w < words; ++w)
            tabulate_word(sim, layout, t, static_cast<std::size_t>(w), vars, in, st);
        return t;
    }

#pragma omp parallel
    {
        std::vector<std::uint64_t> vars(sim.word_count()), in(a.inputs.size()), st(a.latches.size());
#pragma omp for schedule(static)
        for (std::ptrdiff_t w = 0; w < words; ++w)
            tabulate_word(sim, layout, t, static_cast<std::size_t>(w), vars, in, st);
    }
    return t;
}

namespace {

// True if some u makes every c either raise err or land on an already ranked state.
bool environment_forces(const Table& t, const std::vector<std::uint32_t>& rank, std::uint32_t s)
{
    const std::uint32_t us = 1u << t.uncontrollable;
    const std::uint32_t cs = 1u << t.controllable;
    for (std::uint32_t u = 0; u < us; ++u) {
        bool all = true;
        for (std::uint32_t c = 0; c < cs && all; ++c) {
            const auto k = t.index(s, u, c);
            all = t.err[k] || rank[t.next[k]] != never;
        }
        if (all)
            return true;
    }
    return false;
}

} // namespace

Solution solve(const Table& t, sim::Exec exec)
{
    const auto states = static_cast<std::ptrdiff_t>(t.states());
    Solution sol;
    sol.rank.assign(t.states(), never);
    auto next_rank = sol.rank;

    for (std::uint32_t k = 1;; ++k) {
        ++sol.iterations;
        std::size_t added = 0;
        if (exec == sim::Exec::Serial) {
            for (std::ptrdiff_t s = 0; s < states; ++s) {
                if (sol.rank[s] == never && environment_forces(t, sol.rank, static_cast<std::uint32_t>(s))) {
                    next_rank[s] = k;
                    ++added;
                }
            }
        } else {
#pragma omp parallel for schedule(dynamic, 256) reduction(+ : added)
            for (std::ptrdiff_t s = 0; s < states; ++s) {
                if (sol.rank[s] == never && environment_forces(t, sol.rank, static_cast<std::uint32_t>(s))) {
                    next_rank[s] = k;
                    ++added;
                }
            }
        }
        if (added == 0)
            break;
        sol.rank = next_rank;
    }
    sol.realizable = sol.rank[0] == never;
    return sol;
}

} // namespace arena::explicit_game
