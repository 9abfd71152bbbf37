#include "arena/error.hpp"
#include "arena/explicit_game.hpp"
#include "arena/sim.hpp"

#include "doctest.h"
#include "oracle.hpp"

#include <omp.h>
#include <random>

using namespace arena;

namespace {

sim::Batch random_batch(std::mt19937_64& rng, const aiger::Aig& a, std::size_t words)
{
    sim::Batch b;
    b.words = words;
    b.inputs.resize(words * a.inputs.size());
    b.latches.resize(words * a.latches.size());
    for (auto& w : b.inputs)
        w = rng();
    for (auto& w : b.latches)
        w = rng();
    return b;
}

} // namespace

TEST_CASE("bit-parallel simulation matches recursive evaluation")
{
    std::mt19937_64 rng(51);
    for (int k = 0; k < 50; ++k) {
        const auto a = oracle::random_circuit(rng, 1 + rng() % 6, rng() % 6, rng() % 40, 1 + rng() % 3);
        const sim::Simulator s(a);
        const auto batch = random_batch(rng, a, 3);
        const auto r = sim::simulate(s, batch, sim::Exec::Serial);
        REQUIRE(r.outputs.size() == 3 * a.outputs.size());
        const oracle::Evaluator ev(a);
        for (std::size_t w = 0; w < 3; ++w) {
            for (unsigned bit = 0; bit < 64; bit += 7) {
                std::vector<bool> in(a.inputs.size()), st(a.latches.size());
                for (std::size_t i = 0; i < in.size(); ++i)
                    in[i] = (batch.inputs[w * in.size() + i] >> bit) & 1;
                for (std::size_t i = 0; i < st.size(); ++i)
                    st[i] = (batch.latches[w * st.size() + i] >> bit) & 1;
                const auto vals = ev.run(in, st);
                for (std::size_t o = 0; o < a.outputs.size(); ++o)
                    CHECK(((r.outputs[w * a.outputs.size() + o] >> bit) & 1) ==
                          oracle::Evaluator::lit(vals, a.outputs[o]));
                for (std::size_t l = 0; l < st.size(); ++l)
                    CHECK(((r.next[w * st.size() + l] >> bit) & 1) == oracle::Evaluator::lit(vals, a.latches[l].next));
                const auto step = s.step(st, in);
                for (std::size_t o = 0; o < a.outputs.size(); ++o)
                    CHECK(step.outputs[o] == oracle::Evaluator::lit(vals, a.outputs[o]));
            }
        }
    }
}

TEST_CASE("parallel simulation equals the serial reference")
{
    omp_set_num_threads(4);
    std::mt19937_64 rng(52);
    for (int k = 0; k < 20; ++k) {
        const auto a = oracle::random_circuit(rng, 8, 8, 200, 2);
        const sim::Simulator s(a);
        const auto batch = random_batch(rng, a, 257);
        CHECK(sim::simulate(s, batch, sim::Exec::Serial) == sim::simulate(s, batch, sim::Exec::Parallel));
    }
}

TEST_CASE("parallel tabulation and solving equal the serial reference")
{
    omp_set_num_threads(4);
    std::mt19937_64 rng(53);
    for (int k = 0; k < 60; ++k) {
        const oracle::Shape shape{1 + static_cast<unsigned>(rng() % 8), static_cast<unsigned>(rng() % 4),
                                  static_cast<unsigned>(rng() % 4), 10 + static_cast<unsigned>(rng() % 30)};
        const auto spec = oracle::random_spec(rng, shape);
        const auto p = aiger::classify_inputs(spec);
        const auto ts = explicit_game::tabulate(spec, p, sim::Exec::Serial);
        const auto tp = explicit_game::tabulate(spec, p, sim::Exec::Parallel);
        CHECK(ts == tp);
        CHECK(explicit_game::solve(ts, sim::Exec::Serial) == explicit_game::solve(ts, sim::Exec::Parallel));
    }
}

TEST_CASE("tabulation matches enumeration")
{
    std::mt19937_64 rng(54);
    for (int k = 0; k < 30; ++k) {
        const auto spec = oracle::random_spec(rng, {3, 2, 2, 15});
        const auto t = explicit_game::tabulate(spec, aiger::classify_inputs(spec), sim::Exec::Serial);
        const auto g = oracle::explore(spec);
        for (std::uint32_t s = 0; s < 8; ++s)
            for (std::uint32_t u = 0; u < 4; ++u)
                for (std::uint32_t c = 0; c < 4; ++c) {
                    CHECK(static_cast<bool>(t.err[t.index(s, u, c)]) == g.err[s][u][c]);
                    CHECK(t.next[t.index(s, u, c)] == g.next[s][u][c]);
                }
    }
}

TEST_CASE("tabulation refuses oversized games")
{
    std::mt19937_64 rng(55);
    const auto spec = oracle::random_spec(rng, {20, 3, 3, 10});
    try {
        (void)explicit_game::tabulate(spec, aiger::classify_inputs(spec), sim::Exec::Serial);
        FAIL("expected TooLarge");
    } catch (const Error& e) {
        CHECK(e.code() == Errc::TooLarge);
    }
}
