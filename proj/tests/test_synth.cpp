#include "arena/bench.hpp"
#include "arena/error.hpp"
#include "arena/game.hpp"
#include "arena/synth.hpp"
#include "arena/verify.hpp"

#include "doctest.h"
#include "oracle.hpp"

#include <random>

using namespace arena;
using aiger::Builder;
using aiger::Lit;

namespace {

struct Pipeline
{
    aiger::Aig spec;
    aiger::InputPartition p;
    dd::Manager m;
    game::Game g;
    game::SolveResult r;

    explicit Pipeline(aiger::Aig a) : spec(std::move(a)), p(aiger::classify_inputs(spec))
    {
        g = game::build_game(spec, p, m);
        r = game::solve(g);
    }
};

aiger::Aig one_latch_system()
{
    Builder b;
    b.add_input("u");
    const Lit c = b.add_input("controllable_c");
    const Lit x = b.add_latch("x");
    b.set_next(x, c);
    b.add_output(x, "err");
    return std::move(b).build();
}

// A circuit with `n` inputs mapped to BDD variables 0..n-1.
struct Sink
{
    aiger::Aig a;
    std::unordered_map<dd::VarId, Lit> map;

    explicit Sink(unsigned n)
    {
        for (unsigned i = 0; i < n; ++i) {
            a.inputs.push_back(aiger::make_lit(i + 1));
            map.emplace(i, a.inputs.back());
        }
        a.max_var = n;
    }
};

dd::Bdd random_function(dd::Manager& m, std::mt19937_64& rng, unsigned n)
{
    auto f = m.bdd_false();
    for (unsigned s = 0; s < (1u << n); ++s) {
        if (rng() % 2)
            continue;
        auto cube = m.bdd_true();
        for (unsigned i = 0; i < n; ++i)
            cube &= ((s >> i) & 1) ? m.var(i) : ~m.var(i);
        f |= cube;
    }
    return f;
}

} // namespace

TEST_CASE("bdd_to_gates: constants and projections")
{
    dd::Manager m;
    m.new_var("x");
    Sink s(1);
    CHECK(synth::bdd_to_gates(m, m.bdd_true(), s.map, s.a) == aiger::lit_true);
    CHECK(synth::bdd_to_gates(m, m.var(0), s.map, s.a) == s.a.inputs[0]);
    CHECK(synth::bdd_to_gates(m, ~m.var(0), s.map, s.a) == aiger::negate(s.a.inputs[0]));
    CHECK(s.a.ands.empty());
}

TEST_CASE("bdd_to_gates: truth tables of random functions")
{
    constexpr unsigned n = 5;
    dd::Manager m;
    for (unsigned i = 0; i < n; ++i)
        m.new_var("x" + std::to_string(i));
    std::mt19937_64 rng(31);
    for (int k = 0; k < 50; ++k) {
        const auto f = random_function(m, rng, n);
        Sink s(n);
        const Lit out = synth::bdd_to_gates(m, f, s.map, s.a);
        CHECK(s.a.ands.size() <= 3 * m.node_count(f));
        const oracle::Evaluator ev(s.a);
        for (unsigned v = 0; v < (1u << n); ++v) {
            const auto vals = ev.run(oracle::bits(v, n), {});
            CHECK(oracle::Evaluator::lit(vals, out) == m.eval(f, oracle::bits(v, n)));
        }
    }
}

TEST_CASE("bdd_to_gates: errors")
{
    dd::Manager m, other;
    m.new_var("x");
    m.new_var("y");
    other.new_var("z");
    Sink s(1);
    CHECK_THROWS_WITH_AS(synth::bdd_to_gates(m, m.var(1), s.map, s.a), doctest::Contains("UnmappedVariable"), Error);
    CHECK_THROWS_WITH_AS(synth::bdd_to_gates(m, other.var(0), s.map, s.a), doctest::Contains("ManagerMismatch"),
                         Error);
}

TEST_CASE("shared subgraphs are emitted once")
{
    dd::Manager m;
    for (int i = 0; i < 3; ++i)
        m.new_var("x" + std::to_string(i));
    Sink s(3);
    synth::GateEncoder enc(m, s.a, s.map);
    const auto shared = m.var(1) ^ m.var(2);
    enc.encode(m.var(0) & shared);
    const auto before = s.a.ands.size();
    enc.encode(~m.var(0) & shared);
    CHECK(s.a.ands.size() - before <= 1);
}

TEST_CASE("encode_solution: always-zero controller")
{
    Pipeline x(one_latch_system());
    const auto st = game::extract_strategy(x.g, x.r);
    const auto sol = synth::encode_solution(x.spec, x.p, x.g, st);
    // c is driven by constant 0 through a buffer gate on its own variable
    REQUIRE(sol.circuit.ands.size() == 1);
    CHECK(sol.circuit.ands[0] == aiger::AndGate{x.spec.inputs[1], 0, 0});
    CHECK(sol.controller_and_count == 1);
    CHECK(sol.controller_latch_count == 0);
    CHECK(sol.circuit.inputs == std::vector<Lit>{x.spec.inputs[0]});
    CHECK(verify::syntactic_check(x.spec, sol.circuit).status == verify::Status::Verified);
    CHECK(verify::model_check(sol.circuit).status == verify::Status::Verified);
}

TEST_CASE("encode_solution: nothing to control")
{
    Builder b;
    b.add_input("u");
    const Lit l = b.add_latch("l");
    b.set_next(l, l);
    b.add_output(aiger::lit_false, "err");
    Pipeline x(std::move(b).build());
    const auto sol = synth::encode_solution(x.spec, x.p, x.g, game::extract_strategy(x.g, x.r));
    CHECK(sol.circuit == x.spec);
    CHECK(sol.controller_and_count == 0);
}

TEST_CASE("encode_solution: strategy must cover the controllable inputs")
{
    Pipeline x(one_latch_system());
    game::Strategy empty;
    try {
        (void)synth::encode_solution(x.spec, x.p, x.g, empty);
        FAIL("expected StrategyMismatch");
    } catch (const Error& e) {
        CHECK(e.code() == Errc::StrategyMismatch);
    }
}

TEST_CASE("solutions preserve the specification and simulate the strategy")
{
    std::mt19937_64 rng(32);
    int done = 0;
    for (int k = 0; k < 150 && done < 40; ++k) {
        const oracle::Shape shape{1 + static_cast<unsigned>(rng() % 5), static_cast<unsigned>(rng() % 3),
                                  1 + static_cast<unsigned>(rng() % 3), 6 + static_cast<unsigned>(rng() % 20)};
        Pipeline x(oracle::random_spec(rng, shape));
        if (!x.r.realizable)
            continue;
        ++done;
        const auto st = game::extract_strategy(x.g, x.r);
        const auto sol = synth::encode_solution(x.spec, x.p, x.g, st);
        const auto& c = sol.circuit;

        // spec preservation
        CHECK(c.outputs == x.spec.outputs);
        CHECK(c.latches == x.spec.latches);
        REQUIRE(c.ands.size() >= x.spec.ands.size());
        CHECK(std::equal(x.spec.ands.begin(), x.spec.ands.end(), c.ands.begin()));
        CHECK(sol.controller_and_count == c.ands.size() - x.spec.ands.size());
        CHECK(c.comments == x.spec.comments);
        REQUIRE(c.inputs.size() == x.p.uncontrollable.size());
        for (std::size_t j = 0; j < x.p.uncontrollable.size(); ++j)
            CHECK(c.inputs[j] == x.spec.inputs[x.p.uncontrollable[j]]);
        CHECK(verify::syntactic_check(x.spec, c).status == verify::Status::Verified);
        CHECK(aiger::parse(aiger::emit_ascii(c)) == c);

        // gate-level agreement with the BDD strategy
        const oracle::Evaluator ev(c);
        for (int t = 0; t < 1000 / 40; ++t) {
            const auto st_bits = oracle::bits(rng(), c.latches.size());
            const auto u_bits = oracle::bits(rng(), c.inputs.size());
            const auto vals = ev.run(u_bits, st_bits);
            std::vector<bool> a(x.m.var_count(), false);
            for (std::size_t i = 0; i < st_bits.size(); ++i)
                a[x.g.state_vars[i]] = st_bits[i];
            for (std::size_t j = 0; j < u_bits.size(); ++j)
                a[x.g.uncontrollable_vars[j]] = u_bits[j];
            for (std::size_t i = 0; i < x.p.controllable.size(); ++i)
                CHECK(oracle::Evaluator::lit(vals, x.spec.inputs[x.p.controllable[i]]) ==
                      x.m.eval(st.functions[i], a));
        }
    }
    CHECK(done >= 20);
}

TEST_CASE("encode_witness examples")
{
    Pipeline x(one_latch_system());
    const auto w = synth::encode_witness(x.g, x.m.bdd_true());
    CHECK(w.circuit.outputs == std::vector<Lit>{aiger::lit_true});
    CHECK(w.circuit.inputs.size() == 1);

    const auto nx = synth::encode_witness(x.g, x.r.winning_region);
    CHECK(nx.circuit.ands.empty());
    CHECK(nx.circuit.outputs == std::vector<Lit>{aiger::negate(nx.circuit.inputs[0])});
}

TEST_CASE("encode_witness on random regions over five latches")
{
    Builder b;
    std::vector<Lit> ls;
    for (int i = 0; i < 5; ++i)
        ls.push_back(b.add_latch());
    for (auto l : ls)
        b.set_next(l, l);
    b.add_output(aiger::lit_false);
    Pipeline x(std::move(b).build());
    std::mt19937_64 rng(33);
    for (int k = 0; k < 20; ++k) {
        auto f = x.m.bdd_false();
        for (unsigned s = 0; s < 32; ++s) {
            if (rng() % 2)
                continue;
            auto cube = x.m.bdd_true();
            for (unsigned i = 0; i < 5; ++i)
                cube &= ((s >> i) & 1) ? x.m.var(x.g.state_vars[i]) : ~x.m.var(x.g.state_vars[i]);
            f |= cube;
        }
        const auto w = synth::encode_witness(x.g, f);
        const oracle::Evaluator ev(w.circuit);
        for (unsigned s = 0; s < 32; ++s) {
            std::vector<bool> a(x.m.var_count(), false);
            for (unsigned i = 0; i < 5; ++i)
                a[x.g.state_vars[i]] = (s >> i) & 1;
            CHECK(oracle::Evaluator::lit(ev.run(oracle::bits(s, 5), {}), w.circuit.outputs[0]) == x.m.eval(f, a));
        }
    }
}

TEST_CASE("counter-strategy circuit forces the error")
{
    Builder b;
    const Lit u = b.add_input("u");
    b.add_input("controllable_c");
    const Lit x = b.add_latch("x");
    b.set_next(x, u);
    b.add_output(x, "err");
    Pipeline p(std::move(b).build());
    const auto cs = game::extract_counter_strategy(p.g, p.r);
    const auto env = synth::encode_counter_strategy(p.spec, p.p, p.g, cs);
    CHECK(env.inputs.size() == 1); // the controllable input stays free
    CHECK(verify::model_check(env).status == verify::Status::Falsified);
}

TEST_CASE("witness path convention")
{
    CHECK(synth::witness_path("out/sol.aag") == std::filesystem::path("out/sol.aag.winregion.aag"));
}

TEST_CASE("every realizable corpus instance up to moderate size verifies")
{
    for (const auto& item : bench::default_plan()) {
        for (int v = item.from; v <= std::min(item.to, 5); ++v) {
            auto gen = bench::generate(item.family, v);
            if (gen.instance.status != aiger::Status::Realizable)
                continue;
            Pipeline x(std::move(gen.circuit));
            REQUIRE(x.r.realizable);
            const auto sol = synth::encode_solution(x.spec, x.p, x.g, game::extract_strategy(x.g, x.r));
            const auto w = synth::encode_witness(x.g, x.r.winning_region);
            CHECK(verify::check_witness(x.spec, sol.circuit, w.circuit).status == verify::Status::Verified);
        }
    }
}
