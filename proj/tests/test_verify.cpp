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
using verify::Method;
using verify::Status;

namespace {

// u = var 1, controllable c = var 2, latch x = var 3 with x' = c, err = x.
aiger::Aig spec_x_c()
{
    return aiger::parse_ascii("aag 3 2 1 1 0\n2\n4\n6 4\n6\ni0 u\ni1 controllable_c\nl0 x\n");
}

// c driven by a buffer of `driver`.
aiger::Aig solution_x_c(Lit driver)
{
    auto a = spec_x_c();
    a.inputs = {2};
    a.ands = {{4, driver, driver}};
    a.symbols.erase({aiger::SymbolKind::Input, 1});
    return a;
}

// One input (the latch), output = given literal over it.
aiger::Aig witness(Lit out)
{
    aiger::Aig w;
    w.max_var = 1;
    w.inputs = {2};
    w.outputs = {out};
    return w;
}

struct Solved
{
    aiger::Aig spec;
    aiger::InputPartition p;
    dd::Manager m;
    game::Game g;
    game::SolveResult r;

    explicit Solved(aiger::Aig a) : spec(std::move(a)), p(aiger::classify_inputs(spec))
    {
        g = game::build_game(spec, p, m);
        r = game::solve(g);
    }
};

} // namespace

TEST_CASE("status and method strings")
{
    CHECK(verify::to_string(Status::Verified) == "verified");
    CHECK(verify::to_string(Method::WitnessCheck) == "witness_check");
    CHECK(verify::status_from_string("inconclusive") == Status::Inconclusive);
    CHECK(verify::method_from_string("model_check") == Method::ModelCheck);
}

TEST_CASE("syntactic check")
{
    const auto spec = spec_x_c();
    CHECK(verify::syntactic_check(spec, solution_x_c(0)).status == Status::Verified);

    auto no_latch = solution_x_c(0);
    no_latch.latches.clear();
    const auto v1 = verify::syntactic_check(spec, no_latch);
    CHECK(v1.status == Status::Falsified);
    CHECK(v1.method == Method::Syntactic);

    // leaving c as an input
    CHECK(verify::syntactic_check(spec, spec).status == Status::Falsified);

    auto wrong_output = solution_x_c(0);
    wrong_output.outputs = {7};
    CHECK(verify::syntactic_check(spec, wrong_output).status == Status::Falsified);

    auto dropped_u = solution_x_c(0);
    dropped_u.inputs.clear();
    dropped_u.ands.push_back({2, 0, 0});
    CHECK(verify::syntactic_check(spec, dropped_u).status == Status::Falsified);
}

TEST_CASE("witness check examples")
{
    const auto spec = spec_x_c();
    const auto sol = solution_x_c(0);
    const auto ok = verify::check_witness(spec, sol, witness(3)); // W = !x
    CHECK(ok.status == Status::Verified);
    CHECK(ok.method == Method::WitnessCheck);

    const auto weak = verify::check_witness(spec, sol, witness(1)); // W = true
    CHECK(weak.status == Status::Inconclusive);

    // the initial state outside W
    CHECK(verify::check_witness(spec, sol, witness(2)).status == Status::Inconclusive);

    aiger::Aig wide = witness(3);
    wide.inputs.push_back(4);
    wide.max_var = 2;
    try {
        (void)verify::check_witness(spec, sol, wide);
        FAIL("expected ArityMismatch");
    } catch (const Error& e) {
        CHECK(e.code() == Errc::ArityMismatch);
    }

    // W = !x is not inductive for the bad controller c := u
    CHECK(verify::check_witness(spec, solution_x_c(2), witness(3)).status == Status::Inconclusive);
}

TEST_CASE("model checking examples")
{
    const auto good = verify::model_check(solution_x_c(0));
    CHECK(good.status == Status::Verified);
    CHECK(good.method == Method::ModelCheck);

    const auto sol = solution_x_c(2); // c := u
    const auto bad = verify::model_check(sol);
    REQUIRE(bad.status == Status::Falsified);
    REQUIRE(bad.counterexample.size() == 2);
    CHECK(bad.counterexample[0].state == std::vector<bool>{false});
    CHECK(bad.counterexample[0].inputs == std::vector<bool>{true});
    CHECK(bad.counterexample[1].state == std::vector<bool>{true});
    CHECK(verify::replay(sol, bad.counterexample));

    const auto text = verify::format_verdict(bad);
    CHECK(text.rfind("VERDICT falsified model_check\n", 0) == 0);
    CHECK(text.find("step 0: inputs=1 state=0") != std::string::npos);
    CHECK(text.find("step 1: inputs=0 state=1") != std::string::npos);

    const auto trivial = verify::model_check(aiger::parse_ascii("aag 1 1 0 1 0\n2\n0\n"));
    CHECK(trivial.status == Status::Verified);
    CHECK(trivial.detail.find("1 image step") != std::string::npos);
}

TEST_CASE("model checking respects the step budget")
{
    // a 4-bit counter that reaches the error after 15 steps
    Builder b;
    std::vector<Lit> bits;
    for (int i = 0; i < 4; ++i)
        bits.push_back(b.add_latch());
    Lit carry = aiger::lit_true;
    for (auto bit : bits) {
        b.set_next(bit, b.make_xor(bit, carry));
        carry = b.make_and(bit, carry);
    }
    b.add_output(b.make_and_all(bits));
    const auto a = std::move(b).build();
    verify::ModelCheckOptions opts;
    opts.max_steps = 5;
    CHECK(verify::model_check(a, opts).status == Status::Inconclusive);
    const auto full = verify::model_check(a);
    REQUIRE(full.status == Status::Falsified);
    CHECK(full.counterexample.size() == 16);
    CHECK(verify::replay(a, full.counterexample));
}

TEST_CASE("pipeline falls back to model checking on a bad witness")
{
    const auto spec = spec_x_c();
    const auto sol = solution_x_c(0);
    const auto weak = witness(1);
    const auto r = verify::verify_solution(spec, sol, &weak);
    CHECK(r.witness_supplied);
    CHECK(r.fallback_used);
    CHECK(r.verdict.status == Status::Verified);
    CHECK(r.verdict.method == Method::ModelCheck);

    const auto good = witness(3);
    const auto fast = verify::verify_solution(spec, sol, &good);
    CHECK_FALSE(fast.fallback_used);
    CHECK(fast.verdict.method == Method::WitnessCheck);

    const auto none = verify::verify_solution(spec, sol, nullptr);
    CHECK_FALSE(none.witness_supplied);
    CHECK(none.verdict.method == Method::ModelCheck);

    const auto syntactic = verify::verify_solution(spec, spec, &good);
    CHECK(syntactic.verdict.status == Status::Falsified);
    CHECK(syntactic.verdict.method == Method::Syntactic);
}

TEST_CASE("falsified traces replay on random wrong controllers")
{
    std::mt19937_64 rng(41);
    int falsified = 0;
    for (int k = 0; k < 200; ++k) {
        const auto spec = oracle::random_spec(rng, {1 + static_cast<unsigned>(rng() % 5), 1 + static_cast<unsigned>(rng() % 3),
                                                    1 + static_cast<unsigned>(rng() % 2), 8 + static_cast<unsigned>(rng() % 16)});
        const auto p = aiger::classify_inputs(spec);
        // drive each controllable input by a random latch or uncontrollable input
        aiger::Aig sol = spec;
        std::vector<Lit> sources;
        for (auto pos : p.uncontrollable)
            sources.push_back(spec.inputs[pos]);
        for (const auto& l : spec.latches)
            sources.push_back(l.lit);
        sol.inputs.clear();
        sol.symbols.clear();
        for (auto pos : p.uncontrollable)
            sol.inputs.push_back(spec.inputs[pos]);
        for (auto pos : p.controllable) {
            const Lit d = sources[rng() % sources.size()] ^ static_cast<Lit>(rng() & 1);
            sol.ands.push_back({spec.inputs[pos], d, d});
        }
        REQUIRE(verify::syntactic_check(spec, sol).status == Status::Verified);
        const auto v = verify::model_check(sol);
        REQUIRE(v.status != Status::Inconclusive);
        if (v.status == Status::Falsified) {
            ++falsified;
            CHECK(verify::replay(sol, v.counterexample));
        }
    }
    CHECK(falsified > 20);
}

TEST_CASE("witness verdicts never contradict model checking on the corpus")
{
    for (const auto& item : bench::default_plan()) {
        for (int v = item.from; v <= std::min(item.to, 4); ++v) {
            auto gen = bench::generate(item.family, v);
            Solved x(std::move(gen.circuit));
            if (!x.r.realizable)
                continue;
            const auto sol = synth::encode_solution(x.spec, x.p, x.g, game::extract_strategy(x.g, x.r));
            for (const auto& region : {x.r.winning_region, x.m.bdd_true(), x.g.init}) {
                const auto w = synth::encode_witness(x.g, region);
                const auto wv = verify::check_witness(x.spec, sol.circuit, w.circuit);
                CHECK(wv.status != Status::Falsified);
                if (wv.status == Status::Verified)
                    CHECK(verify::model_check(sol.circuit).status == Status::Verified);
            }
        }
    }
}
