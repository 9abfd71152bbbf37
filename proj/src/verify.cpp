#include "arena/verify.hpp"

#include "arena/circuit_bdd.hpp"
#include "arena/dd.hpp"
#include "arena/error.hpp"
#include "arena/sim.hpp"

#include <algorithm>
#include <sstream>
#include <unordered_map>

namespace arena::verify {

using aiger::Lit;
using Clock = std::chrono::steady_clock;

std::string_view to_string(Status s)
{
    switch (s) {
    case Status::Verified: return "verified";
    case Status::Falsified: return "falsified";
    case Status::Inconclusive: return "inconclusive";
    }
    return "inconclusive";
}

std::string_view to_string(Method m)
{
    switch (m) {
    case Method::WitnessCheck: return "witness_check";
    case Method::ModelCheck: return "model_check";
    case Method::Syntactic: return "syntactic";
    }
    return "syntactic";
}

Status status_from_string(std::string_view s)
{
    if (s == "verified")
        return Status::Verified;
    if (s == "falsified")
        return Status::Falsified;
    return Status::Inconclusive;
}

Method method_from_string(std::string_view s)
{
    if (s == "witness_check")
        return Method::WitnessCheck;
    if (s == "model_check")
        return Method::ModelCheck;
    return Method::Syntactic;
}

namespace {

Verdict make(Status status, Method method, std::string detail)
{
    Verdict v;
    v.status = status;
    v.method = method;
    v.detail = std::move(detail);
    return v;
}

} // namespace

Verdict syntactic_check(const aiger::Aig& spec, const aiger::Aig& sol)
{
    const auto fail = [](std::string why) { return make(Status::Falsified, Method::Syntactic, std::move(why)); };

    if (spec.outputs.size() != 1)
        return fail("specification does not have exactly one output");
    if (sol.outputs.size() != 1 || sol.outputs[0] != spec.outputs[0])
        return fail("output literal differs from the specification");

    const auto p = aiger::classify_inputs(spec);
    std::vector<Lit> uncontrollable;
    for (auto pos : p.uncontrollable)
        uncontrollable.push_back(spec.inputs[pos]);
    if (sol.inputs != uncontrollable)
        return fail("inputs are not exactly the uncontrollable inputs of the specification");

    if (sol.latches.size() < spec.latches.size())
        return fail("solution drops specification latches");
    for (std::size_t i = 0; i < spec.latches.size(); ++i) {
        if (sol.latches[i] != spec.latches[i])
            return fail("latch " + std::to_string(i) + " differs from the specification");
    }

    std::unordered_map<Lit, const aiger::AndGate*> gates;
    for (const auto& g : sol.ands)
        gates.emplace(g.lhs, &g);
    for (const auto& g : spec.ands) {
        const auto it = gates.find(g.lhs);
        if (it == gates.end())
            return fail("specification gate " + std::to_string(g.lhs) + " is missing");
        const auto& s = *it->second;
        const bool same = (s.rhs0 == g.rhs0 && s.rhs1 == g.rhs1) || (s.rhs0 == g.rhs1 && s.rhs1 == g.rhs0);
        if (!same)
            return fail("specification gate " + std::to_string(g.lhs) + " was modified");
    }
    for (auto pos : p.controllable) {
        if (!gates.contains(spec.inputs[pos]))
            return fail("controllable input " + std::to_string(spec.inputs[pos]) + " is not driven by a gate");
    }

    try {
        (void)aiger::topological_order(sol);
    } catch (const Error& e) {
        return fail(e.what());
    }
    return make(Status::Verified, Method::Syntactic, "specification preserved");
}

Verdict check_witness(const aiger::Aig& spec, const aiger::Aig& sol, const aiger::Aig& witness)
{
    if (witness.inputs.size() != spec.latches.size())
        throw Error(Errc::ArityMismatch, "witness has " + std::to_string(witness.inputs.size()) +
                                             " inputs, specification has " + std::to_string(spec.latches.size()) +
                                             " latches");
    if (witness.outputs.size() != 1 || !witness.latches.empty())
        throw Error(Errc::ArityMismatch, "witness must be combinational with a single output");

    dd::Manager m;
    std::unordered_map<Lit, dd::Bdd> leaf;
    std::vector<dd::VarId> state;
    for (std::size_t i = 0; i < sol.latches.size(); ++i) {
        state.push_back(m.new_var("s" + std::to_string(i)));
        leaf.emplace(sol.latches[i].lit, m.var(state.back()));
    }
    for (std::size_t i = 0; i < sol.inputs.size(); ++i)
        leaf.emplace(sol.inputs[i], m.var(m.new_var("u" + std::to_string(i))));

    const auto p = aiger::classify_inputs(spec);
    std::vector<dd::VarId> controllable;
    for (auto pos : p.controllable) {
        controllable.push_back(m.new_var("c" + std::to_string(pos)));
        leaf.emplace(spec.inputs[pos], m.var(controllable.back()));
    }

    const auto lookup = [&](Lit l) {
        const auto it = leaf.find(l);
        if (it == leaf.end())
            throw Error(Errc::UndefinedLiteral, "literal " + std::to_string(l) + " is not an input or latch");
        return it->second;
    };

    // Controllers come from the solution's gates; error and transition
    // functions from the specification with the controllers plugged in.
    const CircuitBdds sol_bdds(sol, m, lookup);
    const CircuitBdds spec_bdds(spec, m, lookup);

    std::vector<std::pair<dd::VarId, dd::Bdd>> controller;
    for (std::size_t i = 0; i < p.controllable.size(); ++i)
        controller.emplace_back(controllable[i], sol_bdds.lit(spec.inputs[p.controllable[i]]));

    const auto err = m.compose(spec_bdds.lit(spec.outputs[0]), controller);
    std::vector<std::pair<dd::VarId, dd::Bdd>> step;
    for (std::size_t i = 0; i < sol.latches.size(); ++i) {
        const auto next = i < spec.latches.size() ? m.compose(spec_bdds.lit(spec.latches[i].next), controller)
                                                  : sol_bdds.lit(sol.latches[i].next);
        step.emplace_back(state[i], next);
    }

    std::unordered_map<Lit, dd::Bdd> witness_leaf;
    for (std::size_t j = 0; j < witness.inputs.size(); ++j)
        witness_leaf.emplace(witness.inputs[j], m.var(state[j]));
    const CircuitBdds wit_bdds(witness, m, [&](Lit l) { return witness_leaf.at(l); });
    const auto region = wit_bdds.lit(witness.outputs[0]);

    auto init = m.bdd_true();
    for (auto v : state)
        init &= ~m.var(v);

    if (!init.leq(region))
        return make(Status::Inconclusive, Method::WitnessCheck, "initial state outside the witness");
    if (!(region & err).is_false())
        return make(Status::Inconclusive, Method::WitnessCheck, "witness contains error states");
    if (!(region & ~m.compose(region, step)).is_false())
        return make(Status::Inconclusive, Method::WitnessCheck, "witness is not inductive");
    return make(Status::Verified, Method::WitnessCheck, "witness is an inductive invariant");
}

Verdict model_check(const aiger::Aig& sol, const ModelCheckOptions& options)
{
    if (sol.outputs.size() != 1)
        return make(Status::Inconclusive, Method::ModelCheck, "solution does not have exactly one output");
    const auto start = Clock::now();

    dd::Manager m;
    std::vector<dd::VarId> state, next_state, inputs;
    std::unordered_map<Lit, dd::Bdd> leaf;
    for (std::size_t i = 0; i < sol.latches.size(); ++i) {
        state.push_back(m.new_var("s" + std::to_string(i)));
        next_state.push_back(m.new_var("s" + std::to_string(i) + "'"));
        leaf.emplace(sol.latches[i].lit, m.var(state.back()));
    }
    for (std::size_t i = 0; i < sol.inputs.size(); ++i) {
        inputs.push_back(m.new_var("u" + std::to_string(i)));
        leaf.emplace(sol.inputs[i], m.var(inputs.back()));
    }
    const CircuitBdds bdds(sol, m, [&](Lit l) { return leaf.at(l); });

    const auto bad = bdds.lit(sol.outputs[0]);
    std::vector<dd::Bdd> next_fn;
    auto relation = m.bdd_true();
    for (std::size_t i = 0; i < sol.latches.size(); ++i) {
        next_fn.push_back(bdds.lit(sol.latches[i].next));
        relation &= m.var(next_state[i]).iff(next_fn.back());
    }
    std::vector<dd::VarId> present = state;
    present.insert(present.end(), inputs.begin(), inputs.end());
    std::vector<std::pair<dd::VarId, dd::Bdd>> unprime;
    for (std::size_t i = 0; i < state.size(); ++i)
        unprime.emplace_back(next_state[i], m.var(state[i]));

    auto reached = m.bdd_true();
    for (auto v : state)
        reached &= ~m.var(v);
    std::vector<dd::Bdd> rings{reached};

    for (std::size_t k = 0;; ++k) {
        const auto hit = reached & bad;
        if (!hit.is_false()) {
            // Walk back through the rings: a state first reached at depth j+1
            // has a predecessor in ring j.
            std::vector<TraceStep> trace;
            auto cube = *m.pick_cube(hit, present);
            for (std::size_t j = k + 1; j-- > 0;) {
                TraceStep s;
                s.state.assign(cube.begin(), cube.begin() + static_cast<std::ptrdiff_t>(state.size()));
                s.inputs.assign(cube.begin() + static_cast<std::ptrdiff_t>(state.size()), cube.end());
                trace.push_back(s);
                if (j == 0)
                    break;
                auto pred = rings[j - 1];
                for (std::size_t i = 0; i < state.size(); ++i)
                    pred &= s.state[i] ? next_fn[i] : ~next_fn[i];
                cube = *m.pick_cube(pred, present);
            }
            std::reverse(trace.begin(), trace.end());
            Verdict v = make(Status::Falsified, Method::ModelCheck,
                             "error output reachable in " + std::to_string(k) + " steps");
            v.counterexample = std::move(trace);
            return v;
        }
        const auto image = m.compose(m.and_exists(present, reached, relation), unprime);
        const auto grown = reached | image;
        if (grown == reached)
            return make(Status::Verified, Method::ModelCheck,
                        "fixpoint after " + std::to_string(k + 1) + " image steps");
        if (k + 1 >= options.max_steps)
            return make(Status::Inconclusive, Method::ModelCheck, "step budget exhausted");
        if (options.time_limit && Clock::now() - start > *options.time_limit)
            return make(Status::Inconclusive, Method::ModelCheck, "time budget exhausted");
        reached = grown;
        rings.push_back(reached);
    }
}

PipelineResult verify_solution(const aiger::Aig& spec, const aiger::Aig& sol, const aiger::Aig* witness,
                               const ModelCheckOptions& options)
{
    PipelineResult r;
    r.verdict = syntactic_check(spec, sol);
    if (r.verdict.status != Status::Verified)
        return r;
    if (witness) {
        r.witness_supplied = true;
        try {
            r.verdict = check_witness(spec, sol, *witness);
        } catch (const Error& e) {
            r.verdict = make(Status::Inconclusive, Method::WitnessCheck, e.what());
        }
        if (r.verdict.status == Status::Verified)
            return r;
        r.fallback_used = true;
    }
    r.verdict = model_check(sol, options);
    return r;
}

bool replay(const aiger::Aig& sol, const std::vector<TraceStep>& trace)
{
    if (trace.empty() || sol.outputs.empty())
        return false;
    const sim::Simulator simulator(sol);
    std::vector<bool> state(sol.latches.size(), false);
    for (std::size_t k = 0; k < trace.size(); ++k) {
        if (trace[k].state != state || trace[k].inputs.size() != sol.inputs.size())
            return false;
        const auto step = simulator.step(state, trace[k].inputs);
        if (k + 1 == trace.size())
            return step.outputs[0];
        state = step.next;
    }
    return false;
}

std::string format_verdict(const Verdict& v)
{
    const auto bits = [](const std::vector<bool>& b) {
        std::string s;
        for (bool x : b)
            s.push_back(x ? '1' : '0');
        return s;
    };
    std::ostringstream out;
    out << "VERDICT " << to_string(v.status) << ' ' << to_string(v.method) << '\n';
    for (std::size_t k = 0; k < v.counterexample.size(); ++k)
        out << "step " << k << ": inputs=" << bits(v.counterexample[k].inputs)
            << " state=" << bits(v.counterexample[k].state) << '\n';
    return out.str();
}

} // namespace arena::verify
