#pragma once

#include "arena/aiger.hpp"

#include <chrono>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace arena::verify {

enum class Status { Verified, Falsified, Inconclusive };
enum class Method { WitnessCheck, ModelCheck, Syntactic };

std::string_view to_string(Status s);
std::string_view to_string(Method m);
Status status_from_string(std::string_view s);
Method method_from_string(std::string_view s);

// One step of a counterexample: input values (in circuit input order) and
// the state (latch order) in which they are applied.
struct TraceStep
{
    std::vector<bool> inputs;
    std::vector<bool> state;

    friend bool operator==(const TraceStep&, const TraceStep&) = default;
};

struct Verdict
{
    Status status = Status::Inconclusive;
    Method method = Method::Syntactic;
    std::string detail;
    // Present for model-checking Falsified verdicts; the output is raised at
    // the last step.
    std::vector<TraceStep> counterexample;
};

// The solution must keep the specification's uncontrollable inputs, latches,
// gates and output literal, and define every controllable input by a gate.
Verdict syntactic_check(const aiger::Aig& spec, const aiger::Aig& sol);

// Inductive-invariant check of the winning-region witness. Never Falsified:
// a failing witness leaves the solution undecided. Throws ArityMismatch when
// the witness input count differs from the specification latch count.
Verdict check_witness(const aiger::Aig& spec, const aiger::Aig& sol, const aiger::Aig& witness);

struct ModelCheckOptions
{
    std::size_t max_steps = 1u << 20;
    std::optional<std::chrono::duration<double>> time_limit;
};

// Forward reachability from the all-zero state.
Verdict model_check(const aiger::Aig& sol, const ModelCheckOptions& options = {});

struct PipelineResult
{
    Verdict verdict;
    bool witness_supplied = false;
    bool fallback_used = false;
};

// Syntactic check, then the witness check if a witness is given, falling
// back to model checking when that is inconclusive.
PipelineResult verify_solution(const aiger::Aig& spec, const aiger::Aig& sol, const aiger::Aig* witness,
                               const ModelCheckOptions& options = {});

// Simulates the trace from the reset state; true iff every recorded state
// matches and the output is raised at the last step.
bool replay(const aiger::Aig& sol, const std::vector<TraceStep>& trace);

// "VERDICT <status> <method>" followed by "step k: inputs=<bits> state=<bits>" lines.
std::string format_verdict(const Verdict& v);

} // namespace arena::verify
