#pragma once

#include "arena/aiger.hpp"

#include <cstdint>
#include <span>
#include <vector>

namespace arena::sim {

// Kernels in this module and in explicit_game come in two flavours: a plain
// serial loop (the reference) and an OpenMP-parallel loop over independent
// chunks. Both must produce identical results.
enum class Exec { Serial, Parallel };

// Bit-parallel gate-level evaluator: every variable carries a 64-bit word, one
// bit per valuation.
class Simulator
{
public:
    explicit Simulator(const aiger::Aig& a);

    const aiger::Aig& circuit() const { return aig_; }
    std::size_t word_count() const { return std::size_t{aig_.max_var} + 1; }

    // Fills the AND-gate words of `vars` (sized word_count()) from the input
    // and latch words already stored there.
    void evaluate(std::span<std::uint64_t> vars) const;

    void load(std::span<std::uint64_t> vars, std::span<const std::uint64_t> inputs,
              std::span<const std::uint64_t> latches) const;

    static std::uint64_t value(std::span<const std::uint64_t> vars, aiger::Lit lit)
    {
        const auto w = vars[aiger::var_of(lit)];
        return aiger::is_negated(lit) ? ~w : w;
    }

    struct Step
    {
        std::vector<bool> outputs;
        std::vector<bool> next;
    };

    // Single valuation convenience path.
    Step step(const std::vector<bool>& latches, const std::vector<bool>& inputs) const;

private:
    aiger::Aig aig_;
    std::vector<std::size_t> order_;
};

// Row-major word batches: row w holds one word per input (resp. latch).
struct Batch
{
    std::size_t words = 0;
    std::vector<std::uint64_t> inputs;
    std::vector<std::uint64_t> latches;
};

struct BatchResult
{
    std::vector<std::uint64_t> outputs;
    std::vector<std::uint64_t> next;

    friend bool operator==(const BatchResult&, const BatchResult&) = default;
};

BatchResult simulate(const Simulator& sim, const Batch& batch, Exec exec);

} // namespace arena::sim
