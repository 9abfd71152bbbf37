#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace arena::aiger {

// AIGER literal: variable index * 2, low bit set when negated.
using Lit = unsigned;

constexpr Lit lit_false = 0;
constexpr Lit lit_true = 1;

constexpr Lit negate(Lit l) { return l ^ 1u; }
constexpr unsigned var_of(Lit l) { return l >> 1; }
constexpr bool is_negated(Lit l) { return (l & 1u) != 0; }
constexpr Lit make_lit(unsigned var, bool negated = false) { return (var << 1) | (negated ? 1u : 0u); }
constexpr bool is_constant(Lit l) { return l < 2; }

// Latches always reset to 0; other reset values are rejected by the parsers.
struct Latch
{
    Lit lit;
    Lit next;

    friend bool operator==(const Latch&, const Latch&) = default;
};

struct AndGate
{
    Lit lhs;
    Lit rhs0;
    Lit rhs1;

    friend bool operator==(const AndGate&, const AndGate&) = default;
};

enum class SymbolKind : char { Input = 'i', Latch = 'l', Output = 'o' };

struct Aig
{
    unsigned max_var = 0;
    std::vector<Lit> inputs;
    std::vector<Latch> latches;
    std::vector<Lit> outputs;
    std::vector<AndGate> ands;
    std::map<std::pair<SymbolKind, std::size_t>, std::string> symbols;
    std::vector<std::string> comments;

    const std::string* symbol(SymbolKind kind, std::size_t pos) const;

    friend bool operator==(const Aig&, const Aig&) = default;
};

enum class Format { Ascii, Binary };

Aig parse_ascii(std::string_view text);
Aig parse_binary(std::string_view bytes);
// Dispatches on the "aag" / "aig" magic.
Aig parse(std::string_view bytes);

std::string emit_ascii(const Aig& a);
// Re-indexes first (see reindex), so the output is always a legal binary file.
std::string emit_binary(const Aig& a);
std::string emit(const Aig& a, Format format);

Aig read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, const Aig& a, Format format = Format::Ascii);

// Indices into a.ands such that every gate comes after the gates it reads.
// Roots are visited in order of their original lhs, so an already ordered
// circuit maps to the identity permutation. Throws NotReindexable on a cycle.
std::vector<std::size_t> topological_order(const Aig& a);

// Binary-canonical copy: inputs 1..I, latches I+1..I+L, gates in topological
// order after them, lhs > rhs0 >= rhs1. Unused variable indices are dropped.
Aig reindex(const Aig& a);

// Positions into Aig::inputs.
struct InputPartition
{
    std::vector<std::size_t> controllable;
    std::vector<std::size_t> uncontrollable;

    friend bool operator==(const InputPartition&, const InputPartition&) = default;
};

inline constexpr std::string_view controllable_prefix = "controllable_";

InputPartition classify_inputs(const Aig& a);

// A specification circuit has exactly one output (the error signal).
void validate_spec(const Aig& a);

enum class Status { Realizable, Unrealizable, Unknown };

std::string_view to_string(Status s);
Status status_from_string(std::string_view s);

// Looks for "STATUS : realizable|unrealizable" comment lines.
Status read_status(const Aig& a);

// Incremental construction in binary-canonical order: all inputs, then all
// latches, then gates. make_and folds constants and trivial operand pairs.
class Builder
{
public:
    Lit add_input(std::string name = {});
    Lit add_latch(std::string name = {});
    void set_next(Lit latch, Lit next);
    void add_output(Lit lit, std::string name = {});
    void add_comment(std::string line);

    Lit make_and(Lit a, Lit b);
    Lit make_or(Lit a, Lit b) { return negate(make_and(negate(a), negate(b))); }
    Lit make_xor(Lit a, Lit b);
    Lit make_ite(Lit sel, Lit then_lit, Lit else_lit);
    Lit make_and_all(const std::vector<Lit>& lits);
    Lit make_or_all(const std::vector<Lit>& lits);

    std::size_t latch_count() const { return aig_.latches.size(); }
    Aig build() &&;

private:
    unsigned fresh_var() { return ++aig_.max_var; }

    Aig aig_;
};

} // namespace arena::aiger
