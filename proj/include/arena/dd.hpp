#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace arena::dd {

using VarId = std::uint32_t;
using NodeId = std::uint32_t;

class Manager;

// Handle to a node of a Manager. Two handles of the same manager denote the
// same Boolean function iff their ids are equal.
class Bdd
{
public:
    Bdd() = default;

    Manager* manager() const { return mgr_; }
    NodeId id() const { return id_; }
    bool is_null() const { return mgr_ == nullptr; }
    bool is_false() const;
    bool is_true() const;

    Bdd operator~() const;
    Bdd operator&(const Bdd& g) const;
    Bdd operator|(const Bdd& g) const;
    Bdd operator^(const Bdd& g) const;
    Bdd& operator&=(const Bdd& g) { return *this = *this & g; }
    Bdd& operator|=(const Bdd& g) { return *this = *this | g; }

    // f.implies(g) is the function f -> g; use leq() for the set inclusion test.
    Bdd implies(const Bdd& g) const;
    Bdd iff(const Bdd& g) const;
    bool leq(const Bdd& g) const;

    friend bool operator==(const Bdd&, const Bdd&) = default;

private:
    friend class Manager;
    Bdd(Manager* mgr, NodeId id) : mgr_(mgr), id_(id) {}

    Manager* mgr_ = nullptr;
    NodeId id_ = 0;
};

enum class Op : std::uint8_t { And = 1, Or, Xor, Implies, Iff };

// Reduced ordered BDDs over a fixed variable order: the level of a variable is
// its registration index. No dynamic reordering and no garbage collection;
// a manager lives for one solving or verification job.
//
// Not thread-safe. Distinct managers may be used from distinct threads.
class Manager
{
public:
    Manager();
    Manager(const Manager&) = delete;
    Manager& operator=(const Manager&) = delete;

    VarId new_var(std::string name);
    std::size_t var_count() const { return names_.size(); }
    const std::string& var_name(VarId v) const;

    Bdd var(VarId v);
    Bdd constant(bool value) { return {this, value ? true_id : false_id}; }
    Bdd bdd_false() { return constant(false); }
    Bdd bdd_true() { return constant(true); }
    // Conjunction of the positive literals of vars.
    Bdd cube(std::span<const VarId> vars);

    Bdd apply(Op op, const Bdd& f, const Bdd& g);
    Bdd negate(const Bdd& f);
    Bdd ite(const Bdd& f, const Bdd& g, const Bdd& h);

    Bdd exists(std::span<const VarId> vars, const Bdd& f);
    Bdd forall(std::span<const VarId> vars, const Bdd& f);
    // exists(vars, f & g) without building the conjunction.
    Bdd and_exists(std::span<const VarId> vars, const Bdd& f, const Bdd& g);

    Bdd cofactor(const Bdd& f, VarId v, bool value);

    // Simultaneous substitution of each listed variable by its function.
    Bdd compose(const Bdd& f, std::span<const std::pair<VarId, Bdd>> substitution);

    // A satisfying valuation of vars (in the order given), taking the low
    // branch whenever it is satisfiable. Variables not on the chosen path are 0.
    std::optional<std::vector<bool>> pick_cube(const Bdd& f, std::span<const VarId> vars);

    // assignment is indexed by VarId and must cover every variable of f.
    bool eval(const Bdd& f, const std::vector<bool>& assignment) const;

    std::vector<VarId> support(const Bdd& f) const;
    std::size_t node_count(const Bdd& f) const;
    std::size_t size() const { return nodes_.size(); }

    std::string to_dot(const Bdd& f) const;

    // Node structure, exposed for encoders that walk the graph.
    VarId top_var(const Bdd& f) const;
    Bdd low(const Bdd& f) const;
    Bdd high(const Bdd& f) const;
    bool is_terminal(const Bdd& f) const { return f.id() < 2; }

    static constexpr NodeId false_id = 0;
    static constexpr NodeId true_id = 1;

private:
    struct Node
    {
        VarId var;
        NodeId low;
        NodeId high;
    };

    struct CacheEntry
    {
        std::uint64_t a = 0; // 0 marks an empty slot
        std::uint64_t b = 0;
        NodeId result = 0;
    };

    enum class Tag : std::uint8_t {
        And = 1,
        Or,
        Xor,
        Implies,
        Iff,
        Not,
        Ite,
        Exists,
        Forall,
        AndExists,
        Cofactor,
    };

    static constexpr VarId terminal_var = static_cast<VarId>(-1);

    void check(const Bdd& f) const;
    void check_var(VarId v) const;
    NodeId cube_of(std::span<const VarId> vars);

    NodeId make(VarId v, NodeId low, NodeId high);
    VarId level(NodeId n) const { return nodes_[n].var; }

    NodeId apply_rec(Tag op, NodeId f, NodeId g);
    NodeId not_rec(NodeId f);
    NodeId ite_rec(NodeId f, NodeId g, NodeId h);
    NodeId quant_rec(Tag op, NodeId f, NodeId cube);
    NodeId and_exists_rec(NodeId f, NodeId g, NodeId cube);
    NodeId cofactor_rec(NodeId f, VarId v, bool value);

    bool cache_find(Tag op, NodeId f, NodeId g, NodeId h, NodeId& out) const;
    void cache_store(Tag op, NodeId f, NodeId g, NodeId h, NodeId result);
    void grow_unique();
    void grow_cache();

    std::vector<Node> nodes_;
    std::vector<std::string> names_;
    std::vector<NodeId> unique_; // open addressing, 0 = empty slot
    std::size_t unique_used_ = 0;
    std::vector<CacheEntry> cache_;
    std::size_t cache_used_ = 0;
};

} // namespace arena::dd
