#include "arena/dd.hpp"

#include "arena/error.hpp"

#include <algorithm>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

namespace arena::dd {

namespace {

std::uint64_t mix(std::uint64_t x)
{
    x ^= x >> 33;
    x *= 0xff51afd7ed558ccdULL;
    x ^= x >> 33;
    x *= 0xc4ceb9fe1a85ec53ULL;
    x ^= x >> 33;
    return x;
}

std::uint64_t hash_node(VarId v, NodeId low, NodeId high)
{
    return mix((std::uint64_t{v} * 0x9e3779b97f4a7c15ULL) ^ (std::uint64_t{low} << 32 | high));
}

} // namespace

bool Bdd::is_false() const { return mgr_ != nullptr && id_ == Manager::false_id; }
bool Bdd::is_true() const { return mgr_ != nullptr && id_ == Manager::true_id; }

Bdd Bdd::operator~() const
{
    if (!mgr_)
        throw Error(Errc::ManagerMismatch, "null BDD");
    return mgr_->negate(*this);
}

Bdd Bdd::operator&(const Bdd& g) const
{
    if (!mgr_)
        throw Error(Errc::ManagerMismatch, "null BDD");
    return mgr_->apply(Op::And, *this, g);
}

Bdd Bdd::operator|(const Bdd& g) const
{
    if (!mgr_)
        throw Error(Errc::ManagerMismatch, "null BDD");
    return mgr_->apply(Op::Or, *this, g);
}

Bdd Bdd::operator^(const Bdd& g) const
{
    if (!mgr_)
        throw Error(Errc::ManagerMismatch, "null BDD");
    return mgr_->apply(Op::Xor, *this, g);
}

Bdd Bdd::implies(const Bdd& g) const
{
    if (!mgr_)
        throw Error(Errc::ManagerMismatch, "null BDD");
    return mgr_->apply(Op::Implies, *this, g);
}

Bdd Bdd::iff(const Bdd& g) const
{
    if (!mgr_)
        throw Error(Errc::ManagerMismatch, "null BDD");
    return mgr_->apply(Op::Iff, *this, g);
}

bool Bdd::leq(const Bdd& g) const { return implies(g).is_true(); }

Manager::Manager()
{
    nodes_.push_back({terminal_var, false_id, false_id});
    nodes_.push_back({terminal_var, true_id, true_id});
    unique_.assign(1u << 12, 0);
    cache_.resize(1u << 12);
}

VarId Manager::new_var(std::string name)
{
    names_.push_back(std::move(name));
    return static_cast<VarId>(names_.size() - 1);
}

const std::string& Manager::var_name(VarId v) const
{
    check_var(v);
    return names_[v];
}

void Manager::check(const Bdd& f) const
{
    if (f.manager() != this)
        throw Error(Errc::ManagerMismatch, "BDD belongs to a different manager");
}

void Manager::check_var(VarId v) const
{
    if (v >= names_.size())
        throw Error(Errc::UnknownVariable, "variable " + std::to_string(v) + " is not registered");
}

Bdd Manager::var(VarId v)
{
    check_var(v);
    return {this, make(v, false_id, true_id)};
}

NodeId Manager::cube_of(std::span<const VarId> vars)
{
    std::vector<VarId> sorted(vars.begin(), vars.end());
    for (auto v : sorted)
        check_var(v);
    std::sort(sorted.begin(), sorted.end(), std::greater<>());
    NodeId acc = true_id;
    for (auto v : sorted)
        acc = make(v, false_id, acc);
    return acc;
}

Bdd Manager::cube(std::span<const VarId> vars) { return {this, cube_of(vars)}; }

NodeId Manager::make(VarId v, NodeId low, NodeId high)
{
    if (low == high)
        return low;
    const auto mask = unique_.size() - 1;
    auto slot = hash_node(v, low, high) & mask;
    while (const auto id = unique_[slot]) {
        const auto& n = nodes_[id];
        if (n.var == v && n.low == low && n.high == high)
            return id;
        slot = (slot + 1) & mask;
    }
    const auto id = static_cast<NodeId>(nodes_.size());
    nodes_.push_back({v, low, high});
    unique_[slot] = id;
    if (++unique_used_ * 2 > unique_.size())
        grow_unique();
    return id;
}

void Manager::grow_unique()
{
    std::vector<NodeId> table(unique_.size() * 2, 0);
    const auto mask = table.size() - 1;
    for (auto id : unique_) {
        if (!id)
            continue;
        const auto& n = nodes_[id];
        auto slot = hash_node(n.var, n.low, n.high) & mask;
        while (table[slot])
            slot = (slot + 1) & mask;
        table[slot] = id;
    }
    unique_ = std::move(table);
}

bool Manager::cache_find(Tag op, NodeId f, NodeId g, NodeId h, NodeId& out) const
{
    const std::uint64_t a = std::uint64_t{static_cast<std::uint8_t>(op)} << 32 | f;
    const std::uint64_t b = std::uint64_t{g} << 32 | h;
    const auto mask = cache_.size() - 1;
    auto slot = mix(a * 31 + b) & mask;
    while (cache_[slot].a != 0) {
        if (cache_[slot].a == a && cache_[slot].b == b) {
            out = cache_[slot].result;
            return true;
        }
        slot = (slot + 1) & mask;
    }
    return false;
}

void Manager::cache_store(Tag op, NodeId f, NodeId g, NodeId h, NodeId result)
{
    const std::uint64_t a = std::uint64_t{static_cast<std::uint8_t>(op)} << 32 | f;
    const std::uint64_t b = std::uint64_t{g} << 32 | h;
    const auto mask = cache_.size() - 1;
    auto slot = mix(a * 31 + b) & mask;
    while (cache_[slot].a != 0) {
        if (cache_[slot].a == a && cache_[slot].b == b) {
            cache_[slot].result = result;
            return;
        }
        slot = (slot + 1) & mask;
    }
    cache_[slot] = {a, b, result};
    if (++cache_used_ * 2 > cache_.size())
        grow_cache();
}

void Manager::grow_cache()
{
    std::vector<CacheEntry> table(cache_.size() * 2);
    const auto mask = table.size() - 1;
    for (const auto& e : cache_) {
        if (e.a == 0)
            continue;
        auto slot = mix(e.a * 31 + e.b) & mask;
        while (table[slot].a != 0)
            slot = (slot + 1) & mask;
        table[slot] = e;
    }
    cache_ = std::move(table);
}

Bdd Manager::apply(Op op, const Bdd& f, const Bdd& g)
{
    check(f);
    check(g);
    return {this, apply_rec(static_cast<Tag>(op), f.id(), g.id())};
}

Bdd Manager::negate(const Bdd& f)
{
    check(f);
    return {this, not_rec(f.id())};
}

Bdd Manager::ite(const Bdd& f, const Bdd& g, const Bdd& h)
{
    check(f);
    check(g);
    check(h);
    return {this, ite_rec(f.id(), g.id(), h.id())};
}

NodeId Manager::not_rec(NodeId f)
{
    if (f < 2)
        return f ^ 1u;
    NodeId r;
    if (cache_find(Tag::Not, f, 0, 0, r))
        return r;
    const auto n = nodes_[f];
    const auto lo = not_rec(n.low);
    const auto hi = not_rec(n.high);
    r = make(n.var, lo, hi);
    cache_store(Tag::Not, f, 0, 0, r);
    return r;
}

NodeId Manager::apply_rec(Tag op, NodeId f, NodeId g)
{
    switch (op) {
    case Tag::And:
        if (f == false_id || g == false_id)
            return false_id;
        if (f == true_id || f == g)
            return g;
        if (g == true_id)
            return f;
        break;
    case Tag::Or:
        if (f == true_id || g == true_id)
            return true_id;
        if (f == false_id || f == g)
            return g;
        if (g == false_id)
            return f;
        break;
    case Tag::Xor:
        if (f == g)
            return false_id;
        if (f == false_id)
            return g;
        if (g == false_id)
            return f;
        if (f == true_id)
            return not_rec(g);
        if (g == true_id)
            return not_rec(f);
        break;
    case Tag::Implies:
        if (f == false_id || g == true_id || f == g)
            return true_id;
        if (f == true_id)
            return g;
        if (g == false_id)
            return not_rec(f);
        break;
    case Tag::Iff:
        if (f == g)
            return true_id;
        if (f == true_id)
            return g;
        if (g == true_id)
            return f;
        if (f == false_id)
            return not_rec(g);
        if (g == false_id)
            return not_rec(f);
        break;
    default: break;
    }
    if (op != Tag::Implies && f > g)
        std::swap(f, g);

    NodeId r;
    if (cache_find(op, f, g, 0, r))
        return r;

    const auto nf = nodes_[f];
    const auto ng = nodes_[g];
    const auto v = std::min(nf.var, ng.var);
    const auto f0 = nf.var == v ? nf.low : f;
    const auto f1 = nf.var == v ? nf.high : f;
    const auto g0 = ng.var == v ? ng.low : g;
    const auto g1 = ng.var == v ? ng.high : g;
    const auto lo = apply_rec(op, f0, g0);
    const auto hi = apply_rec(op, f1, g1);
    r = make(v, lo, hi);
    cache_store(op, f, g, 0, r);
    return r;
}

NodeId Manager::ite_rec(NodeId f, NodeId g, NodeId h)
{
    if (f == true_id)
        return g;
    if (f == false_id)
        return h;
    if (g == h)
        return g;
    if (g == true_id && h == false_id)
        return f;
    if (g == false_id && h == true_id)
        return not_rec(f);
    if (g == true_id)
        return apply_rec(Tag::Or, f, h);
    if (h == false_id)
        return apply_rec(Tag::And, f, g);

    NodeId r;
    if (cache_find(Tag::Ite, f, g, h, r))
        return r;

    const auto nf = nodes_[f];
    const auto ng = nodes_[g];
    const auto nh = nodes_[h];
    const auto v = std::min({nf.var, ng.var, nh.var});
    const auto lo = ite_rec(nf.var == v ? nf.low : f, ng.var == v ? ng.low : g, nh.var == v ? nh.low : h);
    const auto hi = ite_rec(nf.var == v ? nf.high : f, ng.var == v ? ng.high : g, nh.var == v ? nh.high : h);
    r = make(v, lo, hi);
    cache_store(Tag::Ite, f, g, h, r);
    return r;
}

Bdd Manager::exists(std::span<const VarId> vars, const Bdd& f)
{
    check(f);
    const auto cube = cube_of(vars);
    return {this, quant_rec(Tag::Exists, f.id(), cube)};
}

Bdd Manager::forall(std::span<const VarId> vars, const Bdd& f)
{
    check(f);
    const auto cube = cube_of(vars);
    return {this, quant_rec(Tag::Forall, f.id(), cube)};
}

NodeId Manager::quant_rec(Tag op, NodeId f, NodeId cube)
{
    if (f < 2)
        return f;
    const auto fv = level(f);
    while (cube != true_id && level(cube) < fv)
        cube = nodes_[cube].high;
    if (cube == true_id)
        return f;

    NodeId r;
    if (cache_find(op, f, cube, 0, r))
        return r;

    const auto nf = nodes_[f];
    if (level(cube) == fv) {
        const auto rest = nodes_[cube].high;
        const auto lo = quant_rec(op, nf.low, rest);
        const NodeId absorbing = op == Tag::Exists ? true_id : false_id;
        if (lo == absorbing) {
            r = absorbing;
        } else {
            const auto hi = quant_rec(op, nf.high, rest);
            r = apply_rec(op == Tag::Exists ? Tag::Or : Tag::And, lo, hi);
        }
    } else {
        const auto lo = quant_rec(op, nf.low, cube);
        const auto hi = quant_rec(op, nf.high, cube);
        r = make(fv, lo, hi);
    }
    cache_store(op, f, cube, 0, r);
    return r;
}

Bdd Manager::and_exists(std::span<const VarId> vars, const Bdd& f, const Bdd& g)
{
    check(f);
    check(g);
    const auto cube = cube_of(vars);
    return {this, and_exists_rec(f.id(), g.id(), cube)};
}

NodeId Manager::and_exists_rec(NodeId f, NodeId g, NodeId cube)
{
    if (f == false_id || g == false_id)
        return false_id;
    if (f == true_id && g == true_id)
        return true_id;
    if (f == true_id)
        return quant_rec(Tag::Exists, g, cube);
    if (g == true_id || f == g)
        return quant_rec(Tag::Exists, f, cube);
    if (cube == true_id)
        return apply_rec(Tag::And, f, g);
    if (f > g)
        std::swap(f, g);

    const auto nf = nodes_[f];
    const auto ng = nodes_[g];
    const auto v = std::min(nf.var, ng.var);
    while (cube != true_id && level(cube) < v)
        cube = nodes_[cube].high;
    if (cube == true_id)
        return apply_rec(Tag::And, f, g);

    NodeId r;
    if (cache_find(Tag::AndExists, f, g, cube, r))
        return r;

    const auto f0 = nf.var == v ? nf.low : f;
    const auto f1 = nf.var == v ? nf.high : f;
    const auto g0 = ng.var == v ? ng.low : g;
    const auto g1 = ng.var == v ? ng.high : g;
    if (level(cube) == v) {
        const auto rest = nodes_[cube].high;
        const auto lo = and_exists_rec(f0, g0, rest);
        if (lo == true_id) {
            r = true_id;
        } else {
            const auto hi = and_exists_rec(f1, g1, rest);
            r = apply_rec(Tag::Or, lo, hi);
        }
    } else {
        const auto lo = and_exists_rec(f0, g0, cube);
        const auto hi = and_exists_rec(f1, g1, cube);
        r = make(v, lo, hi);
    }
    cache_store(Tag::AndExists, f, g, cube, r);
    return r;
}

Bdd Manager::cofactor(const Bdd& f, VarId v, bool value)
{
    check(f);
    check_var(v);
    return {this, cofactor_rec(f.id(), v, value)};
}

NodeId Manager::cofactor_rec(NodeId f, VarId v, bool value)
{
    const auto fv = level(f);
    if (fv > v)
        return f;
    if (fv == v)
        return value ? nodes_[f].high : nodes_[f].low;
    NodeId r;
    if (cache_find(Tag::Cofactor, f, v, value ? 1 : 0, r))
        return r;
    const auto n = nodes_[f];
    const auto lo = cofactor_rec(n.low, v, value);
    const auto hi = cofactor_rec(n.high, v, value);
    r = make(fv, lo, hi);
    cache_store(Tag::Cofactor, f, v, value ? 1 : 0, r);
    return r;
}

Bdd Manager::compose(const Bdd& f, std::span<const std::pair<VarId, Bdd>> substitution)
{
    check(f);
    constexpr NodeId keep = static_cast<NodeId>(-1);
    std::vector<NodeId> sub(names_.size(), keep);
    VarId deepest = 0;
    bool any = false;
    for (const auto& [v, g] : substitution) {
        check_var(v);
        check(g);
        sub[v] = g.id();
        deepest = std::max(deepest, v);
        any = true;
    }
    if (!any)
        return f;

    std::unordered_map<NodeId, NodeId> memo;
    const auto rec = [&](auto&& self, NodeId n) -> NodeId {
        if (level(n) > deepest)
            return n;
        if (const auto it = memo.find(n); it != memo.end())
            return it->second;
        const auto node = nodes_[n];
        const auto lo = self(self, node.low);
        const auto hi = self(self, node.high);
        const auto sel = sub[node.var] == keep ? make(node.var, false_id, true_id) : sub[node.var];
        const auto r = ite_rec(sel, hi, lo);
        memo.emplace(n, r);
        return r;
    };
    return {this, rec(rec, f.id())};
}

std::optional<std::vector<bool>> Manager::pick_cube(const Bdd& f, std::span<const VarId> vars)
{
    check(f);
    if (f.is_false())
        return std::nullopt;
    std::vector<bool> chosen(names_.size(), false);
    NodeId n = f.id();
    while (n >= 2) {
        const auto node = nodes_[n];
        if (node.low != false_id) {
            n = node.low;
        } else {
            chosen[node.var] = true;
            n = node.high;
        }
    }
    std::vector<bool> out;
    out.reserve(vars.size());
    for (auto v : vars) {
        check_var(v);
        out.push_back(chosen[v]);
    }
    return out;
}

bool Manager::eval(const Bdd& f, const std::vector<bool>& assignment) const
{
    check(f);
    NodeId n = f.id();
    while (n >= 2) {
        const auto& node = nodes_[n];
        if (node.var >= assignment.size())
            throw Error(Errc::UnknownVariable, "assignment does not cover variable " + std::to_string(node.var));
        n = assignment[node.var] ? node.high : node.low;
    }
    return n == true_id;
}

std::vector<VarId> Manager::support(const Bdd& f) const
{
    check(f);
    std::unordered_set<NodeId> seen;
    std::vector<bool> vars(names_.size(), false);
    std::vector<NodeId> stack{f.id()};
    while (!stack.empty()) {
        const auto n = stack.back();
        stack.pop_back();
        if (n < 2 || !seen.insert(n).second)
            continue;
        vars[nodes_[n].var] = true;
        stack.push_back(nodes_[n].low);
        stack.push_back(nodes_[n].high);
    }
    std::vector<VarId> out;
    for (VarId v = 0; v < vars.size(); ++v)
        if (vars[v])
            out.push_back(v);
    return out;
}

std::size_t Manager::node_count(const Bdd& f) const
{
    check(f);
    std::unordered_set<NodeId> seen;
    std::vector<NodeId> stack{f.id()};
    while (!stack.empty()) {
        const auto n = stack.back();
        stack.pop_back();
        if (!seen.insert(n).second || n < 2)
            continue;
        stack.push_back(nodes_[n].low);
        stack.push_back(nodes_[n].high);
    }
    return seen.size();
}

VarId Manager::top_var(const Bdd& f) const
{
    check(f);
    return nodes_[f.id()].var;
}

Bdd Manager::low(const Bdd& f) const
{
    check(f);
    return {const_cast<Manager*>(this), nodes_[f.id()].low};
}

Bdd Manager::high(const Bdd& f) const
{
    check(f);
    return {const_cast<Manager*>(this), nodes_[f.id()].high};
}

std::string Manager::to_dot(const Bdd& f) const
{
    check(f);
    std::ostringstream out;
    out << "digraph bdd {\n";
    out << "  n0 [shape=box,label=\"0\"];\n  n1 [shape=box,label=\"1\"];\n";
    std::unordered_set<NodeId> seen;
    std::vector<NodeId> stack{f.id()};
    while (!stack.empty()) {
        const auto n = stack.back();
        stack.pop_back();
        if (n < 2 || !seen.insert(n).second)
            continue;
        const auto& node = nodes_[n];
        out << "  n" << n << " [label=\"" << names_[node.var] << "\"];\n";
        out << "  n" << n << " -> n" << node.low << " [style=dashed];\n";
        out << "  n" << n << " -> n" << node.high << ";\n";
        stack.push_back(node.low);
        stack.push_back(node.high);
    }
    out << "}\n";
    return out.str();
}

} // namespace arena::dd
