#include "arena/aiger.hpp"

#include "arena/error.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <optional>
#include <sstream>
#include <stdexcept>

namespace arena::aiger {

namespace {

// Upper bound on the header's M. Larger files are far outside the desk-scale
// corpus and would make per-variable tables unreasonably large.
constexpr std::uint64_t max_supported_var = 1u << 24;

class LineReader
{
public:
    explicit LineReader(std::string_view text) : text_(text) {}

    std::optional<std::string_view> next_line()
    {
        if (pos_ >= text_.size())
            return std::nullopt;
        const auto end = text_.find('\n', pos_);
        std::string_view line;
        if (end == std::string_view::npos) {
            line = text_.substr(pos_);
            pos_ = text_.size();
        } else {
            line = text_.substr(pos_, end - pos_);
            pos_ = end + 1;
        }
        return line;
    }

    std::size_t pos() const { return pos_; }
    void seek(std::size_t pos) { pos_ = pos; }
    std::string_view text() const { return text_; }

private:
    std::string_view text_;
    std::size_t pos_ = 0;
};

std::vector<std::string_view> split_fields(std::string_view line)
{
    std::vector<std::string_view> out;
    std::size_t i = 0;
    while (i < line.size()) {
        while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r'))
            ++i;
        const auto start = i;
        while (i < line.size() && line[i] != ' ' && line[i] != '\t' && line[i] != '\r')
            ++i;
        if (i > start)
            out.push_back(line.substr(start, i - start));
    }
    return out;
}

std::optional<unsigned> to_unsigned(std::string_view field)
{
    unsigned value = 0;
    const auto* first = field.data();
    const auto* last = field.data() + field.size();
    const auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc{} || ptr != last)
        return std::nullopt;
    return value;
}

std::vector<unsigned> parse_numbers(std::string_view line, std::size_t min_count, std::size_t max_count,
                                    std::string_view what)
{
    const auto fields = split_fields(line);
    if (fields.size() < min_count || fields.size() > max_count)
        throw Error(Errc::MalformedLine, std::string(what) + " line '" + std::string(line) + "'");
    std::vector<unsigned> out;
    out.reserve(fields.size());
    for (auto f : fields) {
        const auto v = to_unsigned(f);
        if (!v)
            throw Error(Errc::MalformedLine, std::string(what) + " line '" + std::string(line) + "'");
        out.push_back(*v);
    }
    return out;
}

struct Header
{
    unsigned max_var;
    unsigned inputs;
    unsigned latches;
    unsigned outputs;
    unsigned ands;
};

Header parse_header(std::optional<std::string_view> line, std::string_view magic)
{
    if (!line)
        throw Error(Errc::MalformedHeader, "empty file");
    const auto fields = split_fields(*line);
    if (fields.empty() || fields[0] != magic)
        throw Error(Errc::MalformedHeader, "expected '" + std::string(magic) + "'");
    if (fields.size() < 6 || fields.size() > 10)
        throw Error(Errc::MalformedHeader, "expected 5 to 9 header counts");
    std::vector<unsigned> nums;
    for (std::size_t i = 1; i < fields.size(); ++i) {
        const auto v = to_unsigned(fields[i]);
        if (!v)
            throw Error(Errc::MalformedHeader, "bad count '" + std::string(fields[i]) + "'");
        nums.push_back(*v);
    }
    static constexpr const char* extra_names[] = {"bad", "constraint", "justice", "fairness"};
    for (std::size_t i = 5; i < nums.size(); ++i) {
        if (nums[i] != 0)
            throw Error(Errc::UnsupportedFeature, std::string(extra_names[i - 5]) + " properties");
    }
    Header h{nums[0], nums[1], nums[2], nums[3], nums[4]};
    if (h.max_var > max_supported_var)
        throw Error(Errc::UnsupportedFeature, "maximum variable index " + std::to_string(h.max_var));
    if (std::uint64_t{h.inputs} + h.latches + h.ands > h.max_var)
        throw Error(Errc::CountMismatch, "I + L + A exceeds M");
    return h;
}

std::string_view require_line(LineReader& r, std::string_view section)
{
    const auto line = r.next_line();
    if (!line)
        throw Error(Errc::CountMismatch, "file ends inside the " + std::string(section) + " section");
    return *line;
}

void parse_trailer(LineReader& r, Aig& a)
{
    while (const auto line = r.next_line()) {
        if (*line == "c") {
            while (const auto comment = r.next_line())
                a.comments.emplace_back(*comment);
            return;
        }
        if (line->empty())
            throw Error(Errc::MalformedLine, "empty line in symbol table");
        const char kind = (*line)[0];
        std::size_t count = 0;
        switch (kind) {
        case 'i': count = a.inputs.size(); break;
        case 'l': count = a.latches.size(); break;
        case 'o': count = a.outputs.size(); break;
        case 'b':
        case 'c':
        case 'j':
        case 'f': throw Error(Errc::UnsupportedFeature, "symbol '" + std::string(*line) + "'");
        default: throw Error(Errc::MalformedLine, "symbol table line '" + std::string(*line) + "'");
        }
        const auto space = line->find(' ');
        if (space == std::string_view::npos || space == 1)
            throw Error(Errc::MalformedLine, "symbol table line '" + std::string(*line) + "'");
        const auto pos = to_unsigned(line->substr(1, space - 1));
        if (!pos || *pos >= count)
            throw Error(Errc::MalformedLine, "symbol position in '" + std::string(*line) + "'");
        const auto key = std::pair{static_cast<SymbolKind>(kind), std::size_t{*pos}};
        if (!a.symbols.emplace(key, std::string(line->substr(space + 1))).second)
            throw Error(Errc::MalformedLine, "duplicate symbol '" + std::string(*line) + "'");
    }
}

class Definitions
{
public:
    explicit Definitions(unsigned max_var) : max_var_(max_var), defined_(std::size_t{max_var} + 1, 0)
    {
        defined_[0] = 1;
    }

    void define(Lit lit)
    {
        if (is_negated(lit) || is_constant(lit))
            throw Error(Errc::MalformedLine, "cannot define literal " + std::to_string(lit));
        if (var_of(lit) > max_var_)
            throw Error(Errc::UndefinedLiteral, "literal " + std::to_string(lit) + " exceeds M");
        if (defined_[var_of(lit)])
            throw Error(Errc::RedefinedVariable, "variable " + std::to_string(var_of(lit)));
        defined_[var_of(lit)] = 1;
    }

    void use(Lit lit) const
    {
        if (var_of(lit) > max_var_ || !defined_[var_of(lit)])
            throw Error(Errc::UndefinedLiteral, "literal " + std::to_string(lit));
    }

private:
    unsigned max_var_;
    std::vector<std::uint8_t> defined_;
};

void write_trailer(std::ostringstream& out, const Aig& a)
{
    for (const auto& [key, name] : a.symbols)
        out << static_cast<char>(key.first) << key.second << ' ' << name << '\n';
    if (!a.comments.empty()) {
        out << "c\n";
        for (const auto& c : a.comments)
            out << c << '\n';
    }
}

void encode_delta(std::string& out, unsigned x)
{
    while (x & ~0x7fu) {
        out.push_back(static_cast<char>((x & 0x7fu) | 0x80u));
        x >>= 7;
    }
    out.push_back(static_cast<char>(x));
}

unsigned decode_delta(LineReader& r)
{
    const auto text = r.text();
    auto pos = r.pos();
    unsigned x = 0;
    unsigned shift = 0;
    while (true) {
        if (pos >= text.size())
            throw Error(Errc::TruncatedDeltaEncoding, "file ends inside a gate delta");
        const auto ch = static_cast<unsigned char>(text[pos++]);
        const unsigned chunk = ch & 0x7fu;
        if (shift == 28 && (chunk >> 4) != 0)
            throw Error(Errc::MalformedLine, "gate delta overflows 32 bits");
        x |= chunk << shift;
        if (!(ch & 0x80u))
            break;
        shift += 7;
        if (shift > 28)
            throw Error(Errc::MalformedLine, "gate delta overflows 32 bits");
    }
    r.seek(pos);
    return x;
}

} // namespace

const std::string* Aig::symbol(SymbolKind kind, std::size_t pos) const
{
    const auto it = symbols.find({kind, pos});
    return it == symbols.end() ? nullptr : &it->second;
}

Aig parse_ascii(std::string_view text)
{
    LineReader r(text);
    const auto h = parse_header(r.next_line(), "aag");
    Aig a;
    a.max_var = h.max_var;
    Definitions defs(h.max_var);

    for (unsigned i = 0; i < h.inputs; ++i) {
        const auto n = parse_numbers(require_line(r, "input"), 1, 1, "input");
        defs.define(n[0]);
        a.inputs.push_back(n[0]);
    }
    for (unsigned i = 0; i < h.latches; ++i) {
        const auto n = parse_numbers(require_line(r, "latch"), 2, 3, "latch");
        if (n.size() == 3 && n[2] != 0)
            throw Error(Errc::UnsupportedFeature, "latch reset value " + std::to_string(n[2]));
        defs.define(n[0]);
        a.latches.push_back({n[0], n[1]});
    }
    for (unsigned i = 0; i < h.outputs; ++i) {
        const auto n = parse_numbers(require_line(r, "output"), 1, 1, "output");
        a.outputs.push_back(n[0]);
    }
    for (unsigned i = 0; i < h.ands; ++i) {
        const auto n = parse_numbers(require_line(r, "and"), 3, 3, "and");
        defs.define(n[0]);
        a.ands.push_back({n[0], n[1], n[2]});
    }

    for (const auto& l : a.latches)
        defs.use(l.next);
    for (auto o : a.outputs)
        defs.use(o);
    for (const auto& g : a.ands) {
        defs.use(g.rhs0);
        defs.use(g.rhs1);
    }

    parse_trailer(r, a);
    return a;
}

Aig parse_binary(std::string_view bytes)
{
    LineReader r(bytes);
    const auto h = parse_header(r.next_line(), "aig");
    if (std::uint64_t{h.inputs} + h.latches + h.ands != h.max_var)
        throw Error(Errc::CountMismatch, "binary header requires M = I + L + A");
    Aig a;
    a.max_var = h.max_var;

    for (unsigned i = 0; i < h.inputs; ++i)
        a.inputs.push_back(make_lit(i + 1));
    for (unsigned i = 0; i < h.latches; ++i) {
        const auto n = parse_numbers(require_line(r, "latch"), 1, 2, "latch");
        if (n.size() == 2 && n[1] != 0)
            throw Error(Errc::UnsupportedFeature, "latch reset value " + std::to_string(n[1]));
        a.latches.push_back({make_lit(h.inputs + i + 1), n[0]});
    }
    for (unsigned i = 0; i < h.outputs; ++i) {
        const auto n = parse_numbers(require_line(r, "output"), 1, 1, "output");
        a.outputs.push_back(n[0]);
    }

    const auto check = [&](Lit lit) {
        if (var_of(lit) > h.max_var)
            throw Error(Errc::UndefinedLiteral, "literal " + std::to_string(lit));
    };
    for (const auto& l : a.latches)
        check(l.next);
    for (auto o : a.outputs)
        check(o);

    for (unsigned i = 0; i < h.ands; ++i) {
        const Lit lhs = make_lit(h.inputs + h.latches + i + 1);
        const auto d0 = decode_delta(r);
        const auto d1 = decode_delta(r);
        if (d0 == 0 || d0 > lhs)
            throw Error(Errc::MalformedLine, "gate " + std::to_string(lhs) + " has delta " + std::to_string(d0));
        const Lit rhs0 = lhs - d0;
        if (d1 > rhs0)
            throw Error(Errc::MalformedLine, "gate " + std::to_string(lhs) + " has delta " + std::to_string(d1));
        a.ands.push_back({lhs, rhs0, rhs0 - d1});
    }

    parse_trailer(r, a);
    return a;
}

Aig parse(std::string_view bytes)
{
    if (bytes.starts_with("aig"))
        return parse_binary(bytes);
    return parse_ascii(bytes);
}

std::string emit_ascii(const Aig& a)
{
    std::ostringstream out;
    out << "aag " << a.max_var << ' ' << a.inputs.size() << ' ' << a.latches.size() << ' ' << a.outputs.size()
        << ' ' << a.ands.size() << '\n';
    for (auto i : a.inputs)
        out << i << '\n';
    for (const auto& l : a.latches)
        out << l.lit << ' ' << l.next << '\n';
    for (auto o : a.outputs)
        out << o << '\n';
    for (const auto& g : a.ands)
        out << g.lhs << ' ' << g.rhs0 << ' ' << g.rhs1 << '\n';
    write_trailer(out, a);
    return out.str();
}

std::string emit_binary(const Aig& source)
{
    const auto a = reindex(source);
    std::ostringstream out;
    out << "aig " << a.max_var << ' ' << a.inputs.size() << ' ' << a.latches.size() << ' ' << a.outputs.size()
        << ' ' << a.ands.size() << '\n';
    for (const auto& l : a.latches)
        out << l.next << '\n';
    for (auto o : a.outputs)
        out << o << '\n';
    std::string gates;
    for (const auto& g : a.ands) {
        encode_delta(gates, g.lhs - g.rhs0);
        encode_delta(gates, g.rhs0 - g.rhs1);
    }
    out << gates;
    write_trailer(out, a);
    return out.str();
}

std::string emit(const Aig& a, Format format)
{
    return format == Format::Binary ? emit_binary(a) : emit_ascii(a);
}

Aig read_file(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw Error(Errc::IoFailure, "cannot open " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse(buf.str());
}

void write_file(const std::filesystem::path& path, const Aig& a, Format format)
{
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out)
        throw Error(Errc::IoFailure, "cannot write " + path.string());
    out << emit(a, format);
    if (!out)
        throw Error(Errc::IoFailure, "short write to " + path.string());
}

std::vector<std::size_t> topological_order(const Aig& a)
{
    constexpr std::size_t none = static_cast<std::size_t>(-1);
    std::vector<std::size_t> gate_of(std::size_t{a.max_var} + 1, none);
    for (std::size_t i = 0; i < a.ands.size(); ++i)
        gate_of[var_of(a.ands[i].lhs)] = i;

    std::vector<std::size_t> roots(a.ands.size());
    for (std::size_t i = 0; i < roots.size(); ++i)
        roots[i] = i;
    std::stable_sort(roots.begin(), roots.end(),
                     [&](std::size_t x, std::size_t y) { return a.ands[x].lhs < a.ands[y].lhs; });

    // 0 = unvisited, 1 = on stack, 2 = done
    std::vector<std::uint8_t> mark(a.ands.size(), 0);
    std::vector<std::size_t> order;
    order.reserve(a.ands.size());
    std::vector<std::pair<std::size_t, int>> stack;

    for (auto root : roots) {
        if (mark[root] != 0)
            continue;
        stack.push_back({root, 0});
        mark[root] = 1;
        while (!stack.empty()) {
            auto& [gate, child] = stack.back();
            if (child < 2) {
                const Lit operand = child == 0 ? a.ands[gate].rhs0 : a.ands[gate].rhs1;
                ++child;
                const auto dep = gate_of[var_of(operand)];
                if (dep == none || mark[dep] == 2)
                    continue;
                if (mark[dep] == 1)
                    throw Error(Errc::NotReindexable, "combinational cycle through variable " +
                                                          std::to_string(var_of(operand)));
                mark[dep] = 1;
                stack.push_back({dep, 0});
                continue;
            }
            mark[gate] = 2;
            order.push_back(gate);
            stack.pop_back();
        }
    }
    return order;
}

Aig reindex(const Aig& a)
{
    const auto order = topological_order(a);
    constexpr unsigned unmapped = static_cast<unsigned>(-1);
    std::vector<unsigned> new_var(std::size_t{a.max_var} + 1, unmapped);
    new_var[0] = 0;
    unsigned next = 1;
    for (auto i : a.inputs)
        new_var[var_of(i)] = next++;
    for (const auto& l : a.latches)
        new_var[var_of(l.lit)] = next++;
    for (auto g : order)
        new_var[var_of(a.ands[g].lhs)] = next++;

    const auto map = [&](Lit lit) {
        const auto v = new_var[var_of(lit)];
        if (v == unmapped)
            throw Error(Errc::UndefinedLiteral, "literal " + std::to_string(lit));
        return make_lit(v, is_negated(lit));
    };

    Aig b;
    b.max_var = next - 1;
    for (auto i : a.inputs)
        b.inputs.push_back(map(i));
    for (const auto& l : a.latches)
        b.latches.push_back({map(l.lit), map(l.next)});
    for (auto o : a.outputs)
        b.outputs.push_back(map(o));
    for (auto g : order) {
        const auto& gate = a.ands[g];
        Lit r0 = map(gate.rhs0);
        Lit r1 = map(gate.rhs1);
        if (r0 < r1)
            std::swap(r0, r1);
        b.ands.push_back({map(gate.lhs), r0, r1});
    }
    b.symbols = a.symbols;
    b.comments = a.comments;
    return b;
}

InputPartition classify_inputs(const Aig& a)
{
    InputPartition p;
    for (std::size_t i = 0; i < a.inputs.size(); ++i) {
        const auto* name = a.symbol(SymbolKind::Input, i);
        if (name && name->starts_with(controllable_prefix))
            p.controllable.push_back(i);
        else
            p.uncontrollable.push_back(i);
    }
    return p;
}

void validate_spec(const Aig& a)
{
    if (a.outputs.size() != 1)
        throw Error(Errc::UnsupportedFeature,
                    "specification must have exactly one output, found " + std::to_string(a.outputs.size()));
}

std::string_view to_string(Status s)
{
    switch (s) {
    case Status::Realizable: return "realizable";
    case Status::Unrealizable: return "unrealizable";
    case Status::Unknown: return "unknown";
    }
    return "unknown";
}

Status status_from_string(std::string_view s)
{
    std::string lower(s);
    std::transform(lower.begin(), lower.end(), lower.begin(),
                   [](unsigned char ch) { return static_cast<char>(std::tolower(ch)); });
    if (lower == "realizable")
        return Status::Realizable;
    if (lower == "unrealizable")
        return Status::Unrealizable;
    return Status::Unknown;
}

Status read_status(const Aig& a)
{
    const auto trim = [](std::string_view s) {
        while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front())))
            s.remove_prefix(1);
        while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back())))
            s.remove_suffix(1);
        return s;
    };

    auto found = Status::Unknown;
    for (const auto& line : a.comments) {
        auto s = trim(line);
        if (!s.starts_with("STATUS"))
            continue;
        s = trim(s.substr(6));
        if (!s.starts_with(':'))
            continue;
        const auto value = status_from_string(trim(s.substr(1)));
        if (value == Status::Unknown)
            continue;
        if (found != Status::Unknown && found != value)
            throw Error(Errc::ConflictingStatus, "both realizable and unrealizable STATUS lines");
        found = value;
    }
    return found;
}

Lit Builder::add_input(std::string name)
{
    if (!aig_.latches.empty() || !aig_.ands.empty())
        throw std::logic_error("inputs must be declared before latches and gates");
    const Lit lit = make_lit(fresh_var());
    if (!name.empty())
        aig_.symbols[{SymbolKind::Input, aig_.inputs.size()}] = std::move(name);
    aig_.inputs.push_back(lit);
    return lit;
}

Lit Builder::add_latch(std::string name)
{
    if (!aig_.ands.empty())
        throw std::logic_error("latches must be declared before gates");
    const Lit lit = make_lit(fresh_var());
    if (!name.empty())
        aig_.symbols[{SymbolKind::Latch, aig_.latches.size()}] = std::move(name);
    aig_.latches.push_back({lit, lit_false});
    return lit;
}

void Builder::set_next(Lit latch, Lit next)
{
    for (auto& l : aig_.latches) {
        if (l.lit == latch) {
            l.next = next;
            return;
        }
    }
    throw std::logic_error("not a latch literal: " + std::to_string(latch));
}

void Builder::add_output(Lit lit, std::string name)
{
    if (!name.empty())
        aig_.symbols[{SymbolKind::Output, aig_.outputs.size()}] = std::move(name);
    aig_.outputs.push_back(lit);
}

void Builder::add_comment(std::string line) { aig_.comments.push_back(std::move(line)); }

Lit Builder::make_and(Lit a, Lit b)
{
    if (a == lit_false || b == lit_false || a == negate(b))
        return lit_false;
    if (a == lit_true || a == b)
        return b;
    if (b == lit_true)
        return a;
    const Lit lhs = make_lit(fresh_var());
    aig_.ands.push_back({lhs, std::max(a, b), std::min(a, b)});
    return lhs;
}

Lit Builder::make_xor(Lit a, Lit b)
{
    return make_and(negate(make_and(a, b)), negate(make_and(negate(a), negate(b))));
}

Lit Builder::make_ite(Lit sel, Lit then_lit, Lit else_lit)
{
    return make_or(make_and(sel, then_lit), make_and(negate(sel), else_lit));
}

Lit Builder::make_and_all(const std::vector<Lit>& lits)
{
    Lit acc = lit_true;
    for (auto l : lits)
        acc = make_and(acc, l);
    return acc;
}

Lit Builder::make_or_all(const std::vector<Lit>& lits)
{
    Lit acc = lit_false;
    for (auto l : lits)
        acc = make_or(acc, l);
    return acc;
}

Aig Builder::build() && { return std::move(aig_); }

} // namespace arena::aiger
