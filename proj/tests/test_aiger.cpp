#include "arena/aiger.hpp"
#include "arena/bench.hpp"
#include "arena/error.hpp"

#include "doctest.h"
#include "oracle.hpp"

#include <random>

using namespace arena;
using namespace arena::aiger;

namespace {

Errc error_of(auto&& fn)
{
    try {
        fn();
    } catch (const Error& e) {
        return e.code();
    }
    FAIL("no arena::Error thrown");
    return Errc::IoFailure;
}

// Same outputs and next-state values on random valuations.
void check_equivalent(const Aig& a, const Aig& b, std::mt19937_64& rng, int samples)
{
    REQUIRE(a.inputs.size() == b.inputs.size());
    REQUIRE(a.latches.size() == b.latches.size());
    REQUIRE(a.outputs.size() == b.outputs.size());
    const oracle::Evaluator ea(a), eb(b);
    for (int k = 0; k < samples; ++k) {
        const auto in = oracle::bits(rng(), a.inputs.size());
        const auto st = oracle::bits(rng(), a.latches.size());
        const auto va = ea.run(in, st), vb = eb.run(in, st);
        for (std::size_t o = 0; o < a.outputs.size(); ++o)
            CHECK(oracle::Evaluator::lit(va, a.outputs[o]) == oracle::Evaluator::lit(vb, b.outputs[o]));
        for (std::size_t l = 0; l < a.latches.size(); ++l)
            CHECK(oracle::Evaluator::lit(va, a.latches[l].next) == oracle::Evaluator::lit(vb, b.latches[l].next));
    }
}

} // namespace

TEST_CASE("literal helpers")
{
    CHECK(negate(negate(7u)) == 7u);
    CHECK(var_of(make_lit(5, true)) == 5);
    CHECK(is_negated(make_lit(5, true)));
    CHECK(is_constant(lit_true));
}

TEST_CASE("smallest legal specification")
{
    const auto a = parse_ascii("aag 0 0 0 1 0\n0\n");
    CHECK(a.max_var == 0);
    CHECK(a.inputs.empty());
    REQUIRE(a.outputs.size() == 1);
    CHECK(a.outputs[0] == lit_false);
    CHECK(emit_ascii(a) == "aag 0 0 0 1 0\n0\n");
    CHECK_NOTHROW(validate_spec(a));
}

TEST_CASE("single controllable input wired to the output")
{
    const auto a = parse_ascii("aag 1 1 0 1 0\n2\n2\ni0 controllable_c\n");
    REQUIRE(a.inputs == std::vector<Lit>{2});
    CHECK(a.outputs == std::vector<Lit>{2});
    REQUIRE(a.symbol(SymbolKind::Input, 0));
    CHECK(*a.symbol(SymbolKind::Input, 0) == "controllable_c");
    const auto p = classify_inputs(a);
    CHECK(p.controllable == std::vector<std::size_t>{0});
    CHECK(p.uncontrollable.empty());
}

TEST_CASE("two outputs parse but are not a specification")
{
    const auto a = parse_ascii("aag 0 0 0 2 0\n0\n0\n");
    CHECK(a.outputs.size() == 2);
    CHECK(error_of([&] { validate_spec(a); }) == Errc::UnsupportedFeature);
}

TEST_CASE("binary constant-false specification matches the ASCII one")
{
    const auto a = parse_binary("aig 0 0 0 1 0\n0\n");
    CHECK(a == parse_ascii("aag 0 0 0 1 0\n0\n"));
    CHECK(parse("aig 0 0 0 1 0\n0\n") == a);
}

TEST_CASE("malformed inputs raise their declared errors")
{
    CHECK(error_of([] { parse_ascii("aig 0 0 0 1 0\n0\n"); }) == Errc::MalformedHeader);
    CHECK(error_of([] { parse_ascii("aag 1 x 0 1 0\n"); }) == Errc::MalformedHeader);
    CHECK(error_of([] { parse_ascii("aag 1 2 0 0 0\n2\n4\n"); }) == Errc::CountMismatch);
    CHECK(error_of([] { parse_ascii("aag 2 2 0 0 0\n2\n"); }) == Errc::CountMismatch);
    CHECK(error_of([] { parse_ascii("aag 1 1 0 1 0\n2\n4\n"); }) == Errc::UndefinedLiteral);
    CHECK(error_of([] { parse_ascii("aag 2 2 0 1 0\n2\n2\n2\n"); }) == Errc::RedefinedVariable);
    CHECK(error_of([] { parse_ascii("aag 1 0 1 1 0\n2 3 1\n2\n"); }) == Errc::UnsupportedFeature);
    CHECK(error_of([] { parse_ascii("aag 1 1 0 0 0 1\n2\n2\n"); }) == Errc::UnsupportedFeature);
    CHECK(error_of([] { parse_ascii("aag 1 1 0 1 0\n2\n2\nb0 bad\n"); }) == Errc::UnsupportedFeature);
}

TEST_CASE("binary file ending inside a delta")
{
    // One gate: lhs 4 with deltas 0x80 (unterminated).
    std::string bytes = "aig 2 1 0 1 1\n4\n";
    bytes += static_cast<char>(0x80);
    CHECK(error_of([&] { parse_binary(bytes); }) == Errc::TruncatedDeltaEncoding);
}

TEST_CASE("combinational cycle cannot be reindexed")
{
    Aig a;
    a.max_var = 3;
    a.inputs = {2};
    a.ands = {{4, 6, 2}, {6, 4, 2}};
    a.outputs = {4};
    CHECK(error_of([&] { (void)emit_binary(a); }) == Errc::NotReindexable);
}

TEST_CASE("input classification by prefix")
{
    Aig a;
    a.max_var = 3;
    a.inputs = {2, 4, 6};
    a.outputs = {0};
    CHECK(classify_inputs(a).uncontrollable == std::vector<std::size_t>{0, 1, 2});
    a.symbols[{SymbolKind::Input, 0}] = "controllable_";
    a.symbols[{SymbolKind::Input, 1}] = "x";
    a.symbols[{SymbolKind::Input, 2}] = "controllable_y";
    const auto p = classify_inputs(a);
    CHECK(p.controllable == std::vector<std::size_t>{0, 2});
    CHECK(p.uncontrollable == std::vector<std::size_t>{1});

    Aig b = a;
    b.inputs.resize(2);
    b.symbols.clear();
    b.symbols[{SymbolKind::Input, 0}] = "controllable_c0";
    b.symbols[{SymbolKind::Input, 1}] = "u0";
    CHECK(classify_inputs(b).controllable == std::vector<std::size_t>{0});
    CHECK(classify_inputs(b).uncontrollable == std::vector<std::size_t>{1});
}

TEST_CASE("STATUS comments")
{
    Aig a;
    a.outputs = {0};
    CHECK(read_status(a) == Status::Unknown);
    a.comments = {"STATUS : realizable"};
    CHECK(read_status(a) == Status::Realizable);
    a.comments = {"  STATUS:UNREALIZABLE  "};
    CHECK(read_status(a) == Status::Unrealizable);
    a.comments = {"STATUS : realizable", "STATUS : unrealizable"};
    CHECK(error_of([&] { (void)read_status(a); }) == Errc::ConflictingStatus);
}

TEST_CASE("ASCII round trip is structural identity on random circuits")
{
    std::mt19937_64 rng(11);
    for (int k = 0; k < 200; ++k) {
        const auto a = oracle::random_circuit(rng, rng() % 5, rng() % 5, rng() % 20, 1 + rng() % 3);
        CHECK(parse_ascii(emit_ascii(a)) == a);
    }
}

TEST_CASE("binary round trip on random circuits")
{
    std::mt19937_64 rng(12);
    for (int k = 0; k < 200; ++k) {
        const auto a = oracle::random_circuit(rng, rng() % 5, rng() % 5, rng() % 20, 1 + rng() % 3);
        const auto b = parse_binary(emit_binary(a));
        // Already canonical circuits come back unchanged.
        CHECK(b == reindex(a));
        CHECK(parse_binary(emit_binary(b)) == b);
        CHECK(b.comments == a.comments);
        check_equivalent(a, b, rng, 20);
    }
}

TEST_CASE("reindex orders out-of-order gates")
{
    Aig a;
    a.max_var = 5;
    a.inputs = {2, 4};
    a.ands = {{10, 8, 2}, {8, 4, 2}};
    a.outputs = {11};
    const auto order = topological_order(a);
    CHECK(order == std::vector<std::size_t>{1, 0});
    const auto r = reindex(a);
    CHECK(r.max_var == 4);
    for (const auto& g : r.ands) {
        CHECK(g.lhs > g.rhs0);
        CHECK(g.rhs0 >= g.rhs1);
    }
    std::mt19937_64 rng(3);
    check_equivalent(a, r, rng, 8);
}

TEST_CASE("round trip over the generated corpus")
{
    std::mt19937_64 rng(5);
    for (const auto& item : bench::default_plan()) {
        for (int v = item.from; v <= item.to; ++v) {
            const auto g = bench::generate(item.family, v);
            CHECK(parse_ascii(emit_ascii(g.circuit)) == g.circuit);
            const auto b = parse_binary(emit_binary(g.circuit));
            check_equivalent(g.circuit, b, rng, 10);
            CHECK(read_status(b) == g.instance.status);
        }
    }
}

TEST_CASE("mutated files fail only with declared errors")
{
    std::mt19937_64 rng(99);
    const auto seed = oracle::random_circuit(rng, 3, 2, 10, 1);
    const std::string texts[] = {emit_ascii(seed), emit_binary(seed)};
    int rejected = 0;
    for (int k = 0; k < 400; ++k) {
        std::string t = texts[k % 2];
        const int edits = 1 + static_cast<int>(rng() % 3);
        for (int e = 0; e < edits; ++e) {
            const auto pos = rng() % t.size();
            switch (rng() % 3) {
            case 0: t[pos] = static_cast<char>(rng() & 0xff); break;
            case 1: t.erase(pos, 1 + rng() % 4); break;
            default: t.insert(pos, 1, "0123456789 \nabcil"[rng() % 17]); break;
            }
            if (t.empty())
                t = "a";
        }
        try {
            (void)parse(t);
        } catch (const Error&) {
            ++rejected;
        }
    }
    CHECK(rejected > 0);
}

TEST_CASE("builder folds constants and enforces section order")
{
    Builder b;
    const Lit x = b.add_input("x");
    const Lit l = b.add_latch("l");
    CHECK(b.make_and(x, lit_false) == lit_false);
    CHECK(b.make_and(x, lit_true) == x);
    CHECK(b.make_and(x, negate(x)) == lit_false);
    CHECK_THROWS_AS(b.add_input("late"), std::logic_error);
    b.set_next(l, b.make_xor(x, l));
    b.add_output(l, "err");
    const auto a = std::move(b).build();
    CHECK(a.latches.size() == 1);
    CHECK(a.ands.size() == 3);
}
