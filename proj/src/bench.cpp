#include "arena/bench.hpp"

#include "arena/dd.hpp"
#include "arena/error.hpp"
#include "arena/game.hpp"

#include "json.hpp"

#include <fstream>
#include <functional>

namespace arena::bench {

using aiger::Builder;
using aiger::Lit;
using aiger::Status;
using json = nlohmann::json;

namespace {

void check_range(std::string_view family, int value, int lo, int hi)
{
    if (value < lo || value > hi)
        throw Error(Errc::ParamOutOfRange, std::string(family) + " parameter " + std::to_string(value) +
                                               " outside [" + std::to_string(lo) + ", " + std::to_string(hi) + "]");
}

Generated finish(Builder&& b, std::string family, std::string param, int value, std::string category,
                 Status status)
{
    b.add_comment(family + " " + param + "=" + std::to_string(value));
    if (status != Status::Unknown)
        b.add_comment("STATUS : " + std::string(aiger::to_string(status)));
    Generated g;
    g.instance.family = family;
    g.instance.params = {{param, value}};
    g.instance.file = family + "_" + param + std::to_string(value) + ".aag";
    g.instance.category = std::move(category);
    g.instance.status = status;
    g.circuit = std::move(b).build();
    return g;
}

std::vector<Lit> add_latches(Builder& b, const std::string& prefix, int count)
{
    std::vector<Lit> out;
    for (int i = 0; i < count; ++i)
        out.push_back(b.add_latch(prefix + std::to_string(i)));
    return out;
}

// Ripple-carry increment by `inc`; returns the sum bits.
std::vector<Lit> increment(Builder& b, const std::vector<Lit>& bits, Lit inc)
{
    std::vector<Lit> sum;
    Lit carry = inc;
    for (auto bit : bits) {
        sum.push_back(b.make_xor(bit, carry));
        carry = b.make_and(bit, carry);
    }
    return sum;
}

Generated counter(std::string family, int n, bool gated_reset)
{
    check_range(family, n, 1, 16);
    Builder b;
    const Lit inc = b.add_input("inc");
    const Lit enable = gated_reset ? b.add_input("enable") : aiger::lit_true;
    const Lit reset = b.add_input("controllable_reset");
    const auto bits = add_latches(b, "cnt", n);

    const Lit clear = b.make_and(reset, enable);
    const auto sum = increment(b, bits, inc);
    for (int i = 0; i < n; ++i)
        b.set_next(bits[i], b.make_and(aiger::negate(clear), sum[i]));
    b.add_output(b.make_and_all(bits), "err");
    return finish(std::move(b), family, "n", n, "counters", gated_reset ? Status::Unrealizable : Status::Realizable);
}

int width_for(int k)
{
    int bits = 0;
    while ((1 << bits) <= k)
        ++bits;
    return bits;
}

} // namespace

Generated gen_counter_race(int n) { return counter("counter_race", n, false); }

Generated gen_forced_overflow(int n) { return counter("forced_overflow", n, true); }

Generated gen_mux_arbiter(int k)
{
    check_range("mux_arbiter", k, 1, 8);
    const int width = width_for(k);
    Builder b;
    std::vector<Lit> req, grant;
    for (int i = 0; i < k; ++i)
        req.push_back(b.add_input("req" + std::to_string(i)));
    for (int i = 0; i < k; ++i)
        grant.push_back(b.add_input("controllable_grant" + std::to_string(i)));
    std::vector<std::vector<Lit>> wait;
    for (int i = 0; i < k; ++i)
        wait.push_back(add_latches(b, "wait" + std::to_string(i) + "_", width));

    std::vector<Lit> errors;
    for (int i = 0; i < k; ++i) {
        const Lit active = b.make_or(req[i], b.make_or_all(wait[i]));
        const Lit starving = b.make_and(active, aiger::negate(grant[i]));
        const auto bumped = increment(b, wait[i], aiger::lit_true);
        for (int j = 0; j < width; ++j)
            b.set_next(wait[i][j], b.make_and(starving, bumped[j]));

        std::vector<Lit> at_deadline;
        for (int j = 0; j < width; ++j)
            at_deadline.push_back(((k >> j) & 1) ? wait[i][j] : aiger::negate(wait[i][j]));
        errors.push_back(b.make_and_all(at_deadline));
    }
    for (int i = 0; i < k; ++i)
        for (int j = i + 1; j < k; ++j)
            errors.push_back(b.make_and(grant[i], grant[j]));
    b.add_output(b.make_or_all(errors), "err");
    return finish(std::move(b), "mux_arbiter", "k", k, "arbiters", k <= 3 ? Status::Realizable : Status::Unknown);
}

Generated gen_delay_line(int n)
{
    check_range("delay_line", n, 1, 16);
    Builder b;
    const Lit in = b.add_input("in");
    const Lit echo = b.add_input("controllable_echo");
    const auto line = add_latches(b, "d", n);
    b.set_next(line[0], in);
    for (int i = 1; i < n; ++i)
        b.set_next(line[i], line[i - 1]);
    const Lit expected = b.make_xor(line[n - 1], in);
    b.add_output(b.make_xor(echo, expected), "err");
    return finish(std::move(b), "delay_line", "n", n, "pipelines", Status::Realizable);
}

Generated gen_predict(int n)
{
    check_range("predict", n, 1, 8);
    Builder b;
    const Lit in = b.add_input("in");
    const Lit guess = b.add_input("controllable_guess");
    const auto guesses = add_latches(b, "q", n);
    const auto valid = add_latches(b, "v", n);
    b.set_next(guesses[0], guess);
    b.set_next(valid[0], aiger::lit_true);
    for (int i = 1; i < n; ++i) {
        b.set_next(guesses[i], guesses[i - 1]);
        b.set_next(valid[i], valid[i - 1]);
    }
    b.add_output(b.make_and(valid[n - 1], b.make_xor(guesses[n - 1], in)), "err");
    return finish(std::move(b), "predict", "n", n, "pipelines", Status::Unrealizable);
}

Generated gen_xor_track(int n)
{
    check_range("xor_track", n, 1, 8);
    Builder b;
    std::vector<Lit> in;
    for (int i = 0; i < n; ++i)
        in.push_back(b.add_input("in" + std::to_string(i)));
    const Lit parity = b.add_input("controllable_parity");
    const auto memory = add_latches(b, "m", n);
    for (int i = 0; i < n; ++i)
        b.set_next(memory[i], in[i]);
    Lit acc = aiger::lit_false;
    for (auto m : memory)
        acc = b.make_xor(acc, m);
    b.add_output(b.make_xor(parity, acc), "err");
    return finish(std::move(b), "xor_track", "n", n, "parity", Status::Realizable);
}

std::vector<std::string> families()
{
    return {"counter_race", "forced_overflow", "mux_arbiter", "delay_line", "predict", "xor_track"};
}

Generated generate(std::string_view family, int param)
{
    static const std::map<std::string, std::function<Generated(int)>, std::less<>> table = {
        {"counter_race", gen_counter_race}, {"forced_overflow", gen_forced_overflow},
        {"mux_arbiter", gen_mux_arbiter},   {"delay_line", gen_delay_line},
        {"predict", gen_predict},           {"xor_track", gen_xor_track},
    };
    const auto it = table.find(family);
    if (it == table.end())
        throw Error(Errc::InvalidConfig, "unknown benchmark family '" + std::string(family) + "'");
    return it->second(param);
}

std::vector<PlanItem> default_plan()
{
    return {
        {"counter_race", 1, 16, "counters"},   {"forced_overflow", 1, 16, "counters"},
        {"mux_arbiter", 1, 8, "arbiters"},     {"delay_line", 1, 16, "pipelines"},
        {"predict", 1, 8, "pipelines"},        {"xor_track", 1, 8, "parity"},
    };
}

std::vector<PlanItem> read_plan(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in)
        throw Error(Errc::IoFailure, "cannot open " + path.string());
    std::vector<PlanItem> plan;
    try {
        const auto doc = json::parse(in);
        for (const auto& item : doc) {
            PlanItem p;
            p.family = item.at("family").get<std::string>();
            p.from = item.at("from").get<int>();
            p.to = item.at("to").get<int>();
            p.category = item.value("category", std::string{});
            plan.push_back(std::move(p));
        }
    } catch (const json::exception& e) {
        throw Error(Errc::InvalidConfig, path.string() + ": " + e.what());
    }
    return plan;
}

int difficulty_bucket(std::size_t bdd_nodes)
{
    int bucket = 1;
    std::size_t bound = 100;
    while (bucket < 5 && bdd_nodes > bound) {
        ++bucket;
        bound *= 10;
    }
    return bucket;
}

std::size_t solve_effort(const aiger::Aig& spec)
{
    dd::Manager m;
    const auto g = game::build_game(spec, aiger::classify_inputs(spec), m);
    (void)game::solve(g);
    return m.size();
}

std::vector<BenchmarkInstance> populate_repo(const std::filesystem::path& root, const std::vector<PlanItem>& plan)
{
    namespace fs = std::filesystem;
    std::vector<BenchmarkInstance> index;
    try {
        fs::create_directories(root);
        for (const auto& item : plan) {
            for (int v = item.from; v <= item.to; ++v) {
                auto g = generate(item.family, v);
                if (!item.category.empty())
                    g.instance.category = item.category;
                g.instance.file = g.instance.category + "/" + g.instance.file;
                g.instance.difficulty_hint = difficulty_bucket(solve_effort(g.circuit));
                fs::create_directories(root / g.instance.category);
                aiger::write_file(root / g.instance.file, g.circuit);
                index.push_back(g.instance);
            }
        }
    } catch (const fs::filesystem_error& e) {
        throw Error(Errc::IoFailure, e.what());
    }
    write_index(root / "index.json", index);
    return index;
}

std::vector<BenchmarkInstance> read_index(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in)
        throw Error(Errc::IoFailure, "cannot open " + path.string());
    std::vector<BenchmarkInstance> out;
    try {
        const auto doc = json::parse(in);
        for (const auto& e : doc) {
            BenchmarkInstance b;
            b.family = e.at("family").get<std::string>();
            b.params = e.at("params").get<std::map<std::string, int>>();
            b.file = e.at("file").get<std::string>();
            b.category = e.at("category").get<std::string>();
            b.status = aiger::status_from_string(e.at("status").get<std::string>());
            b.difficulty_hint = e.at("difficulty_hint").get<int>();
            out.push_back(std::move(b));
        }
    } catch (const json::exception& e) {
        throw Error(Errc::InvalidConfig, path.string() + ": " + e.what());
    }
    return out;
}

void write_index(const std::filesystem::path& path, const std::vector<BenchmarkInstance>& index)
{
    json doc = json::array();
    for (const auto& b : index) {
        doc.push_back({
            {"family", b.family},
            {"params", b.params},
            {"file", b.file},
            {"category", b.category},
            {"status", std::string(aiger::to_string(b.status))},
            {"difficulty_hint", b.difficulty_hint},
        });
    }
    std::ofstream out(path, std::ios::trunc);
    if (!out)
        throw Error(Errc::IoFailure, "cannot write " + path.string());
    out << doc.dump(2) << '\n';
}

} // namespace arena::bench
