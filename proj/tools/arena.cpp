// arena: benchmark generation, solving, verification and competition runs
// for AIGER safety games.

#include "arena/aiger.hpp"
#include "arena/bench.hpp"
#include "arena/dd.hpp"
#include "arena/error.hpp"
#include "arena/game.hpp"
#include "arena/harness.hpp"
#include "arena/synth.hpp"
#include "arena/verify.hpp"

#include "CLI11.hpp"
#include "json.hpp"

#include <fstream>
#include <iostream>
#include <thread>
#include <unistd.h>

namespace fs = std::filesystem;
using namespace arena;

namespace {

struct SolveArgs
{
    std::string spec;
    std::string synth;
    bool witness = false;
    std::string counterstrategy;
    bool binary = false;
    bool verbose = false;
};

int cmd_solve(const SolveArgs& a)
{
    const auto spec = aiger::read_file(a.spec);
    aiger::validate_spec(spec);
    const auto p = aiger::classify_inputs(spec);
    dd::Manager m;
    const auto g = game::build_game(spec, p, m);
    game::SolveOptions opts;
    if (a.verbose)
        opts.log = &std::cerr;
    const auto r = game::solve(g, opts);
    const auto format = a.binary ? aiger::Format::Binary : aiger::Format::Ascii;

    if (r.realizable && !a.synth.empty()) {
        const auto strategy = game::extract_strategy(g, r);
        const auto sol = synth::encode_solution(spec, p, g, strategy);
        aiger::write_file(a.synth, sol.circuit, format);
        if (a.witness)
            aiger::write_file(synth::witness_path(a.synth), synth::encode_witness(g, r.winning_region).circuit);
    }
    if (!r.realizable && !a.counterstrategy.empty()) {
        const auto cs = game::extract_counter_strategy(g, r);
        aiger::write_file(a.counterstrategy, synth::encode_counter_strategy(spec, p, g, cs), format);
    }
    std::cout << (r.realizable ? "REALIZABLE" : "UNREALIZABLE") << std::endl;
    return 0;
}

int cmd_gen(const std::string& out, const std::string& plan)
{
    const auto items = plan.empty() ? bench::default_plan() : bench::read_plan(plan);
    const auto index = bench::populate_repo(out, items);
    std::cout << "wrote " << index.size() << " instances to " << out << '\n';
    return 0;
}

int cmd_select(const std::string& index_path, std::size_t quota, std::uint64_t seed, std::string out)
{
    const auto picked = harness::select_benchmarks(bench::read_index(index_path), quota, seed);
    if (out.empty())
        out = (fs::path(index_path).parent_path() / "selection.json").string();
    bench::write_index(out, picked);
    std::cout << "selected " << picked.size() << " instances into " << out << '\n';
    return 0;
}

std::string sanitize(std::string s)
{
    for (auto& c : s)
        if (!std::isalnum(static_cast<unsigned char>(c)) && c != '-' && c != '_' && c != '.')
            c = '_';
    return s;
}

harness::Registry self_entrant()
{
    return harness::parse_tools(R"([{"name": "arena", "command": "{self} solve {input} --synth {output} --witness",
                                     "subtrack": "synthesis", "mode": "sequential"}])");
}

struct RunArgs
{
    std::string tools;
    std::string benchmarks;
    std::string root;
    std::string mode;
    double timeout = 60;
    std::uint64_t mem_mib = 4096;
    unsigned jobs = 1;
    std::string out = "arena-out";
    bool disqualify = false;
    double scale_base = 10;
    std::string size_kind = "controller";
};

harness::Rules make_rules(bool disqualify, double base, const std::string& kind, const std::string& reference)
{
    harness::Rules rules;
    rules.disqualify = disqualify;
    rules.quality.scale_base = base;
    rules.quality.size_kind = harness::size_kind_from_string(kind);
    if (!reference.empty()) {
        std::ifstream in(reference);
        if (!in)
            throw Error(Errc::IoFailure, "cannot open " + reference);
        rules.quality.reference = nlohmann::json::parse(in).get<std::map<std::string, double>>();
    }
    return rules;
}

int cmd_run(const RunArgs& a)
{
    auto registry = a.tools.empty() ? self_entrant() : harness::load_tools(a.tools);
    const auto index = bench::read_index(a.benchmarks);
    const fs::path root = a.root.empty() ? fs::absolute(a.benchmarks).parent_path() : fs::absolute(a.root);
    const fs::path out = fs::absolute(a.out);
    const fs::path scratch = harness::workdir() / ("run-" + std::to_string(getpid()));

    harness::Limits limits;
    limits.timeout_seconds = a.timeout;
    limits.memory_bytes = a.mem_mib << 20;
    limits.model_check.time_limit = std::chrono::duration<double>(a.timeout);

    std::vector<harness::Job> jobs;
    for (auto tool : registry.tools()) {
        if (!a.mode.empty())
            tool.mode = harness::mode_from_string(a.mode);
        for (const auto& b : index) {
            harness::Job j;
            j.tool = tool;
            j.benchmark = b;
            j.input = root / b.file;
            if (tool.subtrack == harness::Subtrack::Synthesis)
                j.output = out / "solutions" / sanitize(tool.id()) / b.file;
            j.scratch = scratch / std::to_string(jobs.size());
            jobs.push_back(std::move(j));
        }
    }
    const auto records = harness::run_all(jobs, limits, a.jobs);
    std::error_code ec;
    fs::remove_all(scratch, ec);

    const auto board = harness::score(records, make_rules(a.disqualify, a.scale_base, a.size_kind, ""));
    harness::report(board, records, out);
    std::cout << harness::ranking_text(board);
    return 0;
}

int cmd_verify(const std::string& spec_path, const std::string& sol_path, const std::string& witness_path,
               std::size_t max_steps)
{
    const auto spec = aiger::read_file(spec_path);
    const auto sol = aiger::read_file(sol_path);
    std::optional<aiger::Aig> witness;
    if (!witness_path.empty())
        witness = aiger::read_file(witness_path);
    verify::ModelCheckOptions opts;
    opts.max_steps = max_steps;
    const auto r = verify::verify_solution(spec, sol, witness ? &*witness : nullptr, opts);
    std::cout << verify::format_verdict(r.verdict);
    if (!r.verdict.detail.empty())
        std::cout << "detail: " << r.verdict.detail << '\n';
    if (r.fallback_used)
        std::cout << "witness inconclusive, model checking fallback used\n";
    switch (r.verdict.status) {
    case verify::Status::Verified: return 0;
    case verify::Status::Falsified: return 1;
    case verify::Status::Inconclusive: return 2;
    }
    return 2;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"AIGER safety synthesis: generate, solve, verify and run competitions"};
    app.require_subcommand(1);

    SolveArgs solve;
    auto* s = app.add_subcommand("solve", "Decide realizability; prints REALIZABLE or UNREALIZABLE");
    s->add_option("spec", solve.spec, "Specification (aag or aig)")->required();
    s->add_option("--synth", solve.synth, "Write the controller-augmented solution here");
    s->add_flag("--witness", solve.witness, "Also write <synth>.winregion.aag");
    s->add_option("--counterstrategy", solve.counterstrategy, "Write the environment strategy when unrealizable");
    s->add_flag("--binary", solve.binary, "Write binary AIGER");
    s->add_flag("-v,--verbose", solve.verbose, "Log fixpoint iterations to stderr");

    std::string gen_out, gen_plan;
    auto* g = app.add_subcommand("gen", "Populate a benchmark repository");
    g->add_option("--out", gen_out, "Repository root")->required();
    g->add_option("--plan", gen_plan, "JSON plan: [{family, from, to, category}]");

    std::string sel_index, sel_out;
    std::size_t sel_quota = 5;
    std::uint64_t sel_seed = 1;
    auto* sel = app.add_subcommand("select", "Stratified benchmark selection");
    sel->add_option("--index", sel_index, "index.json of the repository")->required();
    sel->add_option("--quota", sel_quota, "Instances per category");
    sel->add_option("--seed", sel_seed, "Selection seed");
    sel->add_option("--out", sel_out, "Output index (default: <root>/selection.json)");

    RunArgs run;
    auto* r = app.add_subcommand("run", "Run tools on benchmarks and score them");
    r->add_option("--tools", run.tools, "Tool configuration JSON (default: the built-in solver)");
    r->add_option("--benchmarks", run.benchmarks, "Benchmark index JSON")->required();
    r->add_option("--root", run.root, "Benchmark root (default: directory of the index)");
    r->add_option("--mode", run.mode, "Override every tool's mode: seq or par");
    r->add_option("--timeout", run.timeout, "Seconds of CPU (seq) or wall (par) time");
    r->add_option("--mem", run.mem_mib, "Memory ceiling in MiB");
    r->add_option("--jobs", run.jobs, "Concurrent jobs");
    r->add_option("--out", run.out, "Output directory");
    r->add_flag("--disqualify", run.disqualify, "Disqualify tools with wrong answers");
    r->add_option("--scale-base", run.scale_base, "Quality log base");
    r->add_option("--size-kind", run.size_kind, "full, controller or gate-equivalents");

    std::string v_spec, v_sol, v_witness;
    std::size_t v_steps = 1u << 20;
    auto* v = app.add_subcommand("verify", "Check a solution against its specification");
    v->add_option("spec", v_spec)->required();
    v->add_option("solution", v_sol)->required();
    v->add_option("--witness", v_witness, "Winning-region witness");
    v->add_option("--max-steps", v_steps, "Model checking depth bound");

    std::string sc_records, sc_out = "arena-score", sc_kind = "controller", sc_reference;
    double sc_base = 10;
    bool sc_disqualify = false;
    auto* sc = app.add_subcommand("score", "Rescore recorded runs");
    sc->add_option("--records", sc_records, "records.json from a run")->required();
    sc->add_option("--scale-base", sc_base, "Quality log base");
    sc->add_option("--size-kind", sc_kind, "full, controller or gate-equivalents");
    sc->add_option("--reference", sc_reference, "JSON map benchmark -> reference size");
    sc->add_flag("--disqualify", sc_disqualify, "Disqualify tools with wrong answers");
    sc->add_option("--out", sc_out, "Output directory");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*s)
            return cmd_solve(solve);
        if (*g)
            return cmd_gen(gen_out, gen_plan);
        if (*sel)
            return cmd_select(sel_index, sel_quota, sel_seed, sel_out);
        if (*r)
            return cmd_run(run);
        if (*v)
            return cmd_verify(v_spec, v_sol, v_witness, v_steps);
        if (*sc) {
            const auto records = harness::read_records(sc_records);
            const auto board = harness::score(records, make_rules(sc_disqualify, sc_base, sc_kind, sc_reference));
            harness::report(board, records, sc_out);
            std::cout << harness::ranking_text(board);
            return 0;
        }
    } catch (const std::exception& e) {
        std::cerr << "arena: " << e.what() << '\n';
        return 3;
    }
    return 0;
}
