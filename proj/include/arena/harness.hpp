#pragma once

#include "arena/aiger.hpp"
#include "arena/bench.hpp"
#include "arena/verify.hpp"

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace arena::harness {

enum class Subtrack { Realizability, Synthesis };
enum class Mode { Sequential, Parallel };
enum class Answer { Realizable, Unrealizable, Timeout, Crash };

std::string_view to_string(Subtrack s);
std::string_view to_string(Mode m);
std::string_view to_string(Answer a);
Subtrack subtrack_from_string(std::string_view s);
Mode mode_from_string(std::string_view s); // "sequential"/"seq", "parallel"/"par"
Answer answer_from_string(std::string_view s);

// Command placeholders: {input}, {output}, {mode} ("seq" or "par") and
// {self}, the path of the running arena executable.
struct ToolConfig
{
    std::string name;
    std::string config = "default";
    std::string command;
    Subtrack subtrack = Subtrack::Realizability;
    Mode mode = Mode::Sequential;
    bool hors_concours = false;

    // "name" or "name[config]"; the entrant key used on the boards.
    std::string id() const;
};

class Registry
{
public:
    // Throws TooManyConfigurations for a fourth configuration of the same
    // tool in one subtrack and InvalidConfig for a duplicate id.
    void add(ToolConfig t);
    const std::vector<ToolConfig>& tools() const { return tools_; }

private:
    std::vector<ToolConfig> tools_;
};

// JSON: either an array of tool objects or {"tools": [...]}.
Registry load_tools(const std::filesystem::path& path);
Registry parse_tools(std::string_view json_text);

struct Limits
{
    double timeout_seconds = 60.0;
    std::uint64_t memory_bytes = std::uint64_t{4} << 30;
    // Sequential mode only: a child that stays alive this many timeouts of
    // wall time without exhausting its CPU budget is killed and judged Timeout.
    double wall_cap_factor = 2.0;
    verify::ModelCheckOptions model_check;
};

struct RunRecord
{
    std::string tool; // ToolConfig::id()
    Subtrack subtrack = Subtrack::Realizability;
    Mode mode = Mode::Sequential;
    bool hors_concours = false;
    std::string benchmark; // path relative to the benchmark root
    aiger::Status known_status = aiger::Status::Unknown;

    Answer answer = Answer::Crash;
    double cpu_seconds = 0;
    double wall_seconds = 0;
    int exit_code = 0; // negative: killed by that signal

    std::optional<std::string> solution_path;
    std::optional<std::string> witness_path;
    std::optional<verify::Status> verdict;
    std::optional<verify::Method> verdict_method;
    bool fallback_used = false;
    std::size_t solution_ands = 0;
    std::size_t controller_ands = 0;
    std::size_t controller_latches = 0;
};

// Sequential mode is judged on CPU time, parallel mode on wall time.
bool exceeds_limit(Mode mode, double cpu_seconds, double wall_seconds, double timeout_seconds);

// Exact "REALIZABLE"/"UNREALIZABLE" lines, first one wins.
std::optional<Answer> scan_verdict(std::string_view stdout_text);

std::string expand_command(const ToolConfig& t, const std::string& input, const std::string& output);

struct Job
{
    ToolConfig tool;
    bench::BenchmarkInstance benchmark;
    std::filesystem::path input;
    std::filesystem::path output; // solution location for the synthesis subtrack
    std::filesystem::path scratch; // stdout/stderr capture directory
};

// Runs one child under the limits and, for synthesis answers, verifies the
// solution. Throws SpawnFailure when the child cannot be started.
RunRecord run_job(const Job& job, const Limits& limits);

// Solution checking as done by run_job, exposed for reuse.
void verify_record(RunRecord& r, const std::filesystem::path& spec, const Limits& limits);

// One child per worker; records come back in job order.
std::vector<RunRecord> run_all(const std::vector<Job>& jobs, const Limits& limits, unsigned workers);

// Per category (in name order) up to `quota` instances, round-robin over
// difficulty buckets 1..5 with each bucket shuffled by the seeded generator.
// Throws EmptyIndex.
std::vector<bench::BenchmarkInstance> select_benchmarks(const std::vector<bench::BenchmarkInstance>& index,
                                                        std::size_t quota, std::uint64_t seed);

enum class Correctness { Correct, Wrong, Unjudged, NoAnswer };

struct Judgement
{
    aiger::Status status = aiger::Status::Unknown;
    bool inspection = false;   // no decision could be reached
    bool newly_solved = false; // decided here without a known status
    std::vector<Correctness> correctness; // aligned with the input records
};

// All records must concern the same benchmark.
Judgement adjudicate(const std::vector<RunRecord>& records, aiger::Status known_status);

enum class SizeKind { FullSolution, ControllerOnly, GateEquivalents };
std::string_view to_string(SizeKind k);
SizeKind size_kind_from_string(std::string_view s);

inline constexpr double latch_gate_equivalents = 4.0;

struct QualityConfig
{
    double scale_base = 10.0;
    SizeKind size_kind = SizeKind::ControllerOnly;
    std::map<std::string, double> reference; // benchmark -> size
};

double solution_size(const RunRecord& r, SizeKind kind);
// clamp(2 - log_b((s + 1) / (r + 1)), 0, 4)
double quality_points(double size, double reference, double base);
// Sum over Verified solutions, keyed by tool id.
std::map<std::string, double> quality_score(const std::vector<RunRecord>& records, const QualityConfig& cfg);

struct Rules
{
    bool disqualify = false;
    QualityConfig quality;
};

struct ToolScore
{
    std::string tool;
    std::size_t solved = 0;
    std::size_t wrong = 0;
    std::size_t timeouts = 0;
    std::size_t crashes = 0;
    long points = 0;
    double quality = 0;
    bool disqualified = false;
    bool hors_concours = false;
    std::size_t rank = 0; // 1-based; 0 for hors-concours entrants
};

struct Board
{
    Subtrack subtrack = Subtrack::Realizability;
    Mode mode = Mode::Sequential;
    std::vector<ToolScore> tools; // in rank order, hors concours last
};

struct BenchmarkSummary
{
    std::string benchmark;
    aiger::Status status = aiger::Status::Unknown;
    bool inspection = false;
    bool newly_solved = false;
};

struct Scoreboard
{
    std::vector<Board> boards;
    std::vector<BenchmarkSummary> benchmarks;
};

Scoreboard score(const std::vector<RunRecord>& records, const Rules& rules);

std::string scoreboard_json(const Scoreboard& s);
std::string results_csv(const std::vector<RunRecord>& records);
std::string ranking_text(const Scoreboard& s);
// Columns: subtrack, mode, tool, solved, seconds. One row per correct answer
// with the running count, answers sorted by the mode-relevant time.
std::string cactus_csv(const std::vector<RunRecord>& records, const Scoreboard& s);

std::string records_json(const std::vector<RunRecord>& records);
std::vector<RunRecord> parse_records(std::string_view json_text);
std::vector<RunRecord> read_records(const std::filesystem::path& path);

// results.csv, scoreboard.json, ranking.txt, cactus.csv and records.json.
void report(const Scoreboard& s, const std::vector<RunRecord>& records, const std::filesystem::path& out_dir);

// $ARENA_WORKDIR, or <temp>/arena.
std::filesystem::path workdir();

} // namespace arena::harness
