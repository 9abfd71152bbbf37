#include "arena/harness.hpp"

#include "arena/error.hpp"

#include "json.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <random>
#include <set>
#include <sstream>
#include <tuple>

namespace arena::harness {

using json = nlohmann::json;

std::string_view to_string(Subtrack s)
{
    return s == Subtrack::Realizability ? "realizability" : "synthesis";
}

std::string_view to_string(Mode m)
{
    return m == Mode::Sequential ? "sequential" : "parallel";
}

std::string_view to_string(Answer a)
{
    switch (a) {
    case Answer::Realizable: return "realizable";
    case Answer::Unrealizable: return "unrealizable";
    case Answer::Timeout: return "timeout";
    case Answer::Crash: return "crash";
    }
    return "crash";
}

Subtrack subtrack_from_string(std::string_view s)
{
    if (s == "realizability")
        return Subtrack::Realizability;
    if (s == "synthesis")
        return Subtrack::Synthesis;
    throw Error(Errc::InvalidConfig, "unknown subtrack '" + std::string(s) + "'");
}

Mode mode_from_string(std::string_view s)
{
    if (s == "sequential" || s == "seq")
        return Mode::Sequential;
    if (s == "parallel" || s == "par")
        return Mode::Parallel;
    throw Error(Errc::InvalidConfig, "unknown mode '" + std::string(s) + "'");
}

Answer answer_from_string(std::string_view s)
{
    for (auto a : {Answer::Realizable, Answer::Unrealizable, Answer::Timeout, Answer::Crash})
        if (to_string(a) == s)
            return a;
    throw Error(Errc::InvalidConfig, "unknown answer '" + std::string(s) + "'");
}

std::string_view to_string(SizeKind k)
{
    switch (k) {
    case SizeKind::FullSolution: return "full";
    case SizeKind::ControllerOnly: return "controller";
    case SizeKind::GateEquivalents: return "gate-equivalents";
    }
    return "controller";
}

SizeKind size_kind_from_string(std::string_view s)
{
    for (auto k : {SizeKind::FullSolution, SizeKind::ControllerOnly, SizeKind::GateEquivalents})
        if (to_string(k) == s)
            return k;
    throw Error(Errc::InvalidConfig, "unknown size kind '" + std::string(s) + "'");
}

std::string ToolConfig::id() const
{
    return config.empty() || config == "default" ? name : name + "[" + config + "]";
}

void Registry::add(ToolConfig t)
{
    if (t.name.empty() || t.command.empty())
        throw Error(Errc::InvalidConfig, "tool configuration needs a name and a command");
    std::size_t same_track = 0;
    for (const auto& e : tools_) {
        if (e.id() == t.id() && e.subtrack == t.subtrack)
            throw Error(Errc::InvalidConfig, "duplicate configuration '" + t.id() + "'");
        if (e.name == t.name && e.subtrack == t.subtrack)
            ++same_track;
    }
    if (same_track >= 3)
        throw Error(Errc::TooManyConfigurations,
                    "tool '" + t.name + "' already has 3 configurations in the " +
                        std::string(to_string(t.subtrack)) + " subtrack");
    tools_.push_back(std::move(t));
}

Registry parse_tools(std::string_view json_text)
{
    Registry reg;
    try {
        auto doc = json::parse(json_text);
        if (doc.is_object())
            doc = doc.at("tools");
        for (const auto& e : doc) {
            ToolConfig t;
            t.name = e.at("name").get<std::string>();
            t.config = e.value("config", std::string("default"));
            t.command = e.at("command").get<std::string>();
            t.subtrack = subtrack_from_string(e.value("subtrack", std::string("realizability")));
            t.mode = mode_from_string(e.value("mode", std::string("sequential")));
            t.hors_concours = e.value("hors_concours", false);
            reg.add(std::move(t));
        }
    } catch (const json::exception& e) {
        throw Error(Errc::InvalidConfig, e.what());
    }
    return reg;
}

Registry load_tools(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in)
        throw Error(Errc::IoFailure, "cannot open " + path.string());
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_tools(ss.str());
}

bool exceeds_limit(Mode mode, double cpu_seconds, double wall_seconds, double timeout_seconds)
{
    return (mode == Mode::Sequential ? cpu_seconds : wall_seconds) > timeout_seconds;
}

std::optional<Answer> scan_verdict(std::string_view text)
{
    while (!text.empty()) {
        const auto eol = text.find('\n');
        auto line = text.substr(0, eol);
        if (!line.empty() && line.back() == '\r')
            line.remove_suffix(1);
        if (line == "REALIZABLE")
            return Answer::Realizable;
        if (line == "UNREALIZABLE")
            return Answer::Unrealizable;
        if (eol == std::string_view::npos)
            break;
        text.remove_prefix(eol + 1);
    }
    return std::nullopt;
}

std::vector<bench::BenchmarkInstance> select_benchmarks(const std::vector<bench::BenchmarkInstance>& index,
                                                        std::size_t quota, std::uint64_t seed)
{
    if (index.empty())
        throw Error(Errc::EmptyIndex, "benchmark index is empty");
    std::map<std::string, std::array<std::vector<const bench::BenchmarkInstance*>, 5>> by_category;
    for (const auto& b : index) {
        const int bucket = std::clamp(b.difficulty_hint, 1, 5) - 1;
        by_category[b.category][bucket].push_back(&b);
    }

    std::mt19937_64 rng(seed);
    std::vector<bench::BenchmarkInstance> out;
    for (auto& [category, buckets] : by_category) {
        for (auto& bucket : buckets)
            std::shuffle(bucket.begin(), bucket.end(), rng);
        std::array<std::size_t, 5> cursor{};
        std::size_t taken = 0;
        bool progress = true;
        while (taken < quota && progress) {
            progress = false;
            for (std::size_t k = 0; k < 5 && taken < quota; ++k) {
                if (cursor[k] < buckets[k].size()) {
                    out.push_back(*buckets[k][cursor[k]++]);
                    ++taken;
                    progress = true;
                }
            }
        }
    }
    return out;
}

namespace {

bool proves_realizable(const RunRecord& r)
{
    return r.subtrack == Subtrack::Synthesis && r.answer == Answer::Realizable && r.verdict == verify::Status::Verified;
}

std::optional<aiger::Status> as_status(Answer a)
{
    if (a == Answer::Realizable)
        return aiger::Status::Realizable;
    if (a == Answer::Unrealizable)
        return aiger::Status::Unrealizable;
    return std::nullopt;
}

} // namespace

Judgement adjudicate(const std::vector<RunRecord>& records, aiger::Status known_status)
{
    Judgement j;
    if (known_status != aiger::Status::Unknown) {
        j.status = known_status;
    } else if (std::any_of(records.begin(), records.end(), proves_realizable)) {
        // A verified controller settles the question regardless of the vote.
        j.status = aiger::Status::Realizable;
        j.newly_solved = true;
    } else {
        std::size_t yes = 0, no = 0;
        for (const auto& r : records) {
            if (r.hors_concours)
                continue;
            yes += r.answer == Answer::Realizable;
            no += r.answer == Answer::Unrealizable;
        }
        if (yes > no)
            j.status = aiger::Status::Realizable;
        else if (no > yes)
            j.status = aiger::Status::Unrealizable;
        j.newly_solved = j.status != aiger::Status::Unknown;
        j.inspection = !j.newly_solved;
    }

    for (const auto& r : records) {
        const auto said = as_status(r.answer);
        Correctness c;
        if (!said)
            c = Correctness::NoAnswer;
        else if (j.status == aiger::Status::Unknown)
            c = Correctness::Unjudged;
        else if (*said != j.status)
            c = Correctness::Wrong;
        else if (r.subtrack == Subtrack::Synthesis && *said == aiger::Status::Realizable) {
            if (r.verdict == verify::Status::Verified)
                c = Correctness::Correct;
            else if (r.verdict == verify::Status::Falsified)
                c = Correctness::Wrong;
            else
                c = Correctness::Unjudged;
        } else
            c = Correctness::Correct;
        j.correctness.push_back(c);
    }
    return j;
}

double solution_size(const RunRecord& r, SizeKind kind)
{
    switch (kind) {
    case SizeKind::FullSolution: return static_cast<double>(r.solution_ands);
    case SizeKind::ControllerOnly: return static_cast<double>(r.controller_ands);
    case SizeKind::GateEquivalents:
        return static_cast<double>(r.controller_ands) + latch_gate_equivalents * static_cast<double>(r.controller_latches);
    }
    return 0;
}

double quality_points(double size, double reference, double base)
{
    const double p = 2.0 - std::log((size + 1.0) / (reference + 1.0)) / std::log(base);
    return std::clamp(p, 0.0, 4.0);
}

std::map<std::string, double> quality_score(const std::vector<RunRecord>& records, const QualityConfig& cfg)
{
    const auto verified = [](const RunRecord& r) {
        return r.answer == Answer::Realizable && r.verdict == verify::Status::Verified;
    };
    std::map<std::string, double> smallest;
    for (const auto& r : records) {
        if (!verified(r))
            continue;
        const double s = solution_size(r, cfg.size_kind);
        auto [it, fresh] = smallest.emplace(r.benchmark, s);
        if (!fresh)
            it->second = std::min(it->second, s);
    }
    std::map<std::string, double> out;
    for (const auto& r : records) {
        if (!verified(r))
            continue;
        const auto ref = cfg.reference.find(r.benchmark);
        const double reference = ref != cfg.reference.end() ? ref->second : smallest.at(r.benchmark);
        out[r.tool] += quality_points(solution_size(r, cfg.size_kind), reference, cfg.scale_base);
    }
    return out;
}

Scoreboard score(const std::vector<RunRecord>& records, const Rules& rules)
{
    Scoreboard sb;

    std::map<std::string, std::vector<std::size_t>> per_benchmark;
    for (std::size_t i = 0; i < records.size(); ++i)
        per_benchmark[records[i].benchmark].push_back(i);

    std::vector<Correctness> correctness(records.size(), Correctness::NoAnswer);
    for (const auto& [name, idx] : per_benchmark) {
        std::vector<RunRecord> group;
        aiger::Status known = aiger::Status::Unknown;
        for (auto i : idx) {
            group.push_back(records[i]);
            if (records[i].known_status != aiger::Status::Unknown)
                known = records[i].known_status;
        }
        const auto j = adjudicate(group, known);
        for (std::size_t k = 0; k < idx.size(); ++k)
            correctness[idx[k]] = j.correctness[k];
        sb.benchmarks.push_back({name, j.status, j.inspection, j.newly_solved});
    }

    std::map<std::pair<Subtrack, Mode>, std::map<std::string, ToolScore>> boards;
    std::map<std::pair<Subtrack, Mode>, std::vector<RunRecord>> board_records;
    for (std::size_t i = 0; i < records.size(); ++i) {
        const auto& r = records[i];
        const auto key = std::pair{r.subtrack, r.mode};
        auto& t = boards[key][r.tool];
        t.tool = r.tool;
        t.hors_concours = t.hors_concours || r.hors_concours;
        switch (correctness[i]) {
        case Correctness::Correct: ++t.solved; break;
        case Correctness::Wrong: ++t.wrong; break;
        case Correctness::Unjudged: break;
        case Correctness::NoAnswer:
            t.timeouts += r.answer == Answer::Timeout;
            t.crashes += r.answer == Answer::Crash;
            break;
        }
        board_records[key].push_back(r);
    }

    for (auto& [key, tools] : boards) {
        Board b;
        b.subtrack = key.first;
        b.mode = key.second;
        std::map<std::string, double> quality;
        if (key.first == Subtrack::Synthesis)
            quality = quality_score(board_records[key], rules.quality);
        for (auto& [name, t] : tools) {
            t.points = static_cast<long>(t.solved) - 4 * static_cast<long>(t.wrong);
            t.disqualified = rules.disqualify && t.wrong > 0;
            if (const auto q = quality.find(name); q != quality.end())
                t.quality = q->second;
            b.tools.push_back(t);
        }
        std::stable_sort(b.tools.begin(), b.tools.end(), [](const ToolScore& x, const ToolScore& y) {
            const auto bucket = [](const ToolScore& t) { return (t.hors_concours ? 2 : 0) + (t.disqualified ? 1 : 0); };
            if (bucket(x) != bucket(y))
                return bucket(x) < bucket(y);
            if (x.points != y.points)
                return x.points > y.points;
            if (x.quality != y.quality)
                return x.quality > y.quality;
            return x.tool < y.tool;
        });
        std::size_t rank = 0;
        for (auto& t : b.tools)
            t.rank = t.hors_concours || t.disqualified ? 0 : ++rank;
        sb.boards.push_back(std::move(b));
    }
    return sb;
}

std::string scoreboard_json(const Scoreboard& s)
{
    json doc;
    doc["boards"] = json::array();
    for (const auto& b : s.boards) {
        json tools = json::array();
        for (const auto& t : b.tools) {
            tools.push_back({
                {"tool", t.tool},
                {"rank", t.rank},
                {"solved", t.solved},
                {"wrong", t.wrong},
                {"timeouts", t.timeouts},
                {"crashes", t.crashes},
                {"points", t.points},
                {"quality", t.quality},
                {"disqualified", t.disqualified},
                {"hors_concours", t.hors_concours},
            });
        }
        doc["boards"].push_back({{"subtrack", to_string(b.subtrack)}, {"mode", to_string(b.mode)}, {"tools", tools}});
    }
    doc["benchmarks"] = json::array();
    for (const auto& b : s.benchmarks) {
        doc["benchmarks"].push_back({
            {"benchmark", b.benchmark},
            {"status", aiger::to_string(b.status)},
            {"inspection", b.inspection},
            {"newly_solved", b.newly_solved},
        });
    }
    return doc.dump(2) + "\n";
}

namespace {

std::string csv_field(std::string_view s)
{
    if (s.find_first_of(",\"\n") == std::string_view::npos)
        return std::string(s);
    std::string out = "\"";
    for (char c : s) {
        if (c == '"')
            out += '"';
        out += c;
    }
    return out + "\"";
}

std::string fixed(double v, int digits = 3)
{
    std::ostringstream os;
    os.setf(std::ios::fixed);
    os.precision(digits);
    os << v;
    return os.str();
}

} // namespace

std::string results_csv(const std::vector<RunRecord>& records)
{
    std::string out = "tool,subtrack,mode,benchmark,known_status,answer,cpu_seconds,wall_seconds,exit_code,"
                      "solution,witness,verdict,method,fallback_used,solution_ands,controller_ands,controller_latches\n";
    for (const auto& r : records) {
        out += csv_field(r.tool) + ',' + std::string(to_string(r.subtrack)) + ',' + std::string(to_string(r.mode)) +
               ',' + csv_field(r.benchmark) + ',' + std::string(aiger::to_string(r.known_status)) + ',' +
               std::string(to_string(r.answer)) + ',' + fixed(r.cpu_seconds) + ',' + fixed(r.wall_seconds) + ',' +
               std::to_string(r.exit_code) + ',' + csv_field(r.solution_path.value_or("")) + ',' +
               csv_field(r.witness_path.value_or("")) + ',' +
               (r.verdict ? std::string(verify::to_string(*r.verdict)) : "") + ',' +
               (r.verdict_method ? std::string(verify::to_string(*r.verdict_method)) : "") + ',' +
               (r.fallback_used ? "1" : "0") + ',' + std::to_string(r.solution_ands) + ',' +
               std::to_string(r.controller_ands) + ',' + std::to_string(r.controller_latches) + '\n';
    }
    return out;
}

std::string ranking_text(const Scoreboard& s)
{
    std::ostringstream os;
    for (const auto& b : s.boards) {
        os << to_string(b.subtrack) << " / " << to_string(b.mode) << '\n';
        char line[256];
        std::snprintf(line, sizeof line, "%-5s %-28s %7s %6s %6s %8s %6s %8s  %s\n", "rank", "tool", "solved", "wrong",
                      "t/o", "crashes", "points", "quality", "notes");
        os << line;
        for (const auto& t : b.tools) {
            std::string notes;
            if (t.disqualified)
                notes += "disqualified ";
            if (t.hors_concours)
                notes += "hors concours";
            const std::string rank = t.rank ? std::to_string(t.rank) : "-";
            std::snprintf(line, sizeof line, "%-5s %-28s %7zu %6zu %6zu %8zu %6ld %8.3f  %s\n", rank.c_str(),
                          t.tool.c_str(), t.solved, t.wrong, t.timeouts, t.crashes, t.points, t.quality, notes.c_str());
            os << line;
        }
        os << '\n';
    }
    return os.str();
}

std::string cactus_csv(const std::vector<RunRecord>& records, const Scoreboard& s)
{
    std::map<std::string, aiger::Status> status;
    for (const auto& b : s.benchmarks)
        status[b.benchmark] = b.status;

    std::map<std::tuple<Subtrack, Mode, std::string>, std::vector<double>> times;
    for (const auto& r : records) {
        const auto said = as_status(r.answer);
        if (!said || *said != status[r.benchmark])
            continue;
        if (r.subtrack == Subtrack::Synthesis && *said == aiger::Status::Realizable &&
            r.verdict != verify::Status::Verified)
            continue;
        times[{r.subtrack, r.mode, r.tool}].push_back(r.mode == Mode::Sequential ? r.cpu_seconds : r.wall_seconds);
    }
    std::string out = "subtrack,mode,tool,solved,seconds\n";
    for (auto& [key, ts] : times) {
        std::sort(ts.begin(), ts.end());
        for (std::size_t i = 0; i < ts.size(); ++i)
            out += std::string(to_string(std::get<0>(key))) + ',' + std::string(to_string(std::get<1>(key))) + ',' +
                   csv_field(std::get<2>(key)) + ',' + std::to_string(i + 1) + ',' + fixed(ts[i]) + '\n';
    }
    return out;
}

std::string records_json(const std::vector<RunRecord>& records)
{
    json doc = json::array();
    for (const auto& r : records) {
        json e = {
            {"tool", r.tool},
            {"subtrack", to_string(r.subtrack)},
            {"mode", to_string(r.mode)},
            {"hors_concours", r.hors_concours},
            {"benchmark", r.benchmark},
            {"known_status", aiger::to_string(r.known_status)},
            {"answer", to_string(r.answer)},
            {"cpu_seconds", r.cpu_seconds},
            {"wall_seconds", r.wall_seconds},
            {"exit_code", r.exit_code},
            {"fallback_used", r.fallback_used},
            {"solution_ands", r.solution_ands},
            {"controller_ands", r.controller_ands},
            {"controller_latches", r.controller_latches},
        };
        if (r.solution_path)
            e["solution"] = *r.solution_path;
        if (r.witness_path)
            e["witness"] = *r.witness_path;
        if (r.verdict)
            e["verdict"] = verify::to_string(*r.verdict);
        if (r.verdict_method)
            e["method"] = verify::to_string(*r.verdict_method);
        doc.push_back(std::move(e));
    }
    return doc.dump(2) + "\n";
}

std::vector<RunRecord> parse_records(std::string_view json_text)
{
    std::vector<RunRecord> out;
    try {
        for (const auto& e : json::parse(json_text)) {
            RunRecord r;
            r.tool = e.at("tool").get<std::string>();
            r.subtrack = subtrack_from_string(e.at("subtrack").get<std::string>());
            r.mode = mode_from_string(e.at("mode").get<std::string>());
            r.hors_concours = e.value("hors_concours", false);
            r.benchmark = e.at("benchmark").get<std::string>();
            r.known_status = aiger::status_from_string(e.value("known_status", std::string("unknown")));
            r.answer = answer_from_string(e.at("answer").get<std::string>());
            r.cpu_seconds = e.value("cpu_seconds", 0.0);
            r.wall_seconds = e.value("wall_seconds", 0.0);
            r.exit_code = e.value("exit_code", 0);
            r.fallback_used = e.value("fallback_used", false);
            r.solution_ands = e.value("solution_ands", std::size_t{0});
            r.controller_ands = e.value("controller_ands", std::size_t{0});
            r.controller_latches = e.value("controller_latches", std::size_t{0});
            if (e.contains("solution"))
                r.solution_path = e["solution"].get<std::string>();
            if (e.contains("witness"))
                r.witness_path = e["witness"].get<std::string>();
            if (e.contains("verdict"))
                r.verdict = verify::status_from_string(e["verdict"].get<std::string>());
            if (e.contains("method"))
                r.verdict_method = verify::method_from_string(e["method"].get<std::string>());
            out.push_back(std::move(r));
        }
    } catch (const json::exception& e) {
        throw Error(Errc::InvalidConfig, std::string("records: ") + e.what());
    }
    return out;
}

std::vector<RunRecord> read_records(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in)
        throw Error(Errc::IoFailure, "cannot open " + path.string());
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_records(ss.str());
}

void report(const Scoreboard& s, const std::vector<RunRecord>& records, const std::filesystem::path& out_dir)
{
    std::error_code ec;
    std::filesystem::create_directories(out_dir, ec);
    if (ec)
        throw Error(Errc::IoFailure, "cannot create " + out_dir.string() + ": " + ec.message());
    const auto put = [&](const char* name, const std::string& text) {
        std::ofstream out(out_dir / name, std::ios::binary | std::ios::trunc);
        if (!(out << text))
            throw Error(Errc::IoFailure, "cannot write " + (out_dir / name).string());
    };
    put("results.csv", results_csv(records));
    put("scoreboard.json", scoreboard_json(s));
    put("ranking.txt", ranking_text(s));
    put("cactus.csv", cactus_csv(records, s));
    put("records.json", records_json(records));
}

std::filesystem::path workdir()
{
    if (const char* env = std::getenv("ARENA_WORKDIR"); env && *env)
        return env;
    return std::filesystem::temp_directory_path() / "arena";
}

} // namespace arena::harness
