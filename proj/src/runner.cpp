#include "arena/error.hpp"
#include "arena/harness.hpp"
#include "arena/synth.hpp"

#include <atomic>
#include <cerrno>
#include <chrono>
#include <cmath>
#include <cstring>
#include <fcntl.h>
#include <fstream>
#include <signal.h>
#include <sstream>
#include <sys/resource.h>
#include <sys/time.h>
#include <sys/wait.h>
#include <thread>
#include <unistd.h>

namespace arena::harness {

namespace fs = std::filesystem;

namespace {

std::string self_path()
{
    std::error_code ec;
    const auto p = fs::read_symlink("/proc/self/exe", ec);
    return ec ? std::string("arena") : p.string();
}

void replace_all(std::string& s, std::string_view from, const std::string& to)
{
    for (std::size_t pos = 0; (pos = s.find(from, pos)) != std::string::npos; pos += to.size())
        s.replace(pos, from.size(), to);
}

double seconds(const timeval& tv)
{
    return static_cast<double>(tv.tv_sec) + static_cast<double>(tv.tv_usec) * 1e-6;
}

std::string slurp(const fs::path& p)
{
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

struct ChildResult
{
    int wait_status = 0;
    rusage usage{};
    double wall = 0;
    bool wall_killed = false;
    double group_cpu = 0; // sampled just before a wall-cap kill
};

// CPU seconds of every live process in the group, including children they
// have already reaped. A killed shell never reaps its children, so wait4
// alone would miss their time.
double group_cpu_seconds(pid_t pgid)
{
    const double tick = static_cast<double>(sysconf(_SC_CLK_TCK));
    double total = 0;
    std::error_code ec;
    for (const auto& e : fs::directory_iterator("/proc", ec)) {
        const auto name = e.path().filename().string();
        if (name.empty() || name.find_first_not_of("0123456789") != std::string::npos)
            continue;
        const auto stat = slurp(e.path() / "stat");
        const auto close = stat.rfind(')');
        if (close == std::string::npos)
            continue;
        std::istringstream in(stat.substr(close + 2));
        std::string field;
        std::vector<std::string> f;
        while (f.size() < 15 && in >> field)
            f.push_back(field);
        // f[0] is the state (field 3); pgrp is field 5, utime..cstime are 14..17
        if (f.size() < 15 || std::stol(f[2]) != pgid)
            continue;
        for (int i = 11; i <= 14; ++i)
            total += static_cast<double>(std::stoull(f[i])) / tick;
    }
    return total;
}

ChildResult spawn(const std::string& command, const fs::path& out_file, const fs::path& err_file, Mode mode,
                  const Limits& limits)
{
    // Everything the child touches is prepared before fork.
    const std::string out_name = out_file.string();
    const std::string err_name = err_file.string();
    rlimit cpu{};
    const auto cpu_seconds = static_cast<rlim_t>(std::ceil(limits.timeout_seconds)) + 1;
    cpu.rlim_cur = cpu_seconds;
    cpu.rlim_max = cpu_seconds + 1;
    rlimit mem{};
    mem.rlim_cur = mem.rlim_max = static_cast<rlim_t>(limits.memory_bytes);
    const bool limit_cpu = mode == Mode::Sequential;
    const double wall_cap = mode == Mode::Sequential
                                ? std::max(limits.timeout_seconds * limits.wall_cap_factor, limits.timeout_seconds + 1.0)
                                : limits.timeout_seconds + 0.05;

    const auto start = std::chrono::steady_clock::now();
    const pid_t pid = fork();
    if (pid < 0)
        throw Error(Errc::SpawnFailure, std::string("fork: ") + std::strerror(errno));
    if (pid == 0) {
        setpgid(0, 0);
        if (limit_cpu)
            setrlimit(RLIMIT_CPU, &cpu);
        if (limits.memory_bytes > 0)
            setrlimit(RLIMIT_AS, &mem);
        const int out = open(out_name.c_str(), O_WRONLY | O_CREAT | O_TRUNC, 0644);
        const int err = open(err_name.c_str(), O_WRONLY | O_CREAT | O_TRUNC, 0644);
        const int in = open("/dev/null", O_RDONLY);
        if (out < 0 || err < 0 || in < 0)
            _exit(127);
        dup2(in, 0);
        dup2(out, 1);
        dup2(err, 2);
        execl("/bin/sh", "sh", "-c", command.c_str(), static_cast<char*>(nullptr));
        _exit(127);
    }
    setpgid(pid, pid);

    ChildResult r;
    for (;;) {
        const pid_t done = wait4(pid, &r.wait_status, WNOHANG, &r.usage);
        if (done == pid)
            break;
        if (done < 0 && errno != EINTR)
            throw Error(Errc::SpawnFailure, std::string("wait4: ") + std::strerror(errno));
        const double elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        if (elapsed > wall_cap && !r.wall_killed) {
            r.wall_killed = true;
            r.group_cpu = group_cpu_seconds(pid);
            kill(-pid, SIGKILL);
        }
        std::this_thread::sleep_for(std::chrono::milliseconds(5));
    }
    r.wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    kill(-pid, SIGKILL); // stragglers left in the process group
    return r;
}

} // namespace

std::string expand_command(const ToolConfig& t, const std::string& input, const std::string& output)
{
    std::string cmd = t.command;
    replace_all(cmd, "{input}", input);
    replace_all(cmd, "{output}", output);
    replace_all(cmd, "{mode}", t.mode == Mode::Sequential ? "seq" : "par");
    replace_all(cmd, "{self}", self_path());
    return cmd;
}

void verify_record(RunRecord& r, const fs::path& spec_path, const Limits& limits)
{
    if (r.subtrack != Subtrack::Synthesis || r.answer != Answer::Realizable || !r.solution_path)
        return;
    const auto spec = aiger::read_file(spec_path);
    aiger::Aig sol;
    try {
        sol = aiger::read_file(*r.solution_path);
    } catch (const Error& e) {
        r.verdict = verify::Status::Falsified;
        r.verdict_method = verify::Method::Syntactic;
        return;
    }
    std::optional<aiger::Aig> witness;
    if (r.witness_path) {
        try {
            witness = aiger::read_file(*r.witness_path);
        } catch (const Error&) {
            // An unreadable witness only costs the fast path.
        }
    }
    const auto res = verify::verify_solution(spec, sol, witness ? &*witness : nullptr, limits.model_check);
    r.verdict = res.verdict.status;
    r.verdict_method = res.verdict.method;
    r.fallback_used = res.fallback_used;
    r.solution_ands = sol.ands.size();
    r.controller_ands = sol.ands.size() > spec.ands.size() ? sol.ands.size() - spec.ands.size() : 0;
    r.controller_latches = sol.latches.size() > spec.latches.size() ? sol.latches.size() - spec.latches.size() : 0;
}

RunRecord run_job(const Job& job, const Limits& limits)
{
    RunRecord r;
    r.tool = job.tool.id();
    r.subtrack = job.tool.subtrack;
    r.mode = job.tool.mode;
    r.hors_concours = job.tool.hors_concours;
    r.benchmark = job.benchmark.file;
    r.known_status = job.benchmark.status;

    std::error_code ec;
    fs::create_directories(job.scratch, ec);
    if (!job.output.empty()) {
        fs::create_directories(job.output.parent_path(), ec);
        fs::remove(job.output, ec);
        fs::remove(synth::witness_path(job.output), ec);
    }
    const auto command = expand_command(job.tool, job.input.string(), job.output.string());
    const auto out_file = job.scratch / "stdout.txt";
    const auto child = spawn(command, out_file, job.scratch / "stderr.txt", r.mode, limits);

    r.cpu_seconds = std::max(seconds(child.usage.ru_utime) + seconds(child.usage.ru_stime), child.group_cpu);
    r.wall_seconds = child.wall;
    if (WIFEXITED(child.wait_status))
        r.exit_code = WEXITSTATUS(child.wait_status);
    else if (WIFSIGNALED(child.wait_status))
        r.exit_code = -WTERMSIG(child.wait_status);

    const bool cpu_killed = WIFSIGNALED(child.wait_status) &&
                            (WTERMSIG(child.wait_status) == SIGXCPU || WTERMSIG(child.wait_status) == SIGKILL) &&
                            r.mode == Mode::Sequential && !child.wall_killed;
    const auto token = scan_verdict(slurp(out_file));
    if (child.wall_killed || exceeds_limit(r.mode, r.cpu_seconds, r.wall_seconds, limits.timeout_seconds) ||
        (cpu_killed && r.cpu_seconds >= limits.timeout_seconds))
        r.answer = Answer::Timeout;
    else if (token)
        r.answer = *token;
    else
        r.answer = Answer::Crash;

    if (r.subtrack == Subtrack::Synthesis && r.answer == Answer::Realizable && !job.output.empty()) {
        if (fs::exists(job.output))
            r.solution_path = job.output.string();
        if (const auto w = synth::witness_path(job.output); fs::exists(w))
            r.witness_path = w.string();
        try {
            verify_record(r, job.input, limits);
        } catch (const Error&) {
            // The specification itself is unreadable; the answer stays unjudged.
        }
    }
    return r;
}

std::vector<RunRecord> run_all(const std::vector<Job>& jobs, const Limits& limits, unsigned workers)
{
    std::vector<RunRecord> records(jobs.size());
    std::vector<std::exception_ptr> failures(jobs.size());
    std::atomic<std::size_t> next{0};
    const auto work = [&] {
        for (std::size_t i; (i = next.fetch_add(1)) < jobs.size();) {
            try {
                records[i] = run_job(jobs[i], limits);
            } catch (...) {
                failures[i] = std::current_exception();
            }
        }
    };
    workers = std::max(1u, std::min<unsigned>(workers, static_cast<unsigned>(std::max<std::size_t>(jobs.size(), 1))));
    std::vector<std::thread> pool;
    for (unsigned w = 1; w < workers; ++w)
        pool.emplace_back(work);
    work();
    for (auto& t : pool)
        t.join();
    for (auto& f : failures)
        if (f)
            std::rethrow_exception(f);
    return records;
}

} // namespace arena::harness
