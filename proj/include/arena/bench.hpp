#pragma once

#include "arena/aiger.hpp"

#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace arena::bench {

// One entry of index.json.
struct BenchmarkInstance
{
    std::string family;
    std::map<std::string, int> params;
    std::string file; // relative to the repository root
    std::string category;
    aiger::Status status = aiger::Status::Unknown;
    int difficulty_hint = 1;

    friend bool operator==(const BenchmarkInstance&, const BenchmarkInstance&) = default;
};

struct Generated
{
    BenchmarkInstance instance;
    aiger::Aig circuit;
};

// n-bit counter bumped by the environment, reset by the controller; error at
// all-ones. Realizable. 1 <= n <= 16.
Generated gen_counter_race(int n);
// As gen_counter_race, but the reset only works while an uncontrollable
// enable is high. Unrealizable. 1 <= n <= 16.
Generated gen_forced_overflow(int n);
// k request inputs, k grants; error on two simultaneous grants or when a
// pending request has waited k steps. Realizable; labelled so up to k = 3.
// 1 <= k <= 8.
Generated gen_mux_arbiter(int k);
// The controller must echo the input seen n steps ago xor the current one.
// Realizable. 1 <= n <= 16.
Generated gen_delay_line(int n);
// The controller must guess the input n steps ahead. Unrealizable. 1 <= n <= 8.
Generated gen_predict(int n);
// The controller must output the parity of the previous step's n inputs.
// Realizable. 1 <= n <= 8.
Generated gen_xor_track(int n);

std::vector<std::string> families();
Generated generate(std::string_view family, int param);

struct PlanItem
{
    std::string family;
    int from = 1;
    int to = 1;
    std::string category; // empty: the family's default category
};

std::vector<PlanItem> default_plan();
std::vector<PlanItem> read_plan(const std::filesystem::path& path);

// Deterministic effort proxy: BDD nodes allocated while solving the
// instance, bucketed by decade (<= 1e2 -> 1, ..., > 1e5 -> 5).
int difficulty_bucket(std::size_t bdd_nodes);
std::size_t solve_effort(const aiger::Aig& spec);

// Writes every planned instance as ASCII AIGER under root/<category>/ and
// the index as root/index.json.
std::vector<BenchmarkInstance> populate_repo(const std::filesystem::path& root, const std::vector<PlanItem>& plan);

std::vector<BenchmarkInstance> read_index(const std::filesystem::path& path);
void write_index(const std::filesystem::path& path, const std::vector<BenchmarkInstance>& index);

} // namespace arena::bench
