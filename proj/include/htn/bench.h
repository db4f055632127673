#ifndef HTN_BENCH_H
#define HTN_BENCH_H

#include "htn/run.h"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace htn {

// Times below this many seconds count as this many seconds.
constexpr double kAgileClampSeconds = 1.0;

/*
  Agile score of a solved run taking `seconds` when the best run on the
  problem took `best_seconds`: 1 / (1 + log10(T / T*)) with both times
  clamped to at least one second.
*/
double agile_score(double seconds, double best_seconds);

// Per planner: its time in seconds, or nullopt when unsolved. Unsolved
// planners score 0; when nobody solved the problem everybody scores 0.
std::map<std::string, double>
agile_scores(const std::map<std::string, std::optional<double>> &times);

struct ManifestEntry {
    std::string name;  // row label
    std::string group; // score table it belongs to
    std::string domain_path;
    std::string problem_path; // empty for generated problems
    std::string family;
    int size = 0;
};

struct Manifest {
    std::vector<std::string> planners = {"ishop", "shop"};
    double timeout_seconds = 600.0;
    // Overrides of timeout_seconds for single planners.
    std::map<std::string, double> planner_timeouts;
    std::vector<ManifestEntry> entries;
};

/*
  JSON manifest:
    {"planners": ["ishop", "shop"], "timeout": 60,
     "planner_timeouts": {"shop": 10},
     "problems": [
       {"family": "rover", "sizes": [1, 2, 3]},
       {"family": "satellite", "size": 4},
       {"domain": "d.pddl", "problem": "p.pddl", "group": "g", "name": "p1"}]}
  File paths are relative to the manifest; family domains are looked up in
  `data_dir`. Every missing file is listed in a single Error.
*/
Manifest parse_manifest(const std::string &json_text, const std::string &base_dir,
                        const std::string &data_dir);
Manifest load_manifest(const std::string &path, const std::string &data_dir);

struct BenchResult {
    std::vector<std::string> planners;
    std::vector<ManifestEntry> entries;
    // runs[entry][planner]
    std::vector<std::vector<RunRecord>> runs;
    // Per entry and planner.
    std::vector<std::vector<double>> scores;
};

// Runs every planner on every entry; `jobs` entries run at the same time.
BenchResult run_bench(const Manifest &manifest, const RunOptions &base, int jobs = 1);

/*
  Per group: one row per problem with time, plan length and score of each
  planner, then the score totals. Followed by the time and plan-length
  series. Times are the only fields that change between runs.
*/
std::string format_bench(const BenchResult &result);

} // namespace htn

#endif
