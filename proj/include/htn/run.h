#ifndef HTN_RUN_H
#define HTN_RUN_H

#include "htn/ground_actions.h"
#include "htn/ground_model.h"
#include "htn/planner.h"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace htn {

enum class PlannerKind { IShop, Shop };

const char *to_string(PlannerKind kind);
// "ishop" or "shop"; anything else raises Error.
PlannerKind parse_planner(const std::string &name);

// Process exit codes of the command-line tool.
enum ExitCode { ExitSolved = 0, ExitUnsolvable = 1, ExitTimeout = 2, ExitInputError = 3 };

int exit_code(SearchStatus status);

// Everything measured about one planner run on one problem.
struct RunRecord {
    std::string problem;
    std::string planner;
    std::string status; // SearchStatus name or "input-error"
    int exit_status = ExitInputError;
    std::string error;
    double parse_ms = 0.0;
    double ground_ms = 0.0;
    double search_ms = 0.0;
    double total_ms = 0.0;
    std::uint64_t actions_before = 0;
    std::uint64_t actions_after = 0;
    std::uint64_t methods_before = 0;
    std::uint64_t methods_after = 0;
    std::uint64_t nodes_expanded = 0;
    std::uint64_t backtracks = 0;
    std::uint64_t max_depth = 0;
    std::size_t plan_length = 0;
    // "(name a b)" per action.
    std::vector<std::string> plan;

    bool solved() const { return exit_status == ExitSolved; }
    // Total time in seconds, the quantity the agile score is computed on.
    double seconds() const { return total_ms / 1000.0; }
};

struct RunOptions {
    PlannerKind planner = PlannerKind::IShop;
    double timeout_seconds = 600.0;
    std::uint64_t max_depth = 1000000;
    GroundingOptions grounding;
};

struct RunOutput {
    RunRecord record;
    // Set for a solved iSHOP run.
    std::optional<GroundProblem> problem;
    std::optional<DecompositionTrace> trace;
};

/*
  Parses the two texts, grounds (iSHOP only) and searches. The timeout
  covers the whole run: grounding receives it as a deadline and the search
  gets what is left. Input errors are reported in the record, not thrown.
*/
RunOutput run_problem(const std::string &domain_text, const std::string &problem_text,
                      const RunOptions &options, const std::string &name = "");

} // namespace htn

#endif
